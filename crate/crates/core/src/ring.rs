//! Ideals of `A = K[x_1..x_n]` and quotient rings `A / I`, including the
//! truncations `A_k = A / a^{k+1}`.
//!
//! A quotient ring never materializes its own arithmetic: every module
//! computation over `A / I` is carried out in `A` with the columns `g * e_j`
//! (for `g` in the reduced basis of `I`) appended to the relations.

use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::free::{FreeElement, Matrix};
use crate::groebner::GroebnerBasis;
use crate::monomial::Monomial;
use crate::poly::{PolyRing, Polynomial};

/// A finitely generated ideal with its reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
    basis: GroebnerBasis,
}

impl PartialEq for Ideal {
    /// Equality of ideals (not of generating sets).
    fn eq(&self, other: &Ideal) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Ideal, AlgebraError> {
        if gens.iter().any(|g| **g.ring() != **ring) {
            return Err(AlgebraError::RingMismatch);
        }
        let basis = GroebnerBasis::of_ideal(ring, &gens);
        Ok(Ideal {
            ring: Arc::clone(ring),
            gens,
            basis,
        })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Ideal {
        Ideal::new(ring, Vec::new()).unwrap()
    }

    /// The ideal generated by all the variables.
    pub fn maximal(ring: &Arc<PolyRing>) -> Ideal {
        Ideal::new(ring, (0..ring.nvars()).map(|i| ring.var(i)).collect()).unwrap()
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn basis_polys(&self) -> Vec<Polynomial> {
        self.basis.polynomials()
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.basis.reduce_poly(f).is_zero()
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        self.basis.reduce_poly(f)
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn is_unit(&self) -> bool {
        self.contains(&self.ring.one())
    }

    /// The ideal generated by all products of `e` generators.
    pub fn power(&self, e: u32) -> Ideal {
        if e == 0 {
            return Ideal::new(&self.ring, vec![self.ring.one()]).unwrap();
        }
        let mut prods: Vec<Polynomial> = self.gens.clone();
        for _ in 1..e {
            let mut next = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for p in &prods {
                for g in &self.gens {
                    let q = p.mul(g);
                    if !q.is_zero() && seen.insert(q.clone()) {
                        next.push(q);
                    }
                }
            }
            prods = next;
        }
        Ideal::new(&self.ring, prods).unwrap()
    }

    /// `(a_1^e, ..., a_n^e)`.
    pub fn generator_powers(&self, e: u32) -> Ideal {
        Ideal::new(&self.ring, self.gens.iter().map(|g| g.pow(e)).collect()).unwrap()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, g).unwrap()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.basis.polynomials().iter().all(|p| p.is_homogeneous())
    }

    /// Generated by a subset of the variables (the graded-local situation).
    pub fn is_generated_by_variables(&self) -> bool {
        self.gens.iter().all(|g| {
            g.len() == 1 && {
                let (m, c) = &g.terms()[0];
                c.is_one() && m.degree() == 1
            }
        })
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|p| p.to_string()).collect();
        write!(f, "<{}>", g.join(", "))
    }
}

/// `A / I` for an ideal `I` of the polynomial ring `A` (possibly `I = 0`).
#[derive(Clone, Debug)]
pub struct QuotientRing {
    base: Arc<PolyRing>,
    modulus: Ideal,
}

/// Shared handle; rings are immutable once built.
pub type Ring = Arc<QuotientRing>;

impl QuotientRing {
    pub fn polynomial(base: &Arc<PolyRing>) -> Ring {
        Arc::new(QuotientRing {
            base: Arc::clone(base),
            modulus: Ideal::zero(base),
        })
    }

    pub fn quotient(base: &Arc<PolyRing>, modulus: Ideal) -> Result<Ring, AlgebraError> {
        if **modulus.ring() != **base {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(Arc::new(QuotientRing {
            base: Arc::clone(base),
            modulus,
        }))
    }

    /// `(A / I) / J = A / (I + J)`.
    pub fn extend(&self, extra: &Ideal) -> Ring {
        Arc::new(QuotientRing {
            base: Arc::clone(&self.base),
            modulus: self.modulus.sum(extra),
        })
    }

    /// `(A / I)[z] = A[z] / I A[z]`, with the inclusion on polynomials.
    pub fn adjoin(&self, name: &str) -> Result<(Ring, impl Fn(&Polynomial) -> Polynomial), AlgebraError> {
        let base = self.base.adjoin(name)?;
        let b = Arc::clone(&base);
        let embed = move |f: &Polynomial| f.embed_into(&b).expect("prefix ring");
        let modulus = Ideal::new(&base, self.modulus.generators().iter().map(&embed).collect())?;
        Ok((QuotientRing::quotient(&base, modulus)?, embed))
    }

    /// The truncation `A_k = A / a^{k+1}` of this ring.
    pub fn level(&self, a: &Ideal, k: u32) -> Ring {
        self.extend(&a.power(k + 1))
    }

    pub fn base(&self) -> &Arc<PolyRing> {
        &self.base
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.modulus.basis().is_empty()
    }

    /// Same polynomial ring and same modulus ideal.
    pub fn same_as(&self, other: &QuotientRing) -> bool {
        *self.base == *other.base && self.modulus == other.modulus
    }

    /// Can modules over `self` be read over `other` by adding relations?
    pub fn maps_onto(&self, other: &QuotientRing) -> bool {
        *self.base == *other.base && self.modulus.is_subset(&other.modulus)
    }

    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        self.modulus.reduce(f)
    }

    pub fn is_zero(&self, f: &Polynomial) -> bool {
        self.modulus.contains(f)
    }

    pub fn reduce_vector(&self, v: &FreeElement) -> FreeElement {
        FreeElement::from_parts(&self.base, v.comps().iter().map(|c| self.reduce(c)).collect())
    }

    pub fn reduce_matrix(&self, m: &Matrix) -> Matrix {
        Matrix::from_cols_unchecked(&self.base, m.nrows(), m.columns().iter().map(|c| self.reduce_vector(c)).collect())
    }

    /// Every entry lies in the modulus.
    pub fn is_zero_matrix(&self, m: &Matrix) -> bool {
        m.columns().iter().all(|c| c.comps().iter().all(|e| self.is_zero(e)))
    }

    /// Entrywise congruence modulo the modulus.
    pub fn congruent(&self, a: &Matrix, b: &Matrix) -> bool {
        a.nrows() == b.nrows() && a.ncols() == b.ncols() && self.is_zero_matrix(&a.sub(b))
    }

    /// Columns `g * e_j` spanning `I * A^rank`.
    pub fn modulus_columns(&self, rank: usize) -> Vec<FreeElement> {
        let gb = self.modulus.basis_polys();
        let mut out = Vec::with_capacity(gb.len() * rank);
        for j in 0..rank {
            for g in &gb {
                let mut v = FreeElement::zero(&self.base, rank);
                v.comps_mut()[j] = g.clone();
                out.push(v);
            }
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        self.modulus.is_homogeneous()
    }

    /// `A / I` is local with nilpotent maximal ideal `(x_1..x_n)`: the
    /// modulus sits inside `(x_1..x_n)` and every variable is nilpotent.
    pub fn is_local_artinian(&self) -> bool {
        let polys = self.modulus.basis_polys();
        if polys.iter().any(|p| !p.constant_term().is_zero()) {
            return false;
        }
        let n = self.base.nvars();
        let leads = self.modulus.basis().leads();
        (0..n).all(|v| {
            leads.iter().any(|(_, m)| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .all(|(w, e)| (w == v) == (*e > 0))
            })
        }) && {
            // Artinian; now each variable must actually be nilpotent
            let dim = self
                .modulus
                .basis()
                .standard_monomials()
                .map(|s| s.len())
                .unwrap_or(0) as u32;
            (0..n).all(|v| {
                self.is_zero(&self.base.term(Monomial::var(n, v, dim.max(1)), self.base.field().one()))
            })
        }
    }

    /// Inverse of a unit; `None` when `f` is not invertible by the local or
    /// constant route.
    pub fn inverse(&self, f: &Polynomial) -> Option<Polynomial> {
        let f = self.reduce(f);
        let c = f.constant_term();
        if c.is_zero() {
            return None;
        }
        if f.is_constant() {
            return Some(self.base.constant(c.inv().unwrap()));
        }
        if !self.is_local_artinian() {
            return None;
        }
        // f = c (1 + n) with n nilpotent: f^{-1} = c^{-1} Σ (-n)^t
        let cinv = c.inv().unwrap();
        let n = f.scale(&cinv).sub(&self.base.one());
        let mneg = n.neg();
        let mut acc = self.base.one();
        let mut p = self.base.one();
        loop {
            p = self.reduce(&p.mul(&mneg));
            if p.is_zero() {
                break;
            }
            acc = acc.add(&p);
        }
        Some(self.reduce(&acc.scale(&cinv)))
    }
}

impl fmt::Display for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.base.field(), self.base.vars().join(","))?;
        if !self.is_polynomial_ring() {
            write!(f, "/{}", self.modulus)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_and_membership() {
        let r = PolyRing::rational(&["x", "y"]);
        let a = Ideal::maximal(&r);
        let a2 = a.power(2);
        assert_eq!(a2.basis_polys().len(), 3);
        assert!(a2.contains(&r.parse("x*y - y^2").unwrap()));
        assert!(!a2.contains(&r.var(0)));
        assert!(a.power(3).is_subset(&a2));
        assert!(a.is_generated_by_variables());
    }

    #[test]
    fn local_inverse() {
        let r = PolyRing::rational(&["x"]);
        let a = Ideal::maximal(&r);
        let a2 = QuotientRing::polynomial(&r).level(&a, 2);
        assert!(a2.is_local_artinian());
        let u = r.parse("2 + x").unwrap();
        let inv = a2.inverse(&u).unwrap();
        assert_eq!(a2.reduce(&inv.mul(&u)), r.one());
        assert!(a2.inverse(&r.var(0)).is_none());
        let not_local = QuotientRing::quotient(&r, Ideal::new(&r, vec![r.parse("x^2 - x").unwrap()]).unwrap()).unwrap();
        assert!(!not_local.is_local_artinian());
        assert!(!QuotientRing::polynomial(&r).is_local_artinian());
    }
}
