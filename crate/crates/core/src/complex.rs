//! Bounded cochain complexes (differentials raise degree by one) whose terms
//! are finitely presented modules, usually free. Homology is returned as a
//! subquotient with its own presentation.

use std::sync::Arc;

use crate::error::AlgebraError;
use crate::free::{FreeElement, Matrix};
use crate::groebner::lift;
use crate::module::{preimage, FPModule, ModuleMap, Subquotient};
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct ChainComplex {
    ring: Ring,
    lo: i64,
    terms: Vec<FPModule>,
    /// `diffs[j] : terms[j] -> terms[j + 1]`
    diffs: Vec<Matrix>,
}

impl ChainComplex {
    /// Complex of free modules `R^{ranks[j]}` in degrees `lo, lo + 1, ...`.
    pub fn free(ring: &Ring, lo: i64, ranks: &[usize], diffs: Vec<Matrix>) -> Result<ChainComplex, AlgebraError> {
        let terms = ranks.iter().map(|&r| FPModule::free(ring, r)).collect();
        ChainComplex::presented(ring, lo, terms, diffs)
    }

    /// Complex with presented terms; checks that every differential is well
    /// defined and that consecutive composites vanish.
    pub fn presented(
        ring: &Ring,
        lo: i64,
        terms: Vec<FPModule>,
        diffs: Vec<Matrix>,
    ) -> Result<ChainComplex, AlgebraError> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(AlgebraError::Invalid(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for t in &terms {
            if !t.ring().same_as(ring) {
                return Err(AlgebraError::RingMismatch);
            }
        }
        for (j, d) in diffs.iter().enumerate() {
            if d.ncols() != terms[j].rank() || d.nrows() != terms[j + 1].rank() {
                return Err(AlgebraError::RankMismatch {
                    expected: terms[j].rank(),
                    found: d.ncols(),
                });
            }
            if **d.ring() != **ring.base() {
                return Err(AlgebraError::RingMismatch);
            }
            let gb = terms[j + 1].submodule_basis();
            if let Some(c) = terms[j].relations().iter().position(|r| !gb.contains(&d.apply(r))) {
                return Err(AlgebraError::IllDefinedMap { column: c });
            }
        }
        for j in 0..diffs.len().saturating_sub(1) {
            let dd = diffs[j + 1].compose(&diffs[j]);
            let gb = terms[j + 2].submodule_basis();
            if !dd.columns().iter().all(|c| gb.contains(c)) {
                return Err(AlgebraError::NotAComplex { degree: lo + j as i64 + 1 });
            }
        }
        Ok(ChainComplex {
            ring: Arc::clone(ring),
            lo,
            terms,
            diffs,
        })
    }

    pub fn zero(ring: &Ring) -> ChainComplex {
        ChainComplex {
            ring: Arc::clone(ring),
            lo: 0,
            terms: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// A single module placed in `degree`.
    pub fn concentrated(module: FPModule, degree: i64) -> ChainComplex {
        ChainComplex {
            ring: Arc::clone(module.ring()),
            lo: degree,
            terms: vec![module],
            diffs: Vec::new(),
        }
    }

    /// Attaches internal degrees to the generators of every term.
    pub fn with_term_degrees(&self, degrees: Vec<Vec<i64>>) -> Result<ChainComplex, AlgebraError> {
        if degrees.len() != self.terms.len() {
            return Err(AlgebraError::Invalid("one degree list per term expected".into()));
        }
        let terms = self
            .terms
            .iter()
            .zip(degrees)
            .map(|(t, d)| t.clone().with_degrees(d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChainComplex {
            ring: self.ring.clone(),
            lo: self.lo,
            terms,
            diffs: self.diffs.clone(),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top degree; `lo - 1` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    fn index(&self, i: i64) -> Option<usize> {
        if i < self.lo || i > self.hi() {
            None
        } else {
            Some((i - self.lo) as usize)
        }
    }

    pub fn term(&self, i: i64) -> FPModule {
        match self.index(i) {
            Some(j) => self.terms[j].clone(),
            None => FPModule::zero(&self.ring),
        }
    }

    pub fn rank(&self, i: i64) -> usize {
        self.index(i).map_or(0, |j| self.terms[j].rank())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.rank()).collect()
    }

    /// `d^i : C^i -> C^{i+1}` (a zero matrix outside the stored range).
    pub fn differential(&self, i: i64) -> Matrix {
        match self.index(i) {
            Some(j) if j < self.diffs.len() => self.diffs[j].clone(),
            _ => Matrix::zero(self.ring.base(), self.rank(i + 1), self.rank(i)),
        }
    }

    pub fn is_free(&self) -> bool {
        self.terms.iter().all(|t| t.relations().is_empty())
    }

    /// `H^i = ker d^i / im d^{i-1}`.
    pub fn homology_at(&self, i: i64) -> Homology {
        let term = self.term(i);
        let base = self.ring.base();
        let d_out = self.differential(i);
        let cycles: Vec<FreeElement> = if d_out.nrows() == 0 {
            (0..term.rank()).map(|j| FreeElement::unit(base, term.rank(), j)).collect()
        } else {
            preimage(&self.ring, &d_out, self.term(i + 1).relations())
        };
        let mut rels = term.relations().to_vec();
        rels.extend(self.differential(i - 1).into_columns());
        let mut ambient = FPModule::new(&self.ring, term.rank(), rels).expect("shapes agree");
        if let Some(d) = term.degrees() {
            if let Ok(g) = ambient.clone().with_degrees(d.to_vec()) {
                ambient = g;
            }
        }
        Homology {
            degree: i,
            sub: Subquotient::new(ambient, cycles),
        }
    }

    /// `H^i = 0` for every degree in `range`.
    pub fn is_exact_on(&self, range: impl IntoIterator<Item = i64>) -> Result<(), Homology> {
        for i in range {
            let h = self.homology_at(i);
            if !h.is_zero() {
                return Err(h);
            }
        }
        Ok(())
    }

    /// The same complex read over a quotient ring (base change of free terms).
    pub fn over(&self, ring: &Ring) -> Result<ChainComplex, AlgebraError> {
        let terms = self.terms.iter().map(|t| t.over(ring)).collect::<Result<Vec<_>, _>>()?;
        ChainComplex::presented(ring, self.lo, terms, self.diffs.clone())
    }

    /// `N ⊗ C`: term `N ⊗ C^i` with generator `n_a ⊗ e_b` indexed `a * rank + b`.
    pub fn tensor_module(&self, n: &FPModule) -> Result<ChainComplex, AlgebraError> {
        if !n.ring().same_as(&self.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        let terms = self.terms.iter().map(|t| n.tensor(t)).collect::<Result<Vec<_>, _>>()?;
        let diffs = self.diffs.iter().map(|d| d.identity_kron(n.rank())).collect();
        ChainComplex::presented(&self.ring, self.lo, terms, diffs)
    }

    /// Total complex of `C ⊗ D` for free complexes. The basis in total degree
    /// `n` lists the blocks `C^p ⊗ D^{n-p}` by increasing `p`, and within a
    /// block `e_a ⊗ f_b` is indexed `a * rank(D^{n-p}) + b`. Signs follow
    /// `d(c ⊗ e) = dc ⊗ e + (-1)^p c ⊗ de`.
    pub fn tensor(&self, other: &ChainComplex) -> Result<ChainComplex, AlgebraError> {
        if !self.ring.same_as(&other.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        if !self.is_free() || !other.is_free() {
            return Err(AlgebraError::Invalid("tensor of complexes needs free terms".into()));
        }
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(ChainComplex::zero(&self.ring));
        }
        let base = self.ring.base();
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let blocks = |n: i64| -> Vec<(i64, usize, usize)> {
            // (p, offset, size)
            let mut off = 0;
            let mut out = Vec::new();
            for p in self.degrees() {
                let q = n - p;
                let size = self.rank(p) * other.rank(q);
                if q >= other.lo && q <= other.hi() {
                    out.push((p, off, size));
                    off += size;
                }
            }
            out
        };
        let total_rank = |n: i64| blocks(n).iter().map(|b| b.2).sum::<usize>();
        let ranks: Vec<usize> = (lo..=hi).map(total_rank).collect();
        let mut diffs = Vec::new();
        for n in lo..hi {
            let src = blocks(n);
            let dst = blocks(n + 1);
            let rows = total_rank(n + 1);
            let mut cols: Vec<FreeElement> = Vec::new();
            for &(p, _, _) in &src {
                let q = n - p;
                let rq = other.rank(q);
                let find = |pp: i64| dst.iter().find(|b| b.0 == pp).map(|b| b.1);
                let dc = self.differential(p).kron_identity(rq);
                let de = other.differential(q).identity_kron(self.rank(p));
                let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                for c in 0..self.rank(p) * rq {
                    let mut v = FreeElement::zero(base, rows);
                    if let Some(off) = find(p + 1) {
                        if self.rank(p + 1) > 0 {
                            v = v.add(&dc.column(c).embed(rows, off));
                        }
                    }
                    if let Some(off) = find(p) {
                        if other.rank(q + 1) > 0 {
                            let col = de.column(c).scale(&base.from_i64(sign));
                            v = v.add(&col.embed(rows, off));
                        }
                    }
                    cols.push(v);
                }
            }
            diffs.push(Matrix::from_cols_unchecked(base, rows, cols));
        }
        ChainComplex::free(&self.ring, lo, &ranks, diffs)
    }

    /// `Hom(C, R)` for a free complex: degree `p` holds `(C^{-p})^*` and
    /// `d^p = (-1)^p (d^{-p-1})^T`.
    pub fn dual(&self) -> Result<ChainComplex, AlgebraError> {
        if !self.is_free() {
            return Err(AlgebraError::Invalid("dual needs free terms".into()));
        }
        if self.terms.is_empty() {
            return Ok(ChainComplex::zero(&self.ring));
        }
        let lo = -self.hi();
        let ranks: Vec<usize> = (lo..=-self.lo).map(|p| self.rank(-p)).collect();
        let diffs = (lo..-self.lo)
            .map(|p| {
                let t = self.differential(-p - 1).transpose();
                if p.rem_euclid(2) == 0 {
                    t
                } else {
                    t.neg()
                }
            })
            .collect();
        ChainComplex::free(&self.ring, lo, &ranks, diffs)
    }

    /// Alternating sums of homology and term dimensions agree; `None` unless
    /// the ring is the coefficient field and all terms are finite dimensional.
    pub fn euler_characteristic_check(&self) -> Option<bool> {
        let field_dim = self.ring.modulus().basis().standard_monomials().map(|s| s.len());
        if field_dim != Some(1) {
            return None;
        }
        let mut chi_terms = 0i64;
        let mut chi_h = 0i64;
        for i in self.degrees() {
            let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            chi_terms += s * self.term(i).k_dimension()? as i64;
            chi_h += s * self.homology_at(i).k_dimension()? as i64;
        }
        Some(chi_terms == chi_h)
    }
}

/// `H^i` of a complex: cycles modulo boundaries and term relations.
#[derive(Clone, Debug)]
pub struct Homology {
    degree: i64,
    sub: Subquotient,
}

impl Homology {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.sub
    }

    /// Presentation on the cycle generators.
    pub fn module(&self) -> &FPModule {
        self.sub.module()
    }

    /// Cycle generators in the coordinates of the term.
    pub fn generators(&self) -> &[FreeElement] {
        self.sub.generators()
    }

    pub fn is_zero(&self) -> bool {
        self.sub.is_zero()
    }

    pub fn k_dimension(&self) -> Option<usize> {
        self.sub.k_dimension()
    }

    /// A cycle whose class is nonzero.
    pub fn witness(&self) -> Option<&FreeElement> {
        self.sub.witness()
    }

    /// Is the cycle `v` a boundary (zero class)?
    pub fn is_zero_class(&self, v: &FreeElement) -> bool {
        self.sub.ambient().is_zero_element(v)
    }

    /// Normal form of `v` against boundaries plus relations.
    pub fn normal_form(&self, v: &FreeElement) -> FreeElement {
        self.sub.ambient().submodule_basis().reduce(v)
    }
}

/// A degree-preserving map of complexes, one matrix per source degree.
#[derive(Clone, Debug)]
pub struct ComplexMap {
    source: ChainComplex,
    target: ChainComplex,
    maps: Vec<Matrix>,
}

impl ComplexMap {
    /// `maps[j]` acts in degree `source.lo() + j`; degrees outside the source
    /// range carry the zero map.
    pub fn new(source: ChainComplex, target: ChainComplex, maps: Vec<Matrix>) -> Result<ComplexMap, AlgebraError> {
        if maps.len() != source.terms.len() {
            return Err(AlgebraError::Invalid(format!(
                "expected {} component maps, got {}",
                source.terms.len(),
                maps.len()
            )));
        }
        if !source.ring.maps_onto(&target.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        let map = ComplexMap { source, target, maps };
        for i in map.source.degrees() {
            let f = map.component(i);
            if f.ncols() != map.source.rank(i) || f.nrows() != map.target.rank(i) {
                return Err(AlgebraError::RankMismatch {
                    expected: map.target.rank(i),
                    found: f.nrows(),
                });
            }
            let gb = map.target.term(i).submodule_basis();
            if let Some(c) = map.source.term(i).relations().iter().position(|r| !gb.contains(&f.apply(r))) {
                return Err(AlgebraError::IllDefinedMap { column: c });
            }
        }
        let lo = map.source.lo.min(map.target.lo) - 1;
        let hi = map.source.hi().max(map.target.hi());
        for i in lo..=hi {
            if map.square_defect(i).is_some() {
                return Err(AlgebraError::NotAChainMap { degree: i });
            }
        }
        Ok(map)
    }

    /// Identity on `c` (or the canonical map to `c` read over a quotient ring).
    pub fn identity(source: &ChainComplex, target: &ChainComplex) -> Result<ComplexMap, AlgebraError> {
        let base = source.ring.base();
        let maps = source.degrees().map(|i| Matrix::identity(base, source.rank(i))).collect();
        ComplexMap::new(source.clone(), target.clone(), maps)
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn component(&self, i: i64) -> Matrix {
        match self.source.index(i) {
            Some(j) => self.maps[j].clone(),
            None => Matrix::zero(self.source.ring.base(), self.target.rank(i), self.source.rank(i)),
        }
    }

    /// A source basis vector in degree `i` on which `d f - f d` is nonzero.
    pub fn square_defect(&self, i: i64) -> Option<FreeElement> {
        let lhs = self.target.differential(i).compose(&self.component(i));
        let rhs = self.component(i + 1).compose(&self.source.differential(i));
        let gb = self.target.term(i + 1).submodule_basis();
        (0..lhs.ncols()).find_map(|c| {
            let diff = lhs.column(c).sub(rhs.column(c));
            if gb.contains(&diff) {
                None
            } else {
                Some(FreeElement::unit(self.source.ring.base(), lhs.ncols(), c))
            }
        })
    }

    pub fn compose(&self, first: &ComplexMap) -> Result<ComplexMap, AlgebraError> {
        let maps = first
            .source
            .degrees()
            .map(|i| self.component(i).compose(&first.component(i)))
            .collect();
        ComplexMap::new(first.source.clone(), self.target.clone(), maps)
    }

    /// Image under `f^i` of every source homology generator that does not
    /// land on a boundary, paired with the offending generator.
    pub fn surviving_class(&self, i: i64, source_h: &Homology, target_h: &Homology) -> Option<(FreeElement, FreeElement)> {
        let f = self.component(i);
        for g in source_h.generators() {
            let img = f.apply(g);
            if !target_h.is_zero_class(&img) {
                return Some((g.clone(), target_h.normal_form(&img)));
            }
        }
        None
    }

    /// The induced map `H^i(source) -> H^i(target)` on homology generators.
    pub fn homology_map(&self, i: i64) -> Result<(Homology, Homology, ModuleMap), AlgebraError> {
        let hs = self.source.homology_at(i);
        let ht = self.target.homology_at(i);
        let m = self.induced_matrix(i, &hs, &ht)?;
        let map = ModuleMap::new(hs.module().clone(), ht.module().clone(), m)?;
        Ok((hs, ht, map))
    }

    /// Coordinates of `f(g)` in the target homology generators, per source generator.
    pub fn induced_matrix(&self, i: i64, hs: &Homology, ht: &Homology) -> Result<Matrix, AlgebraError> {
        let base = self.target.ring.base();
        let f = self.component(i);
        let tg = ht.generators().len();
        let mut gens = ht.generators().to_vec();
        gens.extend(ht.subquotient().ambient().relation_span());
        let rank = self.target.rank(i);
        let mut cols = Vec::new();
        for g in hs.generators() {
            let v = f.apply(g);
            let c = if rank == 0 {
                FreeElement::zero(base, tg)
            } else {
                lift(base, rank, &gens, &v)
                    .ok_or_else(|| AlgebraError::Invalid("image is not a cycle".into()))?
                    .slice(0, tg)
            };
            cols.push(c);
        }
        Ok(Matrix::from_cols_unchecked(base, tg, cols))
    }
}

/// Are the two free complexes equal entrywise modulo the ring's modulus?
pub fn congruent_complexes(ring: &Ring, a: &ChainComplex, b: &ChainComplex) -> Option<i64> {
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    (lo..=hi).find(|&i| a.rank(i) != b.rank(i) || !ring.congruent(&a.differential(i), &b.differential(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::ring::{Ideal, QuotientRing};

    fn setup() -> (Arc<PolyRing>, Ring) {
        let b = PolyRing::rational(&["x", "y"]);
        let r = QuotientRing::polynomial(&b);
        (b, r)
    }

    fn two_term(r: &Ring, f: &str) -> ChainComplex {
        let b = r.base();
        ChainComplex::free(r, -1, &[1, 1], vec![Matrix::scalar(b, 1, &b.parse(f).unwrap())]).unwrap()
    }

    #[test]
    fn rejects_non_complex() {
        let (b, r) = setup();
        let d1 = Matrix::from_rows(&b, 1, vec![vec![b.var(0)]]).unwrap();
        let err = ChainComplex::free(&r, -2, &[1, 1, 1], vec![d1.clone(), d1]).unwrap_err();
        assert_eq!(err, AlgebraError::NotAComplex { degree: -1 });
    }

    #[test]
    fn homology_examples() {
        let (b, r) = setup();
        let c = ChainComplex::concentrated(FPModule::free(&r, 1), 0);
        let h = c.homology_at(0);
        assert_eq!(h.generators().len(), 1);
        assert!(h.module().relations().is_empty());

        let k = two_term(&r, "x").tensor(&two_term(&r, "y")).unwrap();
        assert_eq!(k.ranks(), vec![1, 2, 1]);
        assert!(k.homology_at(-2).is_zero());
        assert!(k.homology_at(-1).is_zero());
        let h0 = k.homology_at(0);
        assert_eq!(h0.k_dimension(), Some(1));
        let target = FPModule::cyclic(&r, &Ideal::maximal(&b));
        let m = ModuleMap::new(h0.module().clone(), target, Matrix::identity(&b, 1)).unwrap();
        assert!(m.is_isomorphism());
    }

    #[test]
    fn tensor_shape_and_signs() {
        let (b, r) = setup();
        let k = two_term(&r, "x").tensor(&two_term(&r, "y")).unwrap();
        // degree -1 lists the block (p=-1, q=0) before (p=0, q=-1)
        let d2 = k.differential(-2);
        assert_eq!(d2.entry(0, 0), &b.var(1).neg());
        assert_eq!(d2.entry(1, 0), &b.var(0));
        let d1 = k.differential(-1);
        assert_eq!(d1.entry(0, 0), &b.var(0));
        assert_eq!(d1.entry(0, 1), &b.var(1));
        let unit = ChainComplex::concentrated(FPModule::free(&r, 1), 0);
        let c = two_term(&r, "x");
        let cu = c.tensor(&unit).unwrap();
        assert_eq!(cu.ranks(), c.ranks());
        assert!(r.congruent(&cu.differential(-1), &c.differential(-1)));
        let z = ChainComplex::zero(&r);
        assert!(z.tensor(&z).unwrap().ranks().is_empty());
    }

    #[test]
    fn module_tensor_homology() {
        let (b, r) = setup();
        let a0 = r.level(&Ideal::maximal(&b), 0);
        let k = two_term(&r, "x").tensor(&two_term(&r, "y")).unwrap();
        let q = FPModule::free(&r, 1).over(&a0).unwrap();
        let kq = k.over(&a0).unwrap();
        let dims: Vec<_> = (-2..=0).map(|i| kq.homology_at(i).k_dimension().unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 1]);
        assert_eq!(kq.euler_characteristic_check(), Some(true));
        let _ = q;

        let bx = PolyRing::rational(&["x"]);
        let rx = QuotientRing::polynomial(&bx);
        let res = ChainComplex::free(&rx, -1, &[1, 1], vec![Matrix::scalar(&bx, 1, &bx.var(0))]).unwrap();
        let qq = FPModule::cyclic(&rx, &Ideal::maximal(&bx));
        let t = res.tensor_module(&qq).unwrap();
        let dims: Vec<_> = (-1..=0).map(|i| t.homology_at(i).k_dimension().unwrap()).collect();
        assert_eq!(dims, vec![1, 1]);
    }

    #[test]
    fn dual_and_maps() {
        let (b, r) = setup();
        let c = two_term(&r, "x^2");
        let d = c.dual().unwrap();
        assert_eq!((d.lo(), d.hi()), (0, 1));
        assert_eq!(d.differential(0).entry(0, 0), &b.parse("x^2").unwrap());
        // biduality flips the sign of every differential
        let dd = d.dual().unwrap();
        assert_eq!((dd.lo(), dd.hi()), (-1, 0));
        assert_eq!(dd.differential(-1), c.differential(-1).neg());

        // x-multiplication in degree -1 maps (A -x^2-> A) to (A -x-> A)
        let t = ComplexMap::new(
            c.clone(),
            two_term(&r, "x"),
            vec![Matrix::scalar(&b, 1, &b.var(0)), Matrix::identity(&b, 1)],
        )
        .unwrap();
        assert!(t.square_defect(-1).is_none());
        let bad = ComplexMap::new(c, two_term(&r, "x"), vec![Matrix::identity(&b, 1), Matrix::identity(&b, 1)]);
        assert!(matches!(bad, Err(AlgebraError::NotAChainMap { degree: -1 })));
    }
}
