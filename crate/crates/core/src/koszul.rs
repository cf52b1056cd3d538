//! Koszul complexes `K(A; a^k)` on powers of a sequence, the transition maps
//! between levels, their duals and finite-level approximations of local
//! cohomology.

use crate::complex::{ChainComplex, ComplexMap, Homology};
use crate::error::AlgebraError;
use crate::free::{FreeElement, Matrix};
use crate::module::{FPModule, ModuleMap};
use crate::poly::Polynomial;
use crate::ring::{Ideal, Ring};

/// Size-`p` subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

fn check_sequence(ring: &Ring, a: &[Polynomial]) -> Result<(), AlgebraError> {
    if a.is_empty() {
        return Err(AlgebraError::Invalid("Koszul complex needs a nonempty sequence".into()));
    }
    if a.iter().any(|f| **f.ring() != **ring.base()) {
        return Err(AlgebraError::RingMismatch);
    }
    Ok(())
}

/// `K(A; a_1^k, ..., a_n^k)` in degrees `-n..=0`. Degree `-p` has basis
/// `e_S` for `p`-subsets `S` in lexicographic order and
/// `d(e_S) = Σ_j (-1)^{j-1} a_{i_j}^k e_{S \ i_j}`.
pub fn koszul_complex(ring: &Ring, a: &[Polynomial], k: u32) -> Result<ChainComplex, AlgebraError> {
    check_sequence(ring, a)?;
    if k == 0 {
        return Err(AlgebraError::Invalid("Koszul level must be at least 1".into()));
    }
    let base = ring.base();
    let n = a.len();
    let powers: Vec<Polynomial> = a.iter().map(|f| f.pow(k)).collect();
    let ranks: Vec<usize> = (0..=n).rev().map(|p| subsets(n, p).len()).collect();
    let mut diffs = Vec::with_capacity(n);
    for p in (1..=n).rev() {
        let src = subsets(n, p);
        let dst = subsets(n, p - 1);
        let cols = src
            .iter()
            .map(|s| {
                let mut v = FreeElement::zero(base, dst.len());
                for (j, &i) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&t| t != i).collect();
                    let row = dst.iter().position(|d| *d == rest).expect("subset present");
                    let term = if j % 2 == 0 { powers[i].clone() } else { powers[i].neg() };
                    v.comps_mut()[row] = term;
                }
                v
            })
            .collect();
        diffs.push(Matrix::from_cols_unchecked(base, dst.len(), cols));
    }
    ChainComplex::free(ring, -(n as i64), &ranks, diffs)
}

/// Diagonal factors `∏_{i∈S} a_i^e` on the degree `-p` basis.
fn subset_factors(ring: &Ring, a: &[Polynomial], p: usize, e: u32) -> Vec<Polynomial> {
    let base = ring.base();
    subsets(a.len(), p)
        .iter()
        .map(|s| s.iter().fold(base.one(), |acc, &i| acc.mul(&a[i].pow(e))))
        .collect()
}

fn diagonal(ring: &Ring, entries: &[Polynomial]) -> Matrix {
    let base = ring.base();
    let n = entries.len();
    let cols = entries
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut v = FreeElement::zero(base, n);
            v.comps_mut()[i] = f.clone();
            v
        })
        .collect();
    Matrix::from_cols_unchecked(base, n, cols)
}

/// The Koszul complexes `K(A; a^k)` for `1 <= k <= kmax` with their transitions.
#[derive(Clone, Debug)]
pub struct KoszulTower {
    ring: Ring,
    a: Vec<Polynomial>,
    complexes: Vec<ChainComplex>,
}

impl KoszulTower {
    pub fn new(ring: &Ring, a: &[Polynomial], kmax: u32) -> Result<KoszulTower, AlgebraError> {
        let complexes = (1..=kmax.max(1))
            .map(|k| koszul_complex(ring, a, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KoszulTower {
            ring: ring.clone(),
            a: a.to_vec(),
            complexes,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn sequence(&self) -> &[Polynomial] {
        &self.a
    }

    pub fn kmax(&self) -> u32 {
        self.complexes.len() as u32
    }

    pub fn complex(&self, k: u32) -> &ChainComplex {
        &self.complexes[k as usize - 1]
    }

    /// `t_{k',k} : K(A; a^{k'}) -> K(A; a^k)`, multiplication by
    /// `∏_{i∈S} a_i^{k'-k}` on `e_S`.
    pub fn transition(&self, k_from: u32, k_to: u32) -> Result<ComplexMap, AlgebraError> {
        if k_from < k_to {
            return Err(AlgebraError::Invalid(format!("transition needs {k_from} >= {k_to}")));
        }
        let n = self.a.len();
        let e = k_from - k_to;
        let maps = (0..=n)
            .rev()
            .map(|p| diagonal(&self.ring, &subset_factors(&self.ring, &self.a, p, e)))
            .collect();
        ComplexMap::new(self.complex(k_from).clone(), self.complex(k_to).clone(), maps)
    }
}

/// `K^∨(A; a^k) = Hom(K(A; a^k), A)` in degrees `0..=n`.
pub fn dual_koszul(ring: &Ring, a: &[Polynomial], k: u32) -> Result<ChainComplex, AlgebraError> {
    koszul_complex(ring, a, k)?.dual()
}

/// Direct-system map `K^∨(A; a^k) -> K^∨(A; a^{k'})` dual to the transition.
pub fn dual_transition(ring: &Ring, a: &[Polynomial], k: u32, k_to: u32) -> Result<ComplexMap, AlgebraError> {
    if k_to < k {
        return Err(AlgebraError::Invalid(format!("direct-system map needs {k_to} >= {k}")));
    }
    let src = dual_koszul(ring, a, k)?;
    let dst = dual_koszul(ring, a, k_to)?;
    let maps = (0..=a.len())
        .map(|p| diagonal(ring, &subset_factors(ring, a, p, k_to - k)))
        .collect();
    ComplexMap::new(src, dst, maps)
}

/// `K^∨(A; a^k) ⊗ M` with internal degrees: `e_S^* ⊗ m_j` sits in degree
/// `deg(m_j) - k Σ_{i∈S} deg(a_i)` when everything is homogeneous.
pub fn dual_koszul_tensor(m: &FPModule, a: &[Polynomial], k: u32) -> Result<ChainComplex, AlgebraError> {
    let ring = m.ring();
    let c = dual_koszul(ring, a, k)?.tensor_module(m)?;
    let adeg: Option<Vec<i64>> = a.iter().map(|f| f.homogeneous_degree().map(|d| d as i64)).collect();
    let (Some(adeg), Some(mdeg)) = (adeg, m.infer_degrees()) else {
        return Ok(c);
    };
    let n = a.len();
    let degrees: Vec<Vec<i64>> = (0..=n)
        .map(|p| {
            let mut out = Vec::new();
            for md in &mdeg {
                for s in subsets(n, p) {
                    let shift: i64 = s.iter().map(|&i| adeg[i]).sum();
                    out.push(md - k as i64 * shift);
                }
            }
            out
        })
        .collect();
    Ok(c.with_term_degrees(degrees).unwrap_or(c))
}

/// One stage of the colimit approximating local cohomology:
/// `H^i(K^∨(A; a^k) ⊗ M)` together with its map to level `k + 1`.
#[derive(Clone, Debug)]
pub struct LocalCohomologyStage {
    pub level: u32,
    pub degree: i64,
    pub current: Homology,
    pub next: Homology,
    pub comparison: ModuleMap,
}

impl LocalCohomologyStage {
    /// `(internal degree, dim at level k, dim at level k + 1)`.
    pub fn graded_dims(&self, degrees: impl IntoIterator<Item = i64>) -> Vec<(i64, usize, usize)> {
        degrees
            .into_iter()
            .map(|d| (d, self.current.module().hilbert_function(d), self.next.module().hilbert_function(d)))
            .collect()
    }

    /// The comparison map is bijective and graded dimensions agree on `degrees`.
    pub fn stabilized(&self, degrees: impl IntoIterator<Item = i64>) -> bool {
        self.comparison.is_isomorphism() && self.graded_dims(degrees).iter().all(|(_, a, b)| a == b)
    }
}

pub fn local_cohomology_approx(
    m: &FPModule,
    a: &[Polynomial],
    k: u32,
    i: i64,
) -> Result<LocalCohomologyStage, AlgebraError> {
    let cur = dual_koszul_tensor(m, a, k)?;
    let nxt = dual_koszul_tensor(m, a, k + 1)?;
    let t = dual_transition(m.ring(), a, k, k + 1)?;
    // the direct-system map tensored with M
    let maps = cur
        .degrees()
        .map(|p| t.component(p).identity_kron(m.rank()))
        .collect();
    let tm = ComplexMap::new(cur, nxt, maps)?;
    let (hs, ht, comparison) = tm.homology_map(i)?;
    Ok(LocalCohomologyStage {
        level: k,
        degree: i,
        current: hs,
        next: ht,
        comparison,
    })
}

/// `H^0(K(A; a^k)) = A / (a_1^k..a_n^k)` sits between two truncations:
/// `a^{n(k-1)+1} ⊆ (a_i^k) ⊆ a^k`. Returns both containments.
pub fn h0_cofinal_bounds(a: &Ideal, k: u32) -> (bool, bool) {
    let n = a.generators().len() as u32;
    let powers = a.generator_powers(k);
    let upper = a.power(n * (k - 1) + 1).is_subset(&powers);
    let lower = powers.is_subset(&a.power(k));
    (upper, lower)
}
