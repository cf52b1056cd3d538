//! Free resolutions, Tor, lifting a resolution along the truncation
//! `A_{k+1} -> A_k`, and compatible resolutions of whole towers.

use crate::adic::AdicTower;
use crate::complex::{congruent_complexes, ChainComplex, Homology};
use crate::error::AlgebraError;
use crate::free::{FreeElement, Matrix};
use crate::groebner::lift;
use crate::module::{minimal_presentation, minimize_generators, preimage_graded, FPModule, ModuleMap};
use crate::ring::{Ideal, Ring};
use crate::verdict::{Verdict, Witness};

/// `P -> M`: a free complex in degrees `-length..=0` with augmentation.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    module: FPModule,
    complex: ChainComplex,
    /// `η : P^0 -> M` on generators (`rank M` rows).
    augmentation: Matrix,
    /// Generator degrees per homological degree `0, 1, ...` when graded.
    shifts: Option<Vec<Vec<i64>>>,
    /// The last differential is injective (the resolution is finite).
    complete: bool,
}

impl FreeResolution {
    pub fn module(&self) -> &FPModule {
        &self.module
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn augmentation(&self) -> &Matrix {
        &self.augmentation
    }

    pub fn ring(&self) -> &Ring {
        self.complex.ring()
    }

    pub fn length(&self) -> usize {
        (-self.complex.lo()) as usize
    }

    /// Ranks of `P^0, P^{-1}, ...`.
    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.length()).map(|i| self.complex.rank(-(i as i64))).collect()
    }

    pub fn shifts(&self) -> Option<&[Vec<i64>]> {
        self.shifts.as_deref()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// `d : P^{-i} -> P^{-i+1}` for `i >= 1`.
    pub fn differential(&self, i: usize) -> Matrix {
        self.complex.differential(-(i as i64))
    }

    /// `H^0(P) -> M` as a witnessed map.
    pub fn h0_comparison(&self) -> Result<ModuleMap, AlgebraError> {
        let h0 = self.complex.homology_at(0);
        let m = self.augmentation.compose(&Matrix::from_columns(
            self.ring().base(),
            self.complex.rank(0),
            h0.generators().to_vec(),
        )?);
        ModuleMap::new(h0.module().clone(), self.module.clone(), m)
    }

    /// Exactness in negative degrees above the truncation and `H^0 ≅ M`.
    pub fn verify(&self) -> Verdict {
        let check = "free-resolution";
        let bottom = if self.complete { self.length() } else { self.length().saturating_sub(1) };
        for i in 1..=bottom {
            let h = self.complex.homology_at(-(i as i64));
            if let Some(w) = h.witness() {
                return Verdict::fail(check, Witness::new("homology").at_index(-(i as i64)).with_element(w));
            }
        }
        match self.h0_comparison() {
            Ok(map) => match (map.kernel_witness(), map.cokernel_witness()) {
                (None, None) => Verdict::pass(check),
                (Some(w), _) | (_, Some(w)) => Verdict::fail(check, Witness::new("augmentation").at_index(0).with_element(&w)),
            },
            Err(e) => Verdict::fail(check, Witness::new("augmentation").with_note(e.to_string())),
        }
    }

    /// The same resolution read over a quotient ring (no exactness claim).
    pub fn base_change(&self, ring: &Ring) -> Result<ChainComplex, AlgebraError> {
        self.complex.over(ring)
    }
}

/// Resolution of `M` up to `P^{-length}`, minimal when the module is graded
/// or the ring local.
pub fn free_resolution(m: &FPModule, length: usize) -> FreeResolution {
    let ring = m.ring().clone();
    let base = ring.base().clone();
    let (rank0, eta, d1, deg0) = match minimal_presentation(m) {
        Ok(mp) => {
            let eta = mp.comparison(m).matrix().clone();
            let deg0 = mp.module.degrees().map(|d| d.to_vec());
            (mp.module.rank(), eta, mp.module.relations().to_vec(), deg0)
        }
        Err(_) => {
            let extra = ring.modulus_columns(m.rank());
            let rels = minimize_generators(&base, m.rank(), &m.reduced_relations(), &extra, m.degrees());
            (m.rank(), Matrix::identity(&base, m.rank()), rels, m.infer_degrees())
        }
    };
    let mut ranks = vec![rank0];
    let mut mats: Vec<Matrix> = Vec::new();
    let mut shifts: Option<Vec<Vec<i64>>> = deg0.clone().map(|d| vec![d]);
    let mut complete = false;
    let mut cur_deg = deg0;
    let mut next_cols = d1;
    for _ in 0..length {
        let rank = *ranks.last().unwrap();
        let next_deg = cur_deg
            .as_deref()
            .and_then(|ds| next_cols.iter().map(|g| g.homogeneous_degree(ds)).collect::<Option<Vec<i64>>>());
        let d = Matrix::from_columns(&base, rank, next_cols).expect("kernel generators have the right rank");
        ranks.push(d.ncols());
        if let (Some(s), Some(nd)) = (shifts.as_mut(), next_deg.clone()) {
            s.push(nd);
        } else {
            shifts = None;
        }
        let empty = d.ncols() == 0;
        let gens = if empty { Vec::new() } else { preimage_graded(&ring, &d, &[], next_deg.as_deref()) };
        mats.push(d);
        cur_deg = next_deg;
        next_cols = gens;
        if empty {
            complete = true;
            break;
        }
    }
    if !complete && next_cols.is_empty() {
        complete = true;
    }
    // complex in degrees -len..0: reverse to ascending order
    let len = mats.len();
    ranks.reverse();
    mats.reverse();
    // drop a trailing zero term
    let dropped = len > 0 && ranks[0] == 0;
    let (ranks, mats) = if dropped {
        (ranks[1..].to_vec(), mats[1..].to_vec())
    } else {
        (ranks, mats)
    };
    let lo = -(ranks.len() as i64 - 1);
    let mut complex = ChainComplex::free(&ring, lo, &ranks, mats).expect("kernel of the previous map");
    if let Some(s) = &shifts {
        let mut degrees: Vec<Vec<i64>> = s.iter().rev().cloned().collect();
        if dropped {
            degrees.remove(0);
        }
        if let Ok(graded) = complex.with_term_degrees(degrees) {
            complex = graded;
        }
    }
    FreeResolution {
        module: m.clone(),
        complex,
        augmentation: eta,
        shifts,
        complete,
    }
}

/// `Tor_i(N, M) = H^{-i}(N ⊗ P)` for a free resolution `P` of `M`.
pub fn tor(n: &FPModule, m: &FPModule, i: usize) -> Result<Homology, AlgebraError> {
    let res = free_resolution(m, i + 1);
    tor_with(n, &res, i)
}

/// `Tor_i(N, M)` from a resolution of `M` already at hand.
pub fn tor_with(n: &FPModule, res: &FreeResolution, i: usize) -> Result<Homology, AlgebraError> {
    // a graded N over a graded resolution gives graded Tor
    let graded = match (n.degrees(), n.infer_degrees()) {
        (None, Some(d)) => n.clone().with_degrees(d).ok(),
        _ => None,
    };
    let c = res.complex().tensor_module(graded.as_ref().unwrap_or(n))?;
    Ok(c.homology_at(-(i as i64)))
}

/// Why a resolution could not be lifted.
#[derive(Clone, Debug)]
pub struct LiftObstruction {
    pub level: u32,
    pub index: usize,
    pub tor: Homology,
}

impl LiftObstruction {
    pub fn witness(&self) -> Witness {
        let mut w = Witness::new("tor")
            .at_level(self.level)
            .at_index(self.index as i64)
            .with_note(format!(
                "Tor_{}^(A_{})(A_{}, M_{}) is nonzero{}",
                self.index,
                self.level + 1,
                self.level,
                self.level + 1,
                self.tor.k_dimension().map(|d| format!(", dimension {d}")).unwrap_or_default()
            ));
        if let Some(e) = self.tor.witness() {
            w = w.with_element(e);
        }
        w
    }
}

/// `Tor_i^{A_{k+1}}(A_k, M_{k+1})` for `1 <= i <= depth`; first nonzero one.
pub fn lifting_obstruction(
    a: &Ideal,
    level: u32,
    m_next: &FPModule,
    depth: usize,
) -> Option<LiftObstruction> {
    let ring_next = m_next.ring();
    let ak = FPModule::cyclic(ring_next, &a.power(level + 1));
    let res = free_resolution(m_next, depth + 1);
    for i in 1..=depth {
        let t = tor_with(&ak, &res, i).expect("same ring");
        if !t.is_zero() {
            return Some(LiftObstruction { level, index: i, tor: t });
        }
    }
    None
}

/// Lifts a resolution of `M_k` over `A_k` to one of `M_{k+1}` over `A_{k+1}`
/// with the same ranks, given `ν : M_{k+1} -> M_k`. Preimages are chosen as
/// normal forms, so the result is deterministic.
pub fn lift_resolution(
    res_k: &FreeResolution,
    m_next: &FPModule,
    nu: &Matrix,
    a: &Ideal,
    level: u32,
    depth: usize,
) -> Result<FreeResolution, LiftObstruction> {
    if let Some(ob) = lifting_obstruction(a, level, m_next, depth) {
        return Err(ob);
    }
    let ring_k = res_k.ring().clone();
    let ring_next = m_next.ring().clone();
    let base = ring_next.base().clone();
    let m_k = res_k.module();

    // augmentation: preimages of η_k's columns under ν
    let mut span: Vec<FreeElement> = nu.columns().to_vec();
    span.extend(m_k.relation_span());
    let next_gb = m_next.submodule_basis();
    let eta_cols: Vec<FreeElement> = res_k
        .augmentation()
        .columns()
        .iter()
        .map(|c| {
            let coeffs = lift(&base, m_k.rank(), &span, c).expect("transition is surjective");
            next_gb.reduce(&coeffs.slice(0, m_next.rank()))
        })
        .collect();
    let eta = Matrix::from_columns(&base, m_next.rank(), eta_cols).expect("shape");

    let len = res_k.length();
    let mut mats: Vec<Matrix> = Vec::new();
    let mut prev = eta.clone();
    let mut prev_rels: Vec<FreeElement> = m_next.relations().to_vec();
    for i in 1..=len {
        let target = res_k.differential(i);
        let kernel = preimage_graded(&ring_next, &prev, &prev_rels, None);
        let rank = target.nrows();
        let mut gens = kernel.clone();
        gens.extend(ring_k.modulus_columns(rank));
        let cols: Vec<FreeElement> = target
            .columns()
            .iter()
            .map(|c| {
                let coeffs = lift(&base, rank, &gens, c).expect("kernels surject after Tor vanishing");
                let mut v = FreeElement::zero(&base, rank);
                for (g, f) in kernel.iter().zip(coeffs.comps()) {
                    if !f.is_zero() {
                        v = v.add(&g.scale(f));
                    }
                }
                ring_next.reduce_vector(&v)
            })
            .collect();
        let d = Matrix::from_columns(&base, rank, cols).expect("shape");
        prev = d.clone();
        prev_rels = Vec::new();
        mats.push(d);
    }
    let ranks: Vec<usize> = {
        let mut r = res_k.ranks();
        r.reverse();
        r
    };
    mats.reverse();
    let complex = ChainComplex::free(&ring_next, -(len as i64), &ranks, mats).expect("lifted maps compose to zero");
    let complete = res_k.is_complete() && {
        let last = complex.differential(-(len as i64));
        last.ncols() == 0 || preimage_graded(&ring_next, &last, &[], None).is_empty()
    };
    Ok(FreeResolution {
        module: m_next.clone(),
        complex,
        augmentation: eta,
        shifts: None,
        complete,
    })
}

/// Compatible resolutions of every level of a tower, with vertical maps
/// `P_{k+1}^i -> P_k^i` (identities on the shared bases unless replaced).
#[derive(Clone, Debug)]
pub struct SystemResolution {
    tower: AdicTower,
    levels: Vec<FreeResolution>,
    /// `verticals[k][j]` acts on `P^{-j}`, from level `k+1` to level `k`.
    verticals: Vec<Vec<Matrix>>,
}

#[derive(Clone, Debug)]
pub struct SystemObstruction {
    pub obstruction: LiftObstruction,
    /// Levels resolved before the failure.
    pub resolved: usize,
}

impl SystemResolution {
    pub fn tower(&self) -> &AdicTower {
        &self.tower
    }

    pub fn level(&self, k: u32) -> &FreeResolution {
        &self.levels[k as usize]
    }

    pub fn levels(&self) -> &[FreeResolution] {
        &self.levels
    }

    pub fn vertical(&self, k: u32, j: usize) -> &Matrix {
        &self.verticals[k as usize][j]
    }

    /// Replaces one vertical map (for comparing against other choices).
    pub fn with_vertical(mut self, k: u32, j: usize, m: Matrix) -> SystemResolution {
        self.verticals[k as usize][j] = m;
        self
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.levels[0].ranks()
    }
}

pub fn system_resolution(tower: &AdicTower, length: usize, depth: usize) -> Result<SystemResolution, SystemObstruction> {
    let mut levels = vec![free_resolution(tower.level(0), length)];
    for k in 0..tower.kmax() {
        let next = lift_resolution(
            &levels[k as usize],
            tower.level(k + 1),
            tower.transition(k),
            tower.ideal(),
            k,
            depth,
        )
        .map_err(|obstruction| SystemObstruction {
            obstruction,
            resolved: levels.len(),
        })?;
        levels.push(next);
    }
    let base = tower.base().base();
    let verticals = (0..tower.kmax() as usize)
        .map(|k| levels[k].ranks().iter().map(|&r| Matrix::identity(base, r)).collect())
        .collect();
    Ok(SystemResolution {
        tower: tower.clone(),
        levels,
        verticals,
    })
}

/// Base change of level `k + 1` to `A_k` reproduces level `k`: vertical
/// squares commute modulo the level-`k` modulus (augmentations included)
/// and every level is still a resolution.
pub fn check_base_change_compatibility(sr: &SystemResolution) -> Verdict {
    let mut parts = Vec::new();
    let tower = &sr.tower;
    for k in 0..tower.kmax() {
        let check = format!("base change {} -> {k}", k + 1);
        let ring_k = tower.ring(k);
        let upper = &sr.levels[k as usize + 1];
        let lower = &sr.levels[k as usize];
        let vert = &sr.verticals[k as usize];
        let mut failure = None;
        // augmentation square: ν η_{k+1} = η_k v^0 in M_k
        let lhs = tower.transition(k).compose(upper.augmentation());
        let rhs = lower.augmentation().compose(&vert[0]);
        let gb = lower.module().submodule_basis();
        if let Some(c) = (0..lhs.ncols()).find(|&c| !gb.contains(&lhs.column(c).sub(rhs.column(c)))) {
            failure = Some(Witness::new("non-commuting-square").at_level(k).at_index(0).with_element(&lhs.column(c).sub(rhs.column(c))));
        }
        for j in 1..=lower.length().min(upper.length()) {
            if failure.is_some() {
                break;
            }
            let lhs = lower.differential(j).compose(&vert[j]);
            let rhs = vert[j - 1].compose(&upper.differential(j));
            if !ring_k.congruent(&lhs, &rhs) {
                let diff = ring_k.reduce_matrix(&lhs.sub(&rhs));
                failure = Some(
                    Witness::new("non-commuting-square")
                        .at_level(k)
                        .at_index(-(j as i64))
                        .with_matrix(&diff),
                );
            }
        }
        if failure.is_none() && vert.iter().all(|v| v.nrows() == v.ncols() && *v == Matrix::identity(v.ring(), v.nrows())) {
            let upper_k = upper.base_change(ring_k).expect("quotient ring");
            if let Some(i) = congruent_complexes(ring_k, &upper_k, lower.complex()) {
                failure = Some(Witness::new("matrix-congruence").at_level(k).at_index(i));
            }
        }
        parts.push(match failure {
            None => Verdict::pass(check),
            Some(w) => Verdict::fail(check, w),
        });
    }
    for (k, lv) in sr.levels.iter().enumerate() {
        let mut v = lv.verify();
        v.check = format!("exactness at level {k}");
        for w in &mut v.witnesses {
            w.level = Some(k as u32);
        }
        parts.push(v);
    }
    Verdict::combine("lemma290", &parts).note(format!("kmax {}, length {}", tower.kmax(), sr.levels[0].length()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::ring::QuotientRing;

    #[test]
    fn resolution_of_residue_field() {
        let b = PolyRing::rational(&["x", "y"]);
        let r = QuotientRing::polynomial(&b);
        let q = FPModule::cyclic(&r, &Ideal::maximal(&b));
        let res = free_resolution(&q, 4);
        assert_eq!(res.ranks(), vec![1, 2, 1]);
        assert!(res.is_complete());
        assert!(res.verify().is_pass());
        assert_eq!(res.shifts().unwrap()[2], vec![2]);
        let free = free_resolution(&FPModule::free(&r, 2), 3);
        assert_eq!(free.ranks(), vec![2]);
        assert!(free.verify().is_pass());
    }

    #[test]
    fn periodic_resolution() {
        let b = PolyRing::rational(&["x"]);
        let a1 = QuotientRing::polynomial(&b).level(&Ideal::maximal(&b), 1);
        let m = FPModule::cyclic(&a1, &Ideal::maximal(&b));
        let res = free_resolution(&m, 4);
        assert_eq!(res.ranks(), vec![1, 1, 1, 1, 1]);
        for i in 1..=4 {
            assert_eq!(res.differential(i).entry(0, 0), &b.var(0));
        }
        assert!(res.verify().is_pass());
    }

    #[test]
    fn tor_examples() {
        let b = PolyRing::rational(&["x", "y"]);
        let r = QuotientRing::polynomial(&b);
        let q = FPModule::cyclic(&r, &Ideal::maximal(&b));
        let dims: Vec<_> = (0..=3).map(|i| tor(&q, &q, i).unwrap().k_dimension().unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 1, 0]);
        let mx = FPModule::cyclic(&r, &Ideal::new(&b, vec![b.var(0)]).unwrap());
        assert_eq!(tor(&q, &mx, 1).unwrap().k_dimension(), Some(1));
        assert_eq!(tor(&mx, &q, 1).unwrap().k_dimension(), Some(1));
        let free = FPModule::free(&r, 1);
        assert!(tor(&mx, &free, 1).unwrap().is_zero());
        let t0 = tor(&free, &mx, 0).unwrap();
        assert!(ModuleMap::new(t0.module().clone(), mx, Matrix::identity(&b, 1)).unwrap().is_isomorphism());
    }

    #[test]
    fn lifting_free_and_obstructed() {
        let b = PolyRing::rational(&["x"]);
        let r = QuotientRing::polynomial(&b);
        let a = Ideal::maximal(&b);
        let free = AdicTower::induced(&FPModule::free(&r, 1), &a, 3).unwrap();
        let sr = system_resolution(&free, 2, 2).unwrap();
        assert_eq!(sr.ranks(), vec![1]);
        assert!(check_base_change_compatibility(&sr).is_pass());

        // constant tower A/(x): the first lift meets a one-dimensional Tor_1
        let q = AdicTower::induced(&FPModule::cyclic(&r, &a), &a, 3).unwrap();
        assert!(q.validate().is_pass());
        let err = system_resolution(&q, 2, 2).unwrap_err();
        assert_eq!((err.obstruction.level, err.obstruction.index), (0, 1));
        assert_eq!(err.obstruction.tor.k_dimension(), Some(1));
        assert_eq!(err.resolved, 1);
    }

    #[test]
    fn lifting_nonfree_levels() {
        // A = Q[x,y], a = (x): M = A/(y) is flat along a, so its tower lifts
        let b = PolyRing::rational(&["x", "y"]);
        let r = QuotientRing::polynomial(&b);
        let a = Ideal::new(&b, vec![b.var(0)]).unwrap();
        let m = FPModule::cyclic(&r, &Ideal::new(&b, vec![b.var(1)]).unwrap());
        let t = AdicTower::induced(&m, &a, 3).unwrap();
        let sr = system_resolution(&t, 2, 2).unwrap();
        assert_eq!(sr.ranks(), vec![1, 1]);
        let v = check_base_change_compatibility(&sr);
        assert!(v.is_pass(), "{v}");
        let corrupted = sr.with_vertical(1, 1, Matrix::scalar(&b, 1, &b.from_i64(2)));
        let v = check_base_change_compatibility(&corrupted);
        assert!(v.is_fail());
        assert_eq!(v.witnesses[0].kind, "non-commuting-square");
        assert_eq!(v.witnesses[0].level, Some(1));
    }

    #[test]
    fn sum_with_non_flat_summand_is_obstructed() {
        // Tor_1^{A_1}(Q, A_1/(x)) = ((x) ∩ m) / (m x) = Q x with A_1 = Q[x,y]/m^2;
        // the free summand changes nothing
        let b = PolyRing::rational(&["x", "y"]);
        let r = QuotientRing::polynomial(&b);
        let a = Ideal::maximal(&b);
        let qx = FPModule::cyclic(&r, &Ideal::new(&b, vec![b.var(0)]).unwrap());
        let m = qx.direct_sum(&FPModule::free(&r, 1)).unwrap();
        let t = AdicTower::induced(&m, &a, 2).unwrap();
        assert!(t.validate().is_pass());
        let err = system_resolution(&t, 2, 2).unwrap_err();
        assert_eq!((err.obstruction.level, err.obstruction.index), (0, 1));
        assert_eq!(err.obstruction.tor.k_dimension(), Some(1));
    }
}
