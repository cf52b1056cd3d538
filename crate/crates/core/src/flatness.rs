//! Adic flatness at truncated depth and level, and the finite-level checks
//! that resolutions stay exact after base change to each `A_k`.

use crate::adic::{torsion_level, AdicTower, TORSION_BOUND};
use crate::error::AlgebraError;
use crate::free::FreeElement;
use crate::groebner::GroebnerBasis;
use crate::module::{minimal_presentation, FPModule, ModuleMap};
use crate::resolution::{free_resolution, tor_with, FreeResolution, SystemResolution};
use crate::ring::{Ideal, Ring};
use crate::verdict::{Outcome, Verdict, Witness};

/// Flatness over the module's own ring via freeness of a minimal presentation.
pub fn flat_over_ring(m: &FPModule, level: Option<u32>) -> Verdict {
    let check = match level {
        Some(k) => format!("A_{k} ⊗ M flat over A_{k}"),
        None => "flat".to_string(),
    };
    match minimal_presentation(m) {
        Ok(mp) if mp.is_free => Verdict::pass(check).note(format!("free of rank {}", mp.module.rank())),
        Ok(mp) => {
            let mut w = Witness::new("minimal-relation")
                .with_element(&mp.module.relations()[0])
                .with_note("nonzero relation in a minimal presentation");
            w.level = level;
            Verdict::fail(check, w)
        }
        Err(reason) => Verdict::undetermined(check, reason),
    }
}

fn tor_check(n: &FPModule, res: &FreeResolution, depth: usize, label: &str, level: Option<u32>) -> Verdict {
    let check = format!("Tor_i({label}, M) = 0 for 0 < i <= {depth}");
    for i in 1..=depth {
        let t = match tor_with(n, res, i) {
            Ok(t) => t,
            Err(e) => return Verdict::fail(check, Witness::new("invalid").with_note(e.to_string())),
        };
        if let Some(e) = t.witness() {
            let mut w = Witness::new("tor").at_index(i as i64).with_element(e).with_note(format!(
                "Tor_{i}({label}, M) is nonzero{}",
                t.k_dimension().map(|d| format!(", dimension {d}")).unwrap_or_default()
            ));
            w.level = level;
            return Verdict::fail(check, w);
        }
    }
    Verdict::pass(check)
}

/// Per-condition outcome of the adic flatness test.
#[derive(Clone, Debug)]
pub struct FlatnessVerdict {
    pub depth: usize,
    pub kmax: u32,
    /// Tor against every supplied torsion module.
    pub condition_i: Verdict,
    /// Tor against every `A_k`, `k <= kmax`, and flatness of each `A_k ⊗ M`.
    pub condition_ii: Verdict,
    /// Tor against `A_0` and flatness of `A_0 ⊗ M`.
    pub condition_iii: Verdict,
    /// `Tor_1(A_0, M) = 0` and `A_0 ⊗ M` flat: the classical weaker criterion.
    pub weaker: Verdict,
    /// The weaker criterion holds while the full conditions fail.
    pub divergence: bool,
    pub overall: Outcome,
}

impl FlatnessVerdict {
    pub fn summary(&self) -> String {
        match self.overall {
            Outcome::Pass => format!("adically flat up to (depth {}, kmax {})", self.depth, self.kmax),
            Outcome::Fail => "not adically flat (certified)".to_string(),
            Outcome::Undetermined => "undetermined at the given bounds".to_string(),
        }
    }

    pub fn conditions(&self) -> [&Verdict; 3] {
        [&self.condition_i, &self.condition_ii, &self.condition_iii]
    }
}

/// Default torsion modules: `A_0`, `A_1`, `A_1 / (first variable)` and
/// `A / (a_1^2, ..., a_n^2)`.
pub fn default_torsion_tests(ring: &Ring, a: &Ideal) -> Vec<(String, FPModule)> {
    let base = ring.base();
    let mut out = vec![
        ("A_0".to_string(), FPModule::cyclic(ring, &a.power(1))),
        ("A_1".to_string(), FPModule::cyclic(ring, &a.power(2))),
    ];
    if base.nvars() > 0 {
        let v = Ideal::new(base, vec![base.var(0)]).unwrap();
        out.push((format!("A_1/({})", base.vars()[0]), FPModule::cyclic(ring, &a.power(2).sum(&v))));
    }
    out.push(("A/(a_i^2)".to_string(), FPModule::cyclic(ring, &a.generator_powers(2))));
    out
}

/// Evaluates the three equivalent conditions for adic flatness up to the
/// bounds. Torsion tests must be `a`-torsion modules over the ring of `m`.
pub fn adic_flat_check(
    m: &FPModule,
    a: &Ideal,
    depth: usize,
    kmax: u32,
    torsion_tests: &[(String, FPModule)],
) -> Result<FlatnessVerdict, AlgebraError> {
    let ring = m.ring();
    let mut tests = Vec::new();
    for (name, n) in torsion_tests {
        let n = if n.ring().same_as(ring) { n.clone() } else { n.restrict_to(ring)? };
        if torsion_level(&n, a, TORSION_BOUND).is_none() {
            return Err(AlgebraError::Invalid(format!("test module {name} is not a-torsion")));
        }
        tests.push((name.clone(), n));
    }
    let res = free_resolution(m, depth + 1);

    let level_check = |k: u32| {
        let ak = FPModule::cyclic(ring, &a.power(k + 1));
        let t = tor_check(&ak, &res, depth, &format!("A_{k}"), Some(k));
        let f = flat_over_ring(&m.over(&ring.level(a, k)).expect("truncation"), Some(k));
        Verdict::combine(format!("level {k}"), &[t, f])
    };
    let iii = level_check(0);
    let mut condition_iii = Verdict::combine("condition (iii)", std::slice::from_ref(&iii));
    condition_iii.notes.push(format!("depth {depth}"));

    let mut levels = vec![iii];
    levels.extend((1..=kmax).map(level_check));
    let mut condition_ii = Verdict::combine("condition (ii)", &levels);
    let failing: Vec<String> = levels.iter().filter(|v| v.is_fail()).map(|v| v.check.clone()).collect();
    condition_ii.notes.push(format!("failing: [{}]", failing.join(", ")));

    let per_test: Vec<Verdict> = tests
        .iter()
        .map(|(name, n)| tor_check(n, &res, depth, name, None))
        .collect();
    let mut condition_i = Verdict::combine("condition (i) on the test set", &per_test);
    condition_i.notes.push(format!("{} torsion test modules", tests.len()));

    let ak0 = FPModule::cyclic(ring, &a.power(1));
    let weaker = Verdict::combine(
        "Tor_1(A_0, M) = 0 and A_0 ⊗ M flat",
        &[
            tor_check(&ak0, &res, 1, "A_0", Some(0)),
            flat_over_ring(&m.over(&ring.level(a, 0)).expect("truncation"), Some(0)),
        ],
    );
    let overall = condition_i.outcome.and(condition_ii.outcome).and(condition_iii.outcome);
    let divergence = weaker.is_pass() && overall == Outcome::Fail;
    Ok(FlatnessVerdict {
        depth,
        kmax,
        condition_i,
        condition_ii,
        condition_iii,
        weaker,
        divergence,
        overall,
    })
}

/// Is every generator of `lower` in the image of `upper` (plus relations)?
fn surjects(upper: &[FreeElement], lower: &[FreeElement], relations: &[FreeElement], rank: usize) -> Option<FreeElement> {
    let base = lower.first().or(upper.first()).map(|v| v.ring().clone())?;
    let mut span = upper.to_vec();
    span.extend(relations.iter().cloned());
    let gb = GroebnerBasis::new(&base, rank, &span);
    lower.iter().find(|g| !gb.contains(g)).map(|g| gb.reduce(g))
}

/// For a free resolution `P -> M`: each `A_k ⊗ P -> A_k ⊗ M` is exact and
/// the towers of kernels `ker(A_k ⊗ P^{-j} -> A_k ⊗ P^{-j+1})` (and of
/// `η_k`) have surjective transitions.
pub fn check_tensored_resolutions(m: &FPModule, a: &Ideal, kmax: u32, depth: usize) -> Verdict {
    let ring = m.ring();
    let res = free_resolution(m, depth + 1);
    let mut parts = Vec::new();
    // kernels[k][j]: generators of the kernel of the map out of P^{-j} at level k
    let mut kernels: Vec<Vec<Vec<FreeElement>>> = Vec::new();
    let top = if res.is_complete() { res.length() } else { res.length().saturating_sub(1) };
    for k in 0..=kmax {
        let rk = ring.level(a, k);
        let check = format!("A_{k} ⊗ P exact");
        let pk = res.complex().over(&rk).expect("truncation");
        let mut fail = None;
        for i in 1..=top {
            let h = pk.homology_at(-(i as i64));
            if let Some(w) = h.witness() {
                fail = Some(Witness::new("homology").at_level(k).at_index(-(i as i64)).with_element(w));
                break;
            }
        }
        let mk = m.over(&rk).expect("truncation");
        if fail.is_none() {
            let h0 = pk.homology_at(0);
            let cmp = res.augmentation().compose(
                &crate::free::Matrix::from_columns(rk.base(), res.complex().rank(0), h0.generators().to_vec())
                    .expect("shape"),
            );
            match ModuleMap::new(h0.module().clone(), mk.clone(), cmp) {
                Ok(map) => {
                    if let Some(w) = map.kernel_witness().or_else(|| map.cokernel_witness()) {
                        fail = Some(Witness::new("augmentation").at_level(k).at_index(0).with_element(&w));
                    }
                }
                Err(e) => fail = Some(Witness::new("augmentation").at_level(k).with_note(e.to_string())),
            }
        }
        parts.push(match fail {
            None => Verdict::pass(check),
            Some(w) => Verdict::fail(check, w),
        });
        let eta_ker = ModuleMap::new(
            FPModule::free(&rk, res.complex().rank(0)),
            mk,
            res.augmentation().clone(),
        )
        .expect("augmentation is well defined")
        .kernel()
        .generators()
        .to_vec();
        let mut per_level = vec![eta_ker];
        for j in 1..=top {
            per_level.push(crate::module::preimage(&rk, &res.differential(j), &[]));
        }
        kernels.push(per_level);
    }
    let mut ml = Vec::new();
    for k in 0..kmax as usize {
        let rk = ring.level(a, k as u32);
        for (j, lower) in kernels[k].iter().enumerate() {
            let rank = res.complex().rank(-(j as i64));
            let rels = rk.modulus_columns(rank);
            if let Some(w) = surjects(&kernels[k + 1][j], lower, &rels, rank) {
                ml.push(Verdict::fail(
                    format!("kernel tower at P^-{j}"),
                    Witness::new("kernel-not-reached").at_level(k as u32).at_index(-(j as i64)).with_element(&w),
                ));
            }
        }
    }
    if ml.is_empty() {
        ml.push(Verdict::pass("kernel towers Mittag-Leffler"));
    }
    parts.extend(ml);
    Verdict::combine("prop250", &parts).note(format!("kmax {kmax}, depth {depth}, ranks {:?}", res.ranks()))
}

/// Runs the flatness precondition and then [`check_tensored_resolutions`];
/// the second part runs even when the precondition fails.
pub fn check_prop_250(m: &FPModule, a: &Ideal, kmax: u32, depth: usize) -> (Verdict, Verdict) {
    let pre = match adic_flat_check(m, a, depth, kmax, &default_torsion_tests(m.ring(), a)) {
        Ok(f) => {
            let mut v = Verdict::combine("precondition: adically flat", &[f.condition_iii.clone(), f.condition_ii.clone()]);
            v.outcome = f.overall;
            v
        }
        Err(e) => Verdict::fail("precondition: adically flat", Witness::new("invalid").with_note(e.to_string())),
    };
    (pre, check_tensored_resolutions(m, a, kmax, depth))
}

/// Base-change compatibility of a system resolution.
pub fn check_lemma_290(sr: &SystemResolution) -> Verdict {
    crate::resolution::check_base_change_compatibility(sr)
}

/// Flat tower, its system resolution and torsion tests: `H^{-i}(N ⊗_{A_k} P_k) = 0`
/// for `0 < i <= depth` where `k` is the level at which `N` lives.
pub fn check_flat_tower_limit(
    tower: &AdicTower,
    sr: &SystemResolution,
    torsion_tests: &[(String, FPModule)],
    depth: usize,
) -> Verdict {
    let mut parts = Vec::new();
    for k in 0..=tower.kmax() {
        parts.push(flat_over_ring(tower.level(k), Some(k)));
    }
    let pre = Verdict::combine("flat levels", &parts);
    if pre.outcome != Outcome::Pass {
        return Verdict::combine("limit-flat", &[pre]);
    }
    let mut checks = vec![pre];
    for (name, n) in torsion_tests {
        let base = tower.base();
        let n = if n.ring().same_as(base) {
            n.clone()
        } else {
            match n.restrict_to(base) {
                Ok(n) => n,
                Err(e) => {
                    checks.push(Verdict::fail(format!("test {name}"), Witness::new("invalid").with_note(e.to_string())));
                    continue;
                }
            }
        };
        let Some(k) = torsion_level(&n, tower.ideal(), tower.kmax()) else {
            checks.push(Verdict::undetermined(
                format!("test {name}"),
                format!("not annihilated by a^(k+1) for k <= {}", tower.kmax()),
            ));
            continue;
        };
        let rk = tower.ring(k);
        let nk = n.over(rk).expect("annihilated by a^(k+1)");
        let pk = sr.level(k);
        let top = if pk.is_complete() { depth } else { depth.min(pk.length().saturating_sub(1)) };
        let c = pk.complex().tensor_module(&nk).expect("same ring");
        let mut v = Verdict::pass(format!("test {name} at level {k}"));
        for i in 1..=top {
            let h = c.homology_at(-(i as i64));
            if let Some(w) = h.witness() {
                v = Verdict::fail(
                    v.check.clone(),
                    Witness::new("homology").at_level(k).at_index(-(i as i64)).with_element(w),
                );
                break;
            }
        }
        if top < depth {
            v = v.note(format!("resolution length limits the check to i <= {top}"));
        }
        checks.push(v);
    }
    Verdict::combine("limit-flat", &checks).note(format!("kmax {}, depth {depth}", tower.kmax()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::resolution::system_resolution;
    use crate::ring::QuotientRing;

    fn setup() -> (std::sync::Arc<PolyRing>, Ring, Ideal) {
        let b = PolyRing::rational(&["x", "y"]);
        let r = QuotientRing::polynomial(&b);
        let a = Ideal::maximal(&b);
        (b, r, a)
    }

    #[test]
    fn free_modules_are_adically_flat() {
        let (_, r, a) = setup();
        for m in [FPModule::free(&r, 1), FPModule::free(&r, 1).direct_sum(&FPModule::free(&r, 3)).unwrap()] {
            let v = adic_flat_check(&m, &a, 2, 2, &default_torsion_tests(&r, &a)).unwrap();
            assert_eq!(v.overall, Outcome::Pass, "{}", v.condition_ii);
            assert!(!v.divergence);
        }
    }

    #[test]
    fn quotient_by_variable_is_not() {
        let (b, r, a) = setup();
        let m = FPModule::cyclic(&r, &Ideal::new(&b, vec![b.var(0)]).unwrap());
        let v = adic_flat_check(&m, &a, 2, 2, &default_torsion_tests(&r, &a)).unwrap();
        assert_eq!(v.overall, Outcome::Fail);
        assert!(v.condition_iii.is_fail());
        assert!(v.condition_i.is_fail());
        // Tor_1(A_k, A/(x)) != 0 at every level; A_0 ⊗ M = Q is free, A_k ⊗ M is not for k > 0
        let kinds: Vec<(&str, Option<u32>)> =
            v.condition_ii.witnesses.iter().map(|w| (w.kind.as_str(), w.level)).collect();
        assert_eq!(
            kinds,
            [
                ("tor", Some(0)),
                ("tor", Some(1)),
                ("minimal-relation", Some(1)),
                ("tor", Some(2)),
                ("minimal-relation", Some(2))
            ]
        );
        assert_eq!(v.condition_iii.witnesses[0].kind, "tor");
        let bad = adic_flat_check(&m, &a, 1, 1, &[("A".into(), FPModule::free(&r, 1))]);
        assert!(bad.is_err());
    }

    #[test]
    fn tensored_resolutions() {
        let (b, r, a) = setup();
        let (pre, v) = check_prop_250(&FPModule::free(&r, 1), &a, 2, 2);
        assert!(pre.is_pass() && v.is_pass(), "{v}");
        let redundant = FPModule::new(
            &r,
            3,
            vec![FreeElement::new(&b, vec![b.one(), b.var(0), b.from_i64(-1)]).unwrap()],
        )
        .unwrap();
        assert!(check_tensored_resolutions(&redundant, &a, 2, 2).is_pass());
        let m = FPModule::cyclic(&r, &Ideal::new(&b, vec![b.var(0)]).unwrap());
        let (pre, v) = check_prop_250(&m, &a, 1, 2);
        assert!(pre.is_fail());
        assert!(v.is_fail());
        assert_eq!(v.witnesses[0].kind, "homology");
    }

    #[test]
    fn flat_tower_limits() {
        let (b, r, a) = setup();
        let tests = vec![
            ("A_0".to_string(), FPModule::cyclic(&r, &a)),
            ("A_1/(x)".to_string(), FPModule::cyclic(&r, &a.power(2).sum(&Ideal::new(&b, vec![b.var(0)]).unwrap()))),
        ];
        let t = AdicTower::induced(&FPModule::free(&r, 2), &a, 2).unwrap();
        let sr = system_resolution(&t, 2, 2).unwrap();
        let v = check_flat_tower_limit(&t, &sr, &tests, 2);
        assert!(v.is_pass(), "{v}");

        // a = (y): the levels Q[x,y]/(x, y^(k+1)) are not flat over A_k
        let ay = Ideal::new(&b, vec![b.var(1)]).unwrap();
        let m = FPModule::cyclic(&r, &Ideal::new(&b, vec![b.var(0)]).unwrap());
        let t = AdicTower::induced(&m, &ay, 1).unwrap();
        let sr = system_resolution(&t, 1, 1).unwrap();
        let v = check_flat_tower_limit(&t, &sr, &tests, 1);
        assert!(v.is_fail());
        assert_eq!(v.witnesses[0].kind, "minimal-relation");
    }
}
