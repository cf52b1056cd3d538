//! Bounded search for pro-zero witnesses in the inverse systems
//! `H^{-i}(K(A; a^k))`. A positive answer is evidence up to the bound, and a
//! missing witness comes with a class that survives to the bound.

use crate::complex::Homology;
use crate::error::AlgebraError;
use crate::free::FreeElement;
use crate::koszul::KoszulTower;
use crate::module::{FPModule, ModuleMap};
use crate::poly::Polynomial;
use crate::ring::{Ideal, Ring};
use crate::verdict::{Verdict, Witness};

/// `H^{-i}(K(A; a^{k_from})) -> H^{-i}(K(A; a^{k_to}))` on homology generators.
pub fn homology_transition(
    tower: &KoszulTower,
    i: usize,
    k_from: u32,
    k_to: u32,
) -> Result<(Homology, Homology, ModuleMap), AlgebraError> {
    tower.transition(k_from, k_to)?.homology_map(-(i as i64))
}

/// A homology class at level `k_from` whose image at level `k` is nonzero.
#[derive(Clone, Debug)]
pub struct SurvivingClass {
    pub k_from: u32,
    pub class: FreeElement,
    /// Normal form of the image modulo boundaries; never zero.
    pub image: FreeElement,
}

#[derive(Clone, Debug)]
pub struct ProZeroEntry {
    pub i: usize,
    pub k: u32,
    pub homology: FPModule,
    pub generators: Vec<FreeElement>,
    /// `(k', map k' -> k is zero)` for every tested `k' >= k`.
    pub zero_from: Vec<(u32, bool)>,
    /// The least `k'` with a zero map into level `k`.
    pub witness: Option<u32>,
    pub survivor: Option<SurvivingClass>,
}

#[derive(Clone, Debug)]
pub struct ProZeroReport {
    pub sequence: Vec<Polynomial>,
    pub kmax: u32,
    pub depth: usize,
    pub entries: Vec<ProZeroEntry>,
}

impl ProZeroReport {
    pub fn entry(&self, i: usize, k: u32) -> Option<&ProZeroEntry> {
        self.entries.iter().find(|e| e.i == i && e.k == k)
    }

    pub fn is_pro_zero(&self) -> bool {
        self.entries.iter().all(|e| e.witness.is_some())
    }

    pub fn summary(&self) -> String {
        if self.is_pro_zero() {
            format!("pro-zero up to {}", self.kmax)
        } else {
            "no witness within bound (evidence against WPR)".to_string()
        }
    }

    /// Pass when every entry has a witness; otherwise undetermined, carrying
    /// the surviving classes.
    pub fn verdict(&self) -> Verdict {
        let check = format!("pro-zero Koszul homology up to {}", self.kmax);
        let mut v = if self.is_pro_zero() {
            Verdict::pass(check)
        } else {
            Verdict::undetermined(check, self.summary())
        };
        for e in &self.entries {
            if let Some(s) = &e.survivor {
                v.witnesses.push(
                    Witness::new("surviving-class")
                        .at_level(e.k)
                        .at_index(-(e.i as i64))
                        .with_element(&s.image)
                        .with_note(format!(
                            "class [{}] at level {} maps to a nonzero class at level {}",
                            s.class.comps().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
                            s.k_from,
                            e.k
                        )),
                );
            }
        }
        v
    }

    /// A zero map from `k'` into `k` forces zero maps from every `k'' >= k'`.
    pub fn monotonicity(&self) -> Verdict {
        for e in &self.entries {
            let mut seen_zero = None;
            for &(kp, zero) in &e.zero_from {
                match (seen_zero, zero) {
                    (None, true) => seen_zero = Some(kp),
                    (Some(z), false) => {
                        return Verdict::fail(
                            "monotonicity",
                            Witness::new("non-monotone").at_level(e.k).at_index(-(e.i as i64)).with_note(format!(
                                "map from {z} is zero but map from {kp} is not"
                            )),
                        )
                    }
                    _ => {}
                }
            }
        }
        Verdict::pass("monotonicity")
    }
}

/// For each `1 <= i <= depth` and `1 <= k <= kmax - 1`, the least `k' <= kmax`
/// with `H^{-i}(K(a^{k'})) -> H^{-i}(K(a^k))` zero, or a surviving class.
pub fn wpr_report(ring: &Ring, a: &[Polynomial], kmax: u32, depth: usize) -> Result<ProZeroReport, AlgebraError> {
    let tower = KoszulTower::new(ring, a, kmax)?;
    let top = depth.min(a.len());
    let mut entries = Vec::new();
    for i in 1..=top {
        let deg = -(i as i64);
        let hs: Vec<Homology> = (1..=kmax).map(|k| tower.complex(k).homology_at(deg)).collect();
        for k in 1..kmax {
            let target = &hs[k as usize - 1];
            let mut zero_from = Vec::new();
            let mut survivor = None;
            for kp in k..=kmax {
                let t = tower.transition(kp, k)?;
                let source = &hs[kp as usize - 1];
                let surv = t.surviving_class(deg, source, target);
                zero_from.push((kp, surv.is_none()));
                if kp == kmax {
                    survivor = surv.map(|(class, image)| SurvivingClass { k_from: kp, class, image });
                }
            }
            let witness = zero_from.iter().find(|(_, z)| *z).map(|(kp, _)| *kp);
            entries.push(ProZeroEntry {
                i,
                k,
                homology: target.module().clone(),
                generators: target.generators().to_vec(),
                zero_from,
                witness,
                survivor: if witness.is_some() { None } else { survivor },
            });
        }
    }
    Ok(ProZeroReport {
        sequence: a.to_vec(),
        kmax,
        depth: top,
        entries,
    })
}

/// Recomputes every claim in the report: zero maps by composing the explicit
/// transition with each generator, survivals by a nonzero normal form.
pub fn verify_report(ring: &Ring, report: &ProZeroReport) -> Result<Verdict, AlgebraError> {
    let tower = KoszulTower::new(ring, &report.sequence, report.kmax)?;
    for e in &report.entries {
        let deg = -(e.i as i64);
        let target = tower.complex(e.k).homology_at(deg);
        if let Some(kp) = e.witness {
            let source = tower.complex(kp).homology_at(deg);
            let f = tower.transition(kp, e.k)?.component(deg);
            if let Some(g) = source.generators().iter().find(|g| !target.is_zero_class(&f.apply(g))) {
                return Ok(Verdict::fail(
                    "report soundness",
                    Witness::new("false-zero").at_level(e.k).at_index(deg).with_element(g),
                ));
            }
        }
        if let Some(s) = &e.survivor {
            let f = tower.transition(s.k_from, e.k)?.component(deg);
            let img = f.apply(&s.class);
            if target.is_zero_class(&img) || target.normal_form(&img) != s.image {
                return Ok(Verdict::fail(
                    "report soundness",
                    Witness::new("false-survivor").at_level(e.k).at_index(deg).with_element(&s.class),
                ));
            }
        }
    }
    Ok(Verdict::pass("report soundness"))
}

/// Compares the report for `a` with the report for `a A[z]` entry by entry.
pub fn flat_base_change_check(ring: &Ring, a: &[Polynomial], kmax: u32, depth: usize) -> Result<Verdict, AlgebraError> {
    let mut name = "z".to_string();
    while ring.base().var_index(&name).is_some() {
        name.push('_');
    }
    let (rb, embed) = ring.adjoin(&name)?;
    let b: Vec<Polynomial> = a.iter().map(&embed).collect();
    let ra = wpr_report(ring, a, kmax, depth)?;
    let rz = wpr_report(&rb, &b, kmax, depth)?;
    for (x, y) in ra.entries.iter().zip(&rz.entries) {
        let same = x.witness == y.witness
            && x.homology.is_zero() == y.homology.is_zero()
            && x.survivor.is_some() == y.survivor.is_some();
        if !same {
            return Ok(Verdict::fail(
                format!("flat base change to A[{name}]"),
                Witness::new("mismatch").at_level(x.k).at_index(-(x.i as i64)).with_note(format!(
                    "witness {:?} over A, {:?} over A[{name}]",
                    x.witness, y.witness
                )),
            ));
        }
    }
    Ok(Verdict::pass(format!("flat base change to A[{name}]")).note(format!("{} entries", ra.entries.len())))
}

/// Two generating sequences of one ideal should agree on pro-zero evidence.
/// This is a consistency check only: agreement up to a bound proves nothing.
pub fn generating_sequence_cross_check(
    ring: &Ring,
    a: &[Polynomial],
    b: &[Polynomial],
    kmax: u32,
    depth: usize,
) -> Result<Verdict, AlgebraError> {
    let base = ring.base();
    let ia = Ideal::new(base, a.to_vec())?.sum(ring.modulus());
    let ib = Ideal::new(base, b.to_vec())?.sum(ring.modulus());
    if ia != ib {
        return Err(AlgebraError::Invalid("sequences generate different ideals".into()));
    }
    let va = wpr_report(ring, a, kmax, depth)?.verdict();
    let vb = wpr_report(ring, b, kmax, depth)?.verdict();
    let check = "generating sequences agree";
    Ok(if va.outcome == vb.outcome {
        Verdict::pass(check).note(format!("both {}", va.outcome))
    } else {
        Verdict::undetermined(check, format!("first {}, second {}", va.outcome, vb.outcome))
    })
}
