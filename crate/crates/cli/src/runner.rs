//! Executes resolved commands and turns their verdicts into reports.

use std::time::Instant;

use serde_json::{json, Value};

use adic_core::adic::{check_induced_completion, ml_kernel_tower_check, torsion_submodule, AdicTower, TORSION_BOUND};
use adic_core::error::AlgebraError;
use adic_core::flatness::{
    adic_flat_check, check_flat_tower_limit, check_lemma_290, check_prop_250, default_torsion_tests,
};
use adic_core::free::{FreeElement, Matrix};
use adic_core::koszul::KoszulTower;
use adic_core::module::{FPModule, ModuleMap};
use adic_core::resolution::{free_resolution, lift_resolution, system_resolution, tor, FreeResolution, SystemResolution};
use adic_core::verdict::{Outcome, Verdict};
use adic_core::wpr::{verify_report, wpr_report};

use crate::report::{inputs_digest, Bounds, Report};
use crate::session::{Object, ResolvedCommand, Session};

fn element(v: &FreeElement) -> Value {
    json!(v.comps().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn matrix(m: &Matrix) -> Value {
    json!(m.to_strings())
}

fn resolution_details(r: &FreeResolution) -> Value {
    let diffs: Vec<Value> = (1..r.length()).map(|i| matrix(&r.differential(i))).collect();
    json!({
        "ranks": r.ranks(),
        "complete": r.is_complete(),
        "augmentation": matrix(r.augmentation()),
        "differentials": diffs,
    })
}

fn obstruction_verdict(err: &adic_core::resolution::SystemObstruction) -> Verdict {
    Verdict::fail("system resolution", err.obstruction.witness())
        .note(format!("levels resolved before the obstruction: {}", err.resolved))
}

fn resolve_system(t: &AdicTower, length: usize, depth: usize) -> Result<SystemResolution, Verdict> {
    system_resolution(t, length, depth).map_err(|e| obstruction_verdict(&e))
}

/// Runs one command. Engine errors become failing reports with an `error`
/// witness rather than aborting the session.
pub fn run_command(cmd: &ResolvedCommand, line: usize, defaults: Bounds) -> Report {
    let bounds = Bounds {
        kmax: cmd.int_option("kmax").map(|k| k as u32).unwrap_or(defaults.kmax),
        depth: cmd.int_option("depth").map(|d| d as usize).unwrap_or(defaults.depth),
    };
    let mut report = Report::new(cmd.command.to_string(), line, inputs_digest(&cmd.inputs, bounds), bounds);
    let start = Instant::now();
    if let Err(e) = execute(cmd, bounds, &mut report) {
        report.set_error(e.to_string());
    }
    report.timing_ms = start.elapsed().as_millis() as u64;
    report
}

fn execute(cmd: &ResolvedCommand, b: Bounds, r: &mut Report) -> Result<(), AlgebraError> {
    let length = cmd.int_option("length").map(|l| l as usize).unwrap_or(b.depth);
    match cmd.command.name.text.as_str() {
        "gb" => {
            let (basis, ok) = match &cmd.args[0].1 {
                Object::Ideal(i) => {
                    let gb = i.basis();
                    (gb.polynomials().iter().map(|p| json!([p.to_string()])).collect::<Vec<_>>(), gb.verify_s_pairs())
                }
                Object::Module(m) => {
                    let gb = m.submodule_basis();
                    (gb.elements().iter().map(element).collect(), gb.verify_s_pairs())
                }
                _ => unreachable!("checked at resolution"),
            };
            r.summary = format!("reduced basis with {} elements", basis.len());
            r.details = json!({ "basis": basis, "s_pairs_reduce_to_zero": ok });
            r.set_verdict(&if ok {
                Verdict::pass("Groebner basis")
            } else {
                Verdict::undetermined("Groebner basis", "an S-pair did not reduce to zero")
            });
        }
        "tor" => {
            let (n, m) = (cmd.module(0), cmd.module(1));
            let indices: Vec<usize> = match cmd.int_option("index") {
                Some(i) => vec![i as usize],
                None => (0..=b.depth).collect(),
            };
            let mut rows = Vec::new();
            for i in indices {
                let t = tor(n, m, i)?;
                rows.push(json!({
                    "index": i,
                    "dimension": t.k_dimension(),
                    "zero": t.is_zero(),
                    "generators": t.generators().iter().map(element).collect::<Vec<_>>(),
                }));
            }
            let dims: Vec<String> = rows
                .iter()
                .map(|v| v["dimension"].as_u64().map_or("inf".to_string(), |d| d.to_string()))
                .collect();
            r.summary = format!("Tor dimensions ({})", dims.join(", "));
            r.details = json!({ "tor": rows });
            r.set_verdict(&Verdict::pass("Tor"));
        }
        "koszul" => {
            let Object::Ideal(a) = &cmd.args[0].1 else { unreachable!() };
            let ring = cmd.ring.clone();
            let seq = a.generators();
            let tower = KoszulTower::new(&ring, seq, b.kmax)?;
            let mut levels = Vec::new();
            let mut parts = Vec::new();
            for k in 1..=b.kmax {
                let c = tower.complex(k);
                let mut hs = Vec::new();
                for i in 0..=seq.len() {
                    let h = c.homology_at(-(i as i64));
                    hs.push(json!({ "index": i, "zero": h.is_zero(), "dimension": h.k_dimension() }));
                }
                let h0 = c.homology_at(0);
                let quotient = FPModule::cyclic(&ring, &a.generator_powers(k));
                let gens = Matrix::from_columns(ring.base(), 1, h0.generators().to_vec())?;
                let iso = ModuleMap::new(h0.module().clone(), quotient, gens)?.is_isomorphism();
                parts.push(if iso {
                    Verdict::pass(format!("H^0 at k = {k}"))
                } else {
                    Verdict::fail(
                        format!("H^0 at k = {k}"),
                        adic_core::verdict::Witness::new("h0-comparison").at_level(k),
                    )
                });
                levels.push(json!({ "k": k, "homology": hs, "h0_is_quotient": iso }));
            }
            r.details = json!({ "levels": levels });
            let acyclic = levels.iter().all(|l| {
                l["homology"].as_array().unwrap().iter().skip(1).all(|h| h["zero"] == json!(true))
            });
            r.summary = format!(
                "negative Koszul homology {} for k <= {}",
                if acyclic { "vanishes" } else { "does not vanish" },
                b.kmax
            );
            r.set_verdict(&Verdict::combine("H^0 = A/(a_i^k)", &parts));
        }
        "wpr" => {
            let Object::Ideal(a) = &cmd.args[0].1 else { unreachable!() };
            let ring = cmd.ring.clone();
            let rep = wpr_report(&ring, a.generators(), b.kmax, b.depth)?;
            let sound = verify_report(&ring, &rep)?;
            let mono = rep.monotonicity();
            let entries: Vec<Value> = rep
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "i": e.i,
                        "k": e.k,
                        "homology_dimension": e.homology.k_dimension(),
                        "generators": e.generators.iter().map(element).collect::<Vec<_>>(),
                        "witness": e.witness,
                        "zero_from": e.zero_from.iter().filter(|(_, z)| *z).map(|(k, _)| k).collect::<Vec<_>>(),
                        "survivor": e.survivor.as_ref().map(|s| json!({
                            "k_from": s.k_from, "class": element(&s.class), "image": element(&s.image)
                        })),
                    })
                })
                .collect();
            r.summary = rep.summary();
            r.details = json!({
                "entries": entries,
                "sound": sound.is_pass(),
                "monotone": mono.is_pass(),
            });
            let mut v = rep.verdict();
            if !sound.is_pass() || !mono.is_pass() {
                v = Verdict::combine(v.check.clone(), &[v, sound, mono]);
            }
            r.set_verdict(&v);
        }
        "flatcheck" => {
            let m = cmd.module(0);
            let (_, a) = cmd.ideal.as_ref().expect("resolved");
            let tests = cmd.tests.clone().unwrap_or_else(|| default_torsion_tests(m.ring(), a));
            let f = adic_flat_check(m, a, b.depth, b.kmax, &tests)?;
            let cond = |v: &Verdict| json!({ "outcome": v.outcome.as_str(), "witnesses": v.witnesses.len() });
            r.summary = f.summary();
            r.details = json!({
                "condition_i": cond(&f.condition_i),
                "condition_ii": cond(&f.condition_ii),
                "condition_iii": cond(&f.condition_iii),
                "weaker_tor1_condition": f.weaker.outcome.as_str(),
                "divergence": f.divergence,
                "torsion_tests": tests.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            });
            if f.divergence {
                r.notes.push("Tor_1(A_0, M) = 0 and A_0 ⊗ M flat hold, but the full conditions fail".into());
            }
            let mut v = Verdict::combine("adic flatness", &[f.condition_iii, f.condition_ii, f.condition_i]);
            v.outcome = f.overall;
            r.set_verdict(&v);
        }
        "tower-validate" => {
            let t = cmd.tower(0);
            r.details = json!({ "levels": t.kmax() + 1, "ranks": t.levels().iter().map(|m| m.rank()).collect::<Vec<_>>() });
            r.set_verdict(&t.validate());
        }
        "system-resolution" => {
            let t = cmd.tower(0);
            match resolve_system(t, length, b.depth) {
                Ok(sr) => {
                    r.summary = format!("resolved {} levels with ranks {:?}", sr.levels().len(), sr.ranks());
                    r.details = json!({
                        "ranks": sr.ranks(),
                        "levels": sr.levels().iter().map(resolution_details).collect::<Vec<_>>(),
                    });
                    r.set_verdict(&Verdict::pass("system resolution"));
                }
                Err(v) => r.set_verdict(&v),
            }
        }
        "lift" => {
            let t = cmd.tower(0);
            let k = cmd.int_option("level").unwrap_or(0) as u32;
            if k >= t.kmax() {
                return Err(AlgebraError::Invalid(format!("level {k} has no successor in a tower with {} levels", t.kmax() + 1)));
            }
            let res_k = free_resolution(t.level(k), length);
            match lift_resolution(&res_k, t.level(k + 1), t.transition(k), t.ideal(), k, b.depth) {
                Ok(lifted) => {
                    r.summary = format!("lifted from level {k} to level {}", k + 1);
                    r.details = json!({ "from": resolution_details(&res_k), "to": resolution_details(&lifted) });
                    r.set_verdict(&lifted.verify());
                }
                Err(ob) => r.set_verdict(&Verdict::fail("lift", ob.witness())),
            }
        }
        "prop250" => {
            let m = cmd.module(0);
            let (_, a) = cmd.ideal.as_ref().expect("resolved");
            let (pre, main) = check_prop_250(m, a, b.kmax, b.depth);
            r.details = json!({ "precondition": pre.outcome.as_str() });
            if !pre.is_pass() {
                r.notes.push(format!("precondition {}: tensored towers checked regardless", pre.outcome));
            }
            r.set_verdict(&main);
        }
        "lemma290" => {
            let t = cmd.tower(0);
            match resolve_system(t, length, b.depth) {
                Ok(sr) => {
                    r.details = json!({ "ranks": sr.ranks() });
                    r.set_verdict(&check_lemma_290(&sr));
                }
                Err(v) => r.set_verdict(&v),
            }
        }
        "limit-flat" => {
            let t = cmd.tower(0);
            let tests = cmd.tests.clone().unwrap_or_else(|| default_torsion_tests(t.base(), t.ideal()));
            match resolve_system(t, length, b.depth) {
                Ok(sr) => {
                    r.details = json!({
                        "ranks": sr.ranks(),
                        "torsion_tests": tests.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                    });
                    r.set_verdict(&check_flat_tower_limit(t, &sr, &tests, b.depth));
                }
                Err(v) => r.set_verdict(&v),
            }
        }
        "torsion" => {
            let m = cmd.module(0);
            let (_, a) = cmd.ideal.as_ref().expect("resolved");
            match torsion_submodule(m, a, TORSION_BOUND) {
                Ok(t) => {
                    r.summary = format!("torsion submodule stabilizes at k = {}", t.level);
                    r.details = json!({
                        "level": t.level,
                        "is_whole": t.is_whole,
                        "is_zero": t.submodule.is_zero(),
                        "dimension": t.submodule.k_dimension(),
                        "generators": t.submodule.generators().iter().map(element).collect::<Vec<_>>(),
                    });
                    r.set_verdict(&Verdict::pass("torsion submodule"));
                }
                Err(v) => r.set_verdict(&v),
            }
        }
        "thm230" => {
            let m = cmd.module(0);
            let (_, a) = cmd.ideal.as_ref().expect("resolved");
            r.set_verdict(&check_induced_completion(m, a, b.kmax));
        }
        "ml" => {
            let Object::Morphism(f) = &cmd.args[0].1 else { unreachable!() };
            r.set_verdict(&ml_kernel_tower_check(f));
        }
        other => unreachable!("unknown command {other} passed resolution"),
    }
    Ok(())
}

/// Runs a whole session in order.
pub fn run_session(session: &Session, defaults: Bounds) -> Vec<Report> {
    session
        .commands
        .iter()
        .map(|c| run_command(c, c.command.name.span.line, defaults))
        .collect()
}

pub fn any_fail(reports: &[Report]) -> bool {
    reports.iter().any(|r| r.outcome() == Outcome::Fail)
}

/// Markdown table of the reports.
pub fn summary_table(reports: &[Report]) -> String {
    let mut out = String::from("| line | command | verdict | summary |\n|---|---|---|---|\n");
    for r in reports {
        out.push_str(&format!(
            "| {} | `{}` | {} | {} |\n",
            r.line,
            r.command,
            r.verdict,
            r.summary.replace('|', "\\|")
        ));
    }
    out
}
