//! Randomized self-checks driven by a seed, for smoke-testing an install.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use adic_core::groebner::GroebnerBasis;
use adic_core::monomial::{Monomial, MonomialOrder};
use adic_core::poly::{PolyRing, Polynomial};
use adic_core::scalar::Field;
use adic_core::verdict::{Verdict, Witness};

use crate::report::{inputs_digest, Bounds, Report};

fn random_poly(rng: &mut StdRng, b: &std::sync::Arc<PolyRing>, max_exp: u32, max_terms: usize) -> Polynomial {
    let n = rng.gen_range(1..=max_terms);
    let terms = (0..n)
        .map(|_| {
            let e = (0..b.nvars()).map(|_| rng.gen_range(0..=max_exp)).collect();
            (Monomial::new(e), b.field().from_i64(rng.gen_range(-5..=5)))
        })
        .collect();
    b.from_terms(terms)
}

/// Checks Groebner soundness on `cases` random ideals: S-pairs reduce to zero,
/// the basis is reduced, and random ideal members reduce to zero.
pub fn groebner_selftest(seed: u64, cases: usize) -> Report {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed);
    let names = vec!["x".to_string(), "y".to_string(), "z".to_string()];
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for case in 0..cases {
        let field = if case % 2 == 0 { Field::Rational } else { Field::prime(101).expect("prime") };
        let order = if case % 3 == 0 { MonomialOrder::Lex } else { MonomialOrder::Grevlex };
        let b = PolyRing::new(field, names.clone(), order).expect("distinct names");
        let gens: Vec<Polynomial> = (0..rng.gen_range(1..=3)).map(|_| random_poly(&mut rng, &b, 2, 3)).collect();
        let gb = GroebnerBasis::of_ideal(&b, &gens);
        sizes.push(gb.len());
        let member = gens
            .iter()
            .fold(b.zero(), |acc, g| acc.add(&g.mul(&random_poly(&mut rng, &b, 1, 2))));
        let ok = gb.verify_s_pairs() && gb.is_reduced() && gb.reduce_poly(&member).is_zero();
        if !ok {
            failures.push(
                Witness::new("groebner")
                    .at_index(case as i64)
                    .with_note(gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")),
            );
        }
    }
    let bounds = Bounds { kmax: 0, depth: 0 };
    let mut r = Report::new(
        format!("selftest seed {seed} cases {cases}"),
        1,
        inputs_digest(&[format!("selftest {seed} {cases}")], bounds),
        bounds,
    );
    r.details = json!({ "seed": seed, "cases": cases, "basis_sizes": sizes });
    let v = match failures.first() {
        None => Verdict::pass("random Groebner bases"),
        Some(w) => {
            let mut v = Verdict::fail("random Groebner bases", w.clone());
            v.witnesses.extend(failures[1..].iter().cloned());
            v
        }
    };
    r.set_verdict(&v);
    r.timing_ms = start.elapsed().as_millis() as u64;
    r
}
