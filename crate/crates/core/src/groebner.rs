//! Buchberger's algorithm for submodules of `A^r`, normal forms, Schreyer
//! syzygies and lifting (expressing members in terms of generators).
//!
//! Pairs are processed by the normal strategy: smallest lcm degree first,
//! ties broken by the term order and then by index, so outputs are
//! reproducible run to run.

use std::collections::HashSet;
use std::sync::Arc;

use crate::free::FreeElement;
use crate::monomial::{ModuleOrder, Monomial, TermOrder};
use crate::poly::{PolyRing, Polynomial};
use crate::scalar::Scalar;

/// A reduced Gröbner basis of a submodule of `A^rank`, sorted ascending by
/// leading term. Every element is monic.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    rank: usize,
    order: TermOrder,
    elems: Vec<FreeElement>,
    leads: Vec<(usize, Monomial)>,
}

struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Monomial,
}

/// Quotients of a division, one polynomial per basis element.
pub type Quotients = Vec<Polynomial>;

impl GroebnerBasis {
    pub fn new(ring: &Arc<PolyRing>, rank: usize, gens: &[FreeElement]) -> GroebnerBasis {
        Self::with_order(ring, rank, gens, ModuleOrder::default())
    }

    pub fn with_order(
        ring: &Arc<PolyRing>,
        rank: usize,
        gens: &[FreeElement],
        module: ModuleOrder,
    ) -> GroebnerBasis {
        Engine::new(ring, rank, module, gens.len(), false).run(gens).0
    }

    /// Basis together with the representation of each basis element as a
    /// combination of `gens` (vectors in `A^{gens.len()}`).
    pub fn with_transform(
        ring: &Arc<PolyRing>,
        rank: usize,
        gens: &[FreeElement],
    ) -> (GroebnerBasis, Vec<FreeElement>) {
        Engine::new(ring, rank, ModuleOrder::default(), gens.len(), true).run(gens)
    }

    /// Gröbner basis of an ideal given by polynomial generators.
    pub fn of_ideal(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> GroebnerBasis {
        let v: Vec<FreeElement> = gens
            .iter()
            .map(|g| FreeElement::from_parts(ring, vec![g.clone()]))
            .collect();
        Self::new(ring, 1, &v)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn elements(&self) -> &[FreeElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// The polynomials of a rank-one basis.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.elems.iter().map(|e| e.comp(0).clone()).collect()
    }

    pub fn leads(&self) -> &[(usize, Monomial)] {
        &self.leads
    }

    /// Fully reduced remainder; zero iff `f` lies in the submodule.
    pub fn reduce(&self, f: &FreeElement) -> FreeElement {
        divide(&self.ring, &self.order, &self.elems, &self.leads, f, false).1
    }

    pub fn reduce_poly(&self, f: &Polynomial) -> Polynomial {
        self.reduce(&FreeElement::from_parts(&self.ring, vec![f.clone()]))
            .into_comps()
            .pop()
            .unwrap()
    }

    pub fn contains(&self, f: &FreeElement) -> bool {
        self.reduce(f).is_zero()
    }

    /// Division with quotients: `f = Σ q_i g_i + r`.
    pub fn divide(&self, f: &FreeElement) -> (Quotients, FreeElement) {
        let (q, r) = divide(&self.ring, &self.order, &self.elems, &self.leads, f, true);
        (q.unwrap(), r)
    }

    /// Is the basis the whole free module?
    pub fn is_everything(&self) -> bool {
        (0..self.rank).all(|i| self.leads.iter().any(|(p, m)| *p == i && m.is_one()))
    }

    fn s_vector(&self, i: usize, j: usize) -> Option<(FreeElement, Monomial, Monomial)> {
        let (pi, mi) = &self.leads[i];
        let (pj, mj) = &self.leads[j];
        if pi != pj {
            return None;
        }
        let l = mi.lcm(mj);
        let ti = mi.quotient_of(&l).unwrap();
        let tj = mj.quotient_of(&l).unwrap();
        let one = self.ring.field().one();
        let s = self.elems[i]
            .mul_term(&one, &ti)
            .sub_scaled(&one, &tj, &self.elems[j]);
        Some((s, ti, tj))
    }

    /// Buchberger's criterion, checked over every pair.
    pub fn verify_s_pairs(&self) -> bool {
        for i in 0..self.elems.len() {
            for j in i + 1..self.elems.len() {
                if let Some((s, _, _)) = self.s_vector(i, j) {
                    if !self.contains(&s) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// No leading term divides any term of another element.
    pub fn is_reduced(&self) -> bool {
        for (i, e) in self.elems.iter().enumerate() {
            match e.lead(&self.order) {
                Some((_, _, c)) if c.is_one() => {}
                _ => return false,
            }
            for (pos, comp) in e.comps().iter().enumerate() {
                for (m, _) in comp.terms() {
                    for (j, (p, l)) in self.leads.iter().enumerate() {
                        if j != i && *p == pos && l.divides(m) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Generators of the syzygy module of the basis itself, one per S-pair
    /// (Schreyer): `t_ij e_i - t_ji e_j - Σ q_l e_l`.
    pub fn schreyer_syzygies(&self) -> Vec<FreeElement> {
        let s = self.elems.len();
        let mut out = Vec::new();
        let one = self.ring.field().one();
        for i in 0..s {
            for j in i + 1..s {
                let Some((sv, ti, tj)) = self.s_vector(i, j) else {
                    continue;
                };
                let (q, r) = self.divide(&sv);
                debug_assert!(r.is_zero(), "S-vector of a Gröbner basis must reduce to zero");
                let mut comps: Vec<Polynomial> = q.into_iter().map(|p| p.neg()).collect();
                comps[i] = comps[i].add(&self.ring.term(ti, one.clone()));
                comps[j] = comps[j].sub(&self.ring.term(tj, one.clone()));
                out.push(FreeElement::from_parts(&self.ring, comps));
            }
        }
        out
    }

    /// Standard monomials `x^a e_j` of the quotient `A^rank / U`, or `None`
    /// when there are infinitely many.
    pub fn standard_monomials(&self) -> Option<Vec<(usize, Monomial)>> {
        let n = self.ring.nvars();
        let mut out = Vec::new();
        for pos in 0..self.rank {
            let leads: Vec<&Monomial> = self
                .leads
                .iter()
                .filter(|(p, _)| *p == pos)
                .map(|(_, m)| m)
                .collect();
            if leads.iter().any(|m| m.is_one()) {
                continue;
            }
            let mut bounds = Vec::with_capacity(n);
            for v in 0..n {
                let b = leads
                    .iter()
                    .filter(|m| {
                        m.exponents()
                            .iter()
                            .enumerate()
                            .all(|(w, e)| w == v || *e == 0)
                    })
                    .map(|m| m.exponents()[v])
                    .min()?;
                bounds.push(b);
            }
            let mut exps = vec![0u32; n];
            loop {
                let m = Monomial::new(exps.clone());
                if !leads.iter().any(|l| l.divides(&m)) {
                    out.push((pos, m));
                }
                // odometer over the box [0, bound)
                let mut v = 0;
                loop {
                    if v == n {
                        break;
                    }
                    exps[v] += 1;
                    if exps[v] < bounds[v] {
                        break;
                    }
                    exps[v] = 0;
                    v += 1;
                }
                if v == n {
                    break;
                }
            }
        }
        Some(out)
    }

    /// Number of standard monomials `x^a e_j` with `|a| + shifts[j] == degree`.
    pub fn hilbert_function(&self, shifts: &[i64], degree: i64) -> usize {
        let n = self.ring.nvars();
        let mut count = 0;
        for (pos, shift) in shifts.iter().enumerate().take(self.rank) {
            let d = degree - shift;
            if d < 0 {
                continue;
            }
            let leads: Vec<&Monomial> = self
                .leads
                .iter()
                .filter(|(p, _)| *p == pos)
                .map(|(_, m)| m)
                .collect();
            for m in monomials_of_degree(n, d as u32) {
                if !leads.iter().any(|l| l.divides(&m)) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// All exponent vectors in `n` variables of total degree `d`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::new(vec![]));
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

fn divide(
    ring: &Arc<PolyRing>,
    order: &TermOrder,
    elems: &[FreeElement],
    leads: &[(usize, Monomial)],
    f: &FreeElement,
    track: bool,
) -> (Option<Quotients>, FreeElement) {
    let rank = f.rank();
    let mut p = f.clone();
    let mut rem: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
    let mut quot: Vec<Vec<(Monomial, Scalar)>> = if track {
        vec![Vec::new(); elems.len()]
    } else {
        Vec::new()
    };
    while let Some((pos, m, c)) = p.lead(order) {
        let found = leads
            .iter()
            .position(|(lp, l)| *lp == pos && l.divides(m));
        match found {
            Some(i) => {
                let t = leads[i].1.quotient_of(m).unwrap();
                let lc = elems[i].lead(order).unwrap().2;
                let coeff = c.div(lc);
                if track {
                    quot[i].push((t.clone(), coeff.clone()));
                }
                p = p.sub_scaled(&coeff, &t, &elems[i]);
            }
            None => {
                let term = p.comps_mut()[pos].pop_lead().unwrap();
                rem[pos].push(term);
            }
        }
    }
    let remainder = FreeElement::from_parts(
        ring,
        rem.into_iter()
            .map(|mut t| {
                t.reverse();
                Polynomial::from_sorted(ring, t)
            })
            .collect(),
    );
    let quotients = track.then(|| {
        quot.into_iter()
            .map(|mut t| {
                t.reverse();
                Polynomial::from_sorted(ring, t)
            })
            .collect()
    });
    (quotients, remainder)
}

struct Engine {
    ring: Arc<PolyRing>,
    rank: usize,
    order: TermOrder,
    ngens: usize,
    track: bool,
    basis: Vec<FreeElement>,
    reprs: Vec<FreeElement>,
    leads: Vec<(usize, Monomial)>,
}

impl Engine {
    fn new(ring: &Arc<PolyRing>, rank: usize, module: ModuleOrder, ngens: usize, track: bool) -> Engine {
        Engine {
            ring: Arc::clone(ring),
            rank,
            order: TermOrder::new(ring.order(), module),
            ngens,
            track,
            basis: Vec::new(),
            reprs: Vec::new(),
            leads: Vec::new(),
        }
    }

    /// Reduces `f` (with representation `repr`) and returns the remainder
    /// with its updated representation.
    fn reduce_tracked(&self, f: &FreeElement, repr: FreeElement) -> (FreeElement, FreeElement) {
        let (q, r) = divide(&self.ring, &self.order, &self.basis, &self.leads, f, self.track);
        let mut repr = repr;
        if let Some(q) = q {
            for (l, ql) in q.iter().enumerate() {
                if !ql.is_zero() {
                    repr = repr.sub(&self.reprs[l].scale(ql));
                }
            }
        }
        (r, repr)
    }

    fn push(&mut self, f: FreeElement, repr: FreeElement) {
        let (pos, m, c) = f.lead(&self.order).expect("nonzero");
        let inv = c.inv().unwrap();
        let lead = (pos, m.clone());
        let f = FreeElement::from_parts(&self.ring, f.comps().iter().map(|a| a.scale(&inv)).collect());
        let repr = if self.track {
            FreeElement::from_parts(&self.ring, repr.comps().iter().map(|a| a.scale(&inv)).collect())
        } else {
            repr
        };
        self.basis.push(f);
        self.reprs.push(repr);
        self.leads.push(lead);
    }

    fn empty_repr(&self) -> FreeElement {
        FreeElement::zero(&self.ring, if self.track { self.ngens } else { 0 })
    }

    fn run(mut self, gens: &[FreeElement]) -> (GroebnerBasis, Vec<FreeElement>) {
        let mut pending: Vec<Pair> = Vec::new();
        let mut pending_keys: HashSet<(usize, usize)> = HashSet::new();
        let one = self.ring.field().one();

        for (g_idx, g) in gens.iter().enumerate() {
            debug_assert_eq!(g.rank(), self.rank);
            let repr = if self.track {
                FreeElement::unit(&self.ring, self.ngens, g_idx)
            } else {
                self.empty_repr()
            };
            let (r, repr) = self.reduce_tracked(g, repr);
            if !r.is_zero() {
                self.push(r, repr);
                self.new_pairs(&mut pending, &mut pending_keys);
            }
        }

        while !pending.is_empty() {
            let best = (0..pending.len())
                .min_by(|&a, &b| {
                    let (pa, pb) = (&pending[a], &pending[b]);
                    pa.lcm
                        .degree()
                        .cmp(&pb.lcm.degree())
                        .then_with(|| self.order.cmp((&pa.lcm, pa.pos), (&pb.lcm, pb.pos)))
                        .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
                })
                .unwrap();
            let pair = pending.swap_remove(best);
            pending_keys.remove(&(pair.i, pair.j));

            if self.chain_criterion(&pair, &pending_keys) {
                continue;
            }
            if self.rank == 1 && !self.track {
                let (mi, mj) = (&self.leads[pair.i].1, &self.leads[pair.j].1);
                if mi.is_coprime(mj) {
                    continue;
                }
            }
            let ti = self.leads[pair.i].1.quotient_of(&pair.lcm).unwrap();
            let tj = self.leads[pair.j].1.quotient_of(&pair.lcm).unwrap();
            let s = self.basis[pair.i]
                .mul_term(&one, &ti)
                .sub_scaled(&one, &tj, &self.basis[pair.j]);
            let repr = if self.track {
                self.reprs[pair.i]
                    .mul_term(&one, &ti)
                    .sub_scaled(&one, &tj, &self.reprs[pair.j])
            } else {
                self.empty_repr()
            };
            let (r, repr) = self.reduce_tracked(&s, repr);
            if !r.is_zero() {
                self.push(r, repr);
                self.new_pairs(&mut pending, &mut pending_keys);
            }
        }

        self.interreduce()
    }

    fn new_pairs(&self, pending: &mut Vec<Pair>, keys: &mut HashSet<(usize, usize)>) {
        let j = self.basis.len() - 1;
        let (pj, mj) = &self.leads[j];
        for i in 0..j {
            let (pi, mi) = &self.leads[i];
            if pi != pj {
                continue;
            }
            pending.push(Pair {
                i,
                j,
                pos: *pi,
                lcm: mi.lcm(mj),
            });
            keys.insert((i, j));
        }
    }

    fn chain_criterion(&self, pair: &Pair, keys: &HashSet<(usize, usize)>) -> bool {
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        self.leads.iter().enumerate().any(|(l, (p, m))| {
            l != pair.i
                && l != pair.j
                && *p == pair.pos
                && m.divides(&pair.lcm)
                && !keys.contains(&key(pair.i, l))
                && !keys.contains(&key(pair.j, l))
        })
    }

    fn interreduce(self) -> (GroebnerBasis, Vec<FreeElement>) {
        let n = self.basis.len();
        // drop elements whose lead is divisible by another lead
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..n {
            let (pi, mi) = &self.leads[i];
            let redundant = (0..n).any(|j| {
                let (pj, mj) = &self.leads[j];
                j != i && pj == pi && mj.divides(mi) && (mj != mi || j < i)
            });
            if !redundant {
                keep.push(i);
            }
        }
        let order = self.order;
        keep.sort_by(|&a, &b| {
            order.cmp(
                (&self.leads[a].1, self.leads[a].0),
                (&self.leads[b].1, self.leads[b].0),
            )
        });
        let mut elems: Vec<FreeElement> = keep.iter().map(|&i| self.basis[i].clone()).collect();
        let mut reprs: Vec<FreeElement> = keep.iter().map(|&i| self.reprs[i].clone()).collect();
        let leads: Vec<(usize, Monomial)> = keep.iter().map(|&i| self.leads[i].clone()).collect();

        // tail reduction: reduce each element by the others (its lead is untouched)
        for i in 0..elems.len() {
            let others: Vec<usize> = (0..elems.len()).filter(|&j| j != i).collect();
            let oe: Vec<FreeElement> = others.iter().map(|&j| elems[j].clone()).collect();
            let ol: Vec<(usize, Monomial)> = others.iter().map(|&j| leads[j].clone()).collect();
            let (q, r) = divide(&self.ring, &order, &oe, &ol, &elems[i], self.track);
            if let Some(q) = q {
                for (k, qk) in q.iter().enumerate() {
                    if !qk.is_zero() {
                        reprs[i] = reprs[i].sub(&reprs[others[k]].scale(qk));
                    }
                }
            }
            elems[i] = r;
        }
        let gb = GroebnerBasis {
            ring: self.ring,
            rank: self.rank,
            order,
            elems,
            leads,
        };
        (gb, reprs)
    }
}

/// Generators of the syzygy module of `gens` (vectors `c` with `Σ c_i gens_i = 0`).
pub fn syzygies(ring: &Arc<PolyRing>, rank: usize, gens: &[FreeElement]) -> Vec<FreeElement> {
    let m = gens.len();
    let (gb, transform) = GroebnerBasis::with_transform(ring, rank, gens);
    let mut out: Vec<FreeElement> = Vec::new();
    let mut seen: HashSet<FreeElement> = HashSet::new();
    let mut emit = |v: FreeElement, out: &mut Vec<FreeElement>| {
        if !v.is_zero() && seen.insert(v.clone()) {
            out.push(v);
        }
    };
    let combine = |coeffs: &[Polynomial]| {
        let mut acc = FreeElement::zero(ring, m);
        for (l, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&transform[l].scale(c));
            }
        }
        acc
    };
    for sigma in gb.schreyer_syzygies() {
        emit(combine(sigma.comps()), &mut out);
    }
    for (i, g) in gens.iter().enumerate() {
        let (q, r) = gb.divide(g);
        debug_assert!(r.is_zero());
        let v = FreeElement::unit(ring, m, i).sub(&combine(&q));
        emit(v, &mut out);
    }
    out
}

/// Coefficients `c` with `Σ c_i gens_i = target`, if `target` is in the span.
pub fn lift(
    ring: &Arc<PolyRing>,
    rank: usize,
    gens: &[FreeElement],
    target: &FreeElement,
) -> Option<FreeElement> {
    let (gb, transform) = GroebnerBasis::with_transform(ring, rank, gens);
    let (q, r) = gb.divide(target);
    if !r.is_zero() {
        return None;
    }
    let mut acc = FreeElement::zero(ring, gens.len());
    for (l, c) in q.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&transform[l].scale(c));
        }
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<PolyRing> {
        PolyRing::rational(&["x", "y"])
    }

    fn ideal(r: &Arc<PolyRing>, gens: &[&str]) -> GroebnerBasis {
        let g: Vec<Polynomial> = gens.iter().map(|s| r.parse(s).unwrap()).collect();
        GroebnerBasis::of_ideal(r, &g)
    }

    fn strs(gb: &GroebnerBasis) -> Vec<String> {
        gb.polynomials().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn basis_examples() {
        let r = ring();
        assert_eq!(strs(&ideal(&r, &["x", "y"])), vec!["y", "x"]);
        assert_eq!(
            strs(&ideal(&r, &["x^2", "2*x*y + x^2", "y^2"])),
            vec!["y^2", "x*y", "x^2"]
        );
        let gb = ideal(&r, &["x^2 - y", "x*y - 1"]);
        assert!(gb.verify_s_pairs());
        assert!(gb.is_reduced());
        // frozen from an external CAS run (grevlex, x > y)
        assert_eq!(strs(&gb), vec!["y^2 - x", "x*y - 1", "x^2 - y"]);
    }

    #[test]
    fn normal_forms() {
        let r = ring();
        let gb = ideal(&r, &["x", "y"]);
        assert!(gb.reduce_poly(&r.parse("x^2 + y").unwrap()).is_zero());
        assert_eq!(gb.reduce_poly(&r.one()), r.one());
        let m5 = ideal(&r, &["x^5", "x^4*y", "x^3*y^2", "x^2*y^3", "x*y^4", "y^5"]);
        let f = r.parse("x^3*y").unwrap();
        assert_eq!(m5.reduce_poly(&f), f);
    }

    #[test]
    fn koszul_syzygy() {
        let r = ring();
        let gens = vec![
            FreeElement::from_parts(&r, vec![r.var(0)]),
            FreeElement::from_parts(&r, vec![r.var(1)]),
        ];
        let syz = syzygies(&r, 1, &gens);
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        assert!(s.comp(0).mul(&r.var(0)).add(&s.comp(1).mul(&r.var(1))).is_zero());
        assert_eq!(s.comp(0), &r.var(1).neg());
        assert!(syzygies(&r, 1, &gens[..1]).is_empty());
    }

    #[test]
    fn lift_recovers_coefficients() {
        let r = ring();
        let gens = vec![
            FreeElement::from_parts(&r, vec![r.parse("x^2 - y").unwrap()]),
            FreeElement::from_parts(&r, vec![r.parse("x*y - 1").unwrap()]),
        ];
        let target = FreeElement::from_parts(&r, vec![r.parse("y^3 - 1").unwrap()]);
        let c = lift(&r, 1, &gens, &target).unwrap();
        let back = gens[0].scale(c.comp(0)).add(&gens[1].scale(c.comp(1)));
        assert_eq!(back, target);
        assert!(lift(&r, 1, &gens, &FreeElement::from_parts(&r, vec![r.var(0)])).is_none());
    }
}
