//! Finitely presented modules `coker(A^s -> A^r)` over a ring `A / I`,
//! subquotients, maps between presentations and the basic constructions
//! (kernels, annihilators, tensor products, minimal presentations).
//!
//! Isomorphism of abstract presentations is never decided. Claimed
//! isomorphisms are always witnessed by an explicit [`ModuleMap`] whose
//! kernel and cokernel are checked for vanishing.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::free::{FreeElement, Matrix};
use crate::groebner::{syzygies, GroebnerBasis};
use crate::poly::{PolyRing, Polynomial};
use crate::ring::{Ideal, QuotientRing, Ring};

#[derive(Clone, Debug)]
pub struct FPModule {
    ring: Ring,
    rank: usize,
    relations: Vec<FreeElement>,
    degrees: Option<Vec<i64>>,
}

impl FPModule {
    pub fn new(ring: &Ring, rank: usize, relations: Vec<FreeElement>) -> Result<FPModule, AlgebraError> {
        for r in &relations {
            if r.rank() != rank {
                return Err(AlgebraError::RankMismatch {
                    expected: rank,
                    found: r.rank(),
                });
            }
            if **r.ring() != **ring.base() {
                return Err(AlgebraError::RingMismatch);
            }
        }
        Ok(FPModule {
            ring: Arc::clone(ring),
            rank,
            relations,
            degrees: None,
        })
    }

    /// `coker(matrix)`.
    pub fn from_matrix(ring: &Ring, matrix: &Matrix) -> Result<FPModule, AlgebraError> {
        FPModule::new(ring, matrix.nrows(), matrix.columns().to_vec())
    }

    pub fn free(ring: &Ring, rank: usize) -> FPModule {
        FPModule {
            ring: Arc::clone(ring),
            rank,
            relations: Vec::new(),
            degrees: Some(vec![0; rank]),
        }
    }

    pub fn zero(ring: &Ring) -> FPModule {
        FPModule::free(ring, 0)
    }

    /// The cyclic module `A / J` (read over `ring`).
    pub fn cyclic(ring: &Ring, j: &Ideal) -> FPModule {
        let base = ring.base();
        let rels = j
            .generators()
            .iter()
            .map(|g| FreeElement::from_parts(base, vec![g.clone()]))
            .collect();
        FPModule::new(ring, 1, rels).expect("rank one")
    }

    /// Attaches generator degrees; rejected when relations are not homogeneous for them.
    pub fn with_degrees(mut self, degrees: Vec<i64>) -> Result<FPModule, AlgebraError> {
        if degrees.len() != self.rank {
            return Err(AlgebraError::RankMismatch {
                expected: self.rank,
                found: degrees.len(),
            });
        }
        if self
            .relations
            .iter()
            .any(|r| !r.is_zero() && r.homogeneous_degree(&degrees).is_none())
        {
            return Err(AlgebraError::Invalid("relations are not homogeneous for the given degrees".into()));
        }
        self.degrees = Some(degrees);
        Ok(self)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn base(&self) -> &Arc<PolyRing> {
        self.ring.base()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[FreeElement] {
        &self.relations
    }

    pub fn relation_matrix(&self) -> Matrix {
        Matrix::from_cols_unchecked(self.ring.base(), self.rank, self.relations.clone())
    }

    pub fn degrees(&self) -> Option<&[i64]> {
        self.degrees.as_deref()
    }

    /// Relations together with the modulus columns `I * A^r`.
    pub fn relation_span(&self) -> Vec<FreeElement> {
        let mut v = self.relations.clone();
        v.extend(self.ring.modulus_columns(self.rank));
        v
    }

    pub fn submodule_basis(&self) -> GroebnerBasis {
        GroebnerBasis::new(self.ring.base(), self.rank, &self.relation_span())
    }

    /// Is `v` zero in the module?
    pub fn is_zero_element(&self, v: &FreeElement) -> bool {
        self.submodule_basis().contains(v)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 || self.submodule_basis().is_everything()
    }

    /// Dimension over the coefficient field, `None` when infinite.
    pub fn k_dimension(&self) -> Option<usize> {
        if self.rank == 0 {
            return Some(0);
        }
        self.submodule_basis().standard_monomials().map(|s| s.len())
    }

    /// A generator whose class is nonzero, if any.
    pub fn nonzero_generator(&self) -> Option<usize> {
        let gb = self.submodule_basis();
        (0..self.rank).find(|&i| !gb.contains(&FreeElement::unit(self.base(), self.rank, i)))
    }

    /// Graded dimension in `degree` using the generator degrees (zero when unknown).
    pub fn hilbert_function(&self, degree: i64) -> usize {
        let shifts = self.degrees.clone().unwrap_or_else(|| vec![0; self.rank]);
        self.submodule_basis().hilbert_function(&shifts, degree)
    }

    /// Generator degrees making every relation homogeneous, if they exist.
    pub fn infer_degrees(&self) -> Option<Vec<i64>> {
        if let Some(d) = &self.degrees {
            return Some(d.clone());
        }
        infer_degrees(self.rank, &self.relations)
    }

    /// Graded presentation over a graded ring.
    pub fn is_graded(&self) -> bool {
        self.ring.is_homogeneous() && self.infer_degrees().is_some()
    }

    /// The same presentation read over `ring` (which must be a quotient of ours).
    pub fn over(&self, ring: &Ring) -> Result<FPModule, AlgebraError> {
        if !self.ring.maps_onto(ring) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(FPModule {
            ring: Arc::clone(ring),
            rank: self.rank,
            relations: self.relations.clone(),
            degrees: self.degrees.clone(),
        })
    }

    /// The same module viewed over a ring mapping onto ours: the modulus
    /// of our ring becomes explicit relations.
    pub fn restrict_to(&self, ring: &Ring) -> Result<FPModule, AlgebraError> {
        if !ring.maps_onto(&self.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        let mut rels = self.relations.clone();
        rels.extend(self.ring.modulus_columns(self.rank));
        let degrees = self
            .degrees
            .clone()
            .filter(|d| rels.iter().all(|r| r.is_zero() || r.homogeneous_degree(d).is_some()));
        Ok(FPModule {
            ring: Arc::clone(ring),
            rank: self.rank,
            relations: rels,
            degrees,
        })
    }

    /// Base change `A/J ⊗ M`: the presentation with `J` added to the ring.
    pub fn base_change(&self, extra: &Ideal) -> FPModule {
        FPModule {
            ring: self.ring.extend(extra),
            rank: self.rank,
            relations: self.relations.clone(),
            degrees: self.degrees.clone(),
        }
    }

    pub fn direct_sum(&self, other: &FPModule) -> Result<FPModule, AlgebraError> {
        if !self.ring.same_as(&other.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        let rank = self.rank + other.rank;
        let mut rels: Vec<FreeElement> = self.relations.iter().map(|r| r.embed(rank, 0)).collect();
        rels.extend(other.relations.iter().map(|r| r.embed(rank, self.rank)));
        let degrees = match (&self.degrees, &other.degrees) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(FPModule {
            ring: Arc::clone(&self.ring),
            rank,
            relations: rels,
            degrees,
        })
    }

    /// `⊕_{z ∈ Z} M` for a finite index set of size `z`; generator `(z, i)` is
    /// indexed `z * rank + i`.
    pub fn finite_support(&self, z: usize) -> FPModule {
        let mut acc = FPModule::zero(&self.ring);
        for _ in 0..z {
            acc = acc.direct_sum(self).expect("same ring");
        }
        acc
    }

    /// Generic presentation of `M ⊗ N`; generator `m_a ⊗ n_b` is `a * rank(N) + b`.
    pub fn tensor(&self, other: &FPModule) -> Result<FPModule, AlgebraError> {
        if !self.ring.same_as(&other.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        let fm = self.relation_matrix().kron_identity(other.rank);
        let fn_ = other.relation_matrix().identity_kron(self.rank);
        let rels = fm.hstack(&fn_).into_columns();
        let degrees = match (&self.degrees, &other.degrees) {
            (Some(a), Some(b)) => Some(
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| x + y))
                    .collect(),
            ),
            _ => None,
        };
        Ok(FPModule {
            ring: Arc::clone(&self.ring),
            rank: self.rank * other.rank,
            relations: rels,
            degrees,
        })
    }

    /// Is the module annihilated by `j`?
    pub fn annihilated_by(&self, j: &Ideal) -> bool {
        let gb = self.submodule_basis();
        j.generators().iter().all(|g| {
            (0..self.rank).all(|i| gb.contains(&FreeElement::unit(self.base(), self.rank, i).scale(g)))
        })
    }

    /// Relations reduced modulo the ring, with zero columns dropped.
    pub fn reduced_relations(&self) -> Vec<FreeElement> {
        self.relations
            .iter()
            .map(|r| self.ring.reduce_vector(r))
            .filter(|r| !r.is_zero())
            .collect()
    }

    /// Same generators, relation set pruned to an irredundant one.
    pub fn pruned(&self) -> FPModule {
        let extra = self.ring.modulus_columns(self.rank);
        let rels = minimize_generators(self.base(), self.rank, &self.reduced_relations(), &extra, self.degrees.as_deref());
        FPModule {
            ring: Arc::clone(&self.ring),
            rank: self.rank,
            relations: rels,
            degrees: self.degrees.clone(),
        }
    }
}

impl fmt::Display for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coker over {} of rank {} with {} relations", self.ring, self.rank, self.relations.len())
    }
}

fn infer_degrees(rank: usize, relations: &[FreeElement]) -> Option<Vec<i64>> {
    // weighted union-find: degree(i) = degree(root) + offset(i)
    let mut parent: Vec<usize> = (0..rank).collect();
    let mut offset: Vec<i64> = vec![0; rank];
    fn find(parent: &mut [usize], offset: &mut [i64], i: usize) -> (usize, i64) {
        if parent[i] == i {
            return (i, 0);
        }
        let (r, o) = find(parent, offset, parent[i]);
        parent[i] = r;
        offset[i] += o;
        (r, offset[i])
    }
    for rel in relations {
        let mut first: Option<(usize, i64)> = None;
        for (j, c) in rel.comps().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = c.homogeneous_degree()? as i64;
            // deg(e_j) + d is the column degree
            match first {
                None => first = Some((j, d)),
                Some((j0, d0)) => {
                    // deg(e_j) = deg(e_j0) + d0 - d
                    let (r0, o0) = find(&mut parent, &mut offset, j0);
                    let (r1, o1) = find(&mut parent, &mut offset, j);
                    let want = o0 + d0 - d;
                    if r0 == r1 {
                        if o1 != want {
                            return None;
                        }
                    } else {
                        parent[r1] = r0;
                        offset[r1] = want - o1;
                    }
                }
            }
        }
    }
    let mut degs = vec![0i64; rank];
    for (i, d) in degs.iter_mut().enumerate() {
        *d = find(&mut parent, &mut offset, i).1;
    }
    // normalize each component so its minimum degree is zero
    let mut min_by_root: HashMap<usize, i64> = HashMap::new();
    for i in 0..rank {
        let (r, o) = find(&mut parent, &mut offset, i);
        let e = min_by_root.entry(r).or_insert(o);
        *e = (*e).min(o);
    }
    for (i, d) in degs.iter_mut().enumerate() {
        let (r, _) = find(&mut parent, &mut offset, i);
        *d -= min_by_root[&r];
    }
    Some(degs)
}

/// Irredundant generating set of `span(gens) + span(extra)` modulo `span(extra)`.
///
/// Generators are normal-form reduced against `extra`, visited by increasing
/// degree and kept only when outside the span of what was kept so far. For
/// homogeneous input this is a minimal generating set; otherwise a final
/// pass drops any generator lying in the span of the others.
pub fn minimize_generators(
    base: &Arc<PolyRing>,
    rank: usize,
    gens: &[FreeElement],
    extra: &[FreeElement],
    degrees: Option<&[i64]>,
) -> Vec<FreeElement> {
    let extra_gb = GroebnerBasis::new(base, rank, extra);
    let mut cands: Vec<FreeElement> = gens
        .iter()
        .map(|g| extra_gb.reduce(g))
        .filter(|g| !g.is_zero())
        .map(|g| g.monic(extra_gb.order()))
        .collect();
    let homogeneous = degrees.is_some_and(|d| cands.iter().all(|g| g.homogeneous_degree(d).is_some()));
    let deg_of = |g: &FreeElement| match degrees {
        Some(d) if homogeneous => g.homogeneous_degree(d).unwrap(),
        _ => g.degree(degrees).unwrap_or(0),
    };
    // stable: equal degrees keep their input order
    cands.sort_by_key(|g| deg_of(g));
    let mut kept: Vec<FreeElement> = Vec::new();
    let mut gb = extra_gb;
    for g in cands {
        if gb.contains(&g) {
            continue;
        }
        let mut span: Vec<FreeElement> = gb.elements().to_vec();
        span.push(g.clone());
        gb = GroebnerBasis::new(base, rank, &span);
        kept.push(g);
    }
    if !homogeneous && kept.len() > 1 {
        let mut i = kept.len();
        while i > 0 {
            i -= 1;
            let mut span: Vec<FreeElement> = extra.to_vec();
            span.extend(kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()));
            if GroebnerBasis::new(base, rank, &span).contains(&kept[i]) {
                kept.remove(i);
            }
        }
    }
    kept
}

/// Generators of `{ c in A^s : phi * c in span(target_rels) + I * A^t }`,
/// reduced modulo `I * A^s` and pruned.
pub fn preimage(ring: &Ring, phi: &Matrix, target_rels: &[FreeElement]) -> Vec<FreeElement> {
    preimage_graded(ring, phi, target_rels, None)
}

/// [`preimage`] with generator degrees of the source, used to order and
/// minimize the result when everything is homogeneous.
pub fn preimage_graded(
    ring: &Ring,
    phi: &Matrix,
    target_rels: &[FreeElement],
    source_degrees: Option<&[i64]>,
) -> Vec<FreeElement> {
    let base = ring.base();
    let s = phi.ncols();
    let t = phi.nrows();
    if s == 0 {
        return Vec::new();
    }
    let mut gens: Vec<FreeElement> = phi.columns().to_vec();
    gens.extend(target_rels.iter().cloned());
    gens.extend(ring.modulus_columns(t));
    let syz = syzygies(base, t, &gens);
    let projected: Vec<FreeElement> = syz.iter().map(|v| v.slice(0, s)).collect();
    minimize_generators(base, s, &projected, &ring.modulus_columns(s), source_degrees)
}

/// `ker(F)` for a matrix `F : R^s -> R^t` over `ring`, as a subquotient of `R^s`.
pub fn kernel_of_map(ring: &Ring, f: &Matrix) -> Subquotient {
    let gens = preimage(ring, f, &[]);
    Subquotient::new(FPModule::free(ring, f.ncols()), gens)
}

/// `(0 :_M J)` as a submodule of `M`.
pub fn colon_annihilator(m: &FPModule, j: &Ideal) -> Subquotient {
    let base = m.base();
    let r = m.rank();
    let t = j.generators().len();
    if t == 0 {
        let gens = (0..r).map(|i| FreeElement::unit(base, r, i)).collect();
        return Subquotient::new(m.clone(), gens);
    }
    let cols: Vec<FreeElement> = (0..r)
        .map(|c| {
            let mut v = FreeElement::zero(base, r * t);
            for (l, g) in j.generators().iter().enumerate() {
                v.comps_mut()[l * r + c] = g.clone();
            }
            v
        })
        .collect();
    let phi = Matrix::from_cols_unchecked(base, r * t, cols);
    let mut rels = Vec::new();
    for l in 0..t {
        rels.extend(m.relations().iter().map(|x| x.embed(r * t, l * r)));
    }
    let gens = preimage(m.ring(), &phi, &rels);
    Subquotient::new(m.clone(), gens)
}

/// `M ⊗ N`.
pub fn tensor_modules(m: &FPModule, n: &FPModule) -> Result<FPModule, AlgebraError> {
    m.tensor(n)
}

/// The submodule of `ambient` spanned by `gens`, with its own presentation
/// on those generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: FPModule,
    gens: Vec<FreeElement>,
    presentation: FPModule,
}

impl Subquotient {
    pub fn new(ambient: FPModule, gens: Vec<FreeElement>) -> Subquotient {
        let base = ambient.base().clone();
        let ring = ambient.ring().clone();
        let gens = minimize_generators(&base, ambient.rank(), &gens, &ambient.relation_span(), ambient.degrees());
        let g = gens.len();
        let phi = Matrix::from_cols_unchecked(&base, ambient.rank(), gens.clone());
        let rels = preimage(&ring, &phi, ambient.relations());
        let degrees = ambient.degrees().and_then(|d| {
            gens.iter().map(|v| v.homogeneous_degree(d)).collect::<Option<Vec<i64>>>()
        });
        let mut presentation = FPModule::new(&ring, g, rels).expect("shapes agree");
        if let Some(d) = degrees {
            presentation = presentation.with_degrees(d).unwrap_or_else(|e| {
                debug_assert!(false, "{e}");
                FPModule::new(&ring, g, Vec::new()).unwrap()
            });
        }
        Subquotient {
            ambient,
            gens,
            presentation,
        }
    }

    pub fn ambient(&self) -> &FPModule {
        &self.ambient
    }

    pub fn generators(&self) -> &[FreeElement] {
        &self.gens
    }

    pub fn module(&self) -> &FPModule {
        &self.presentation
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty() || self.presentation.is_zero()
    }

    pub fn k_dimension(&self) -> Option<usize> {
        self.presentation.k_dimension()
    }

    /// A generator (in ambient coordinates) whose class is nonzero.
    pub fn witness(&self) -> Option<&FreeElement> {
        self.presentation.nonzero_generator().map(|i| &self.gens[i])
    }

    /// Equality as submodules of the ambient module.
    pub fn same_submodule(&self, other: &Subquotient) -> bool {
        same_submodule(&self.ambient, &self.gens, &other.gens)
    }

    pub fn contains(&self, v: &FreeElement) -> bool {
        let mut span = self.gens.clone();
        span.extend(self.ambient.relation_span());
        GroebnerBasis::new(self.ambient.base(), self.ambient.rank(), &span).contains(v)
    }

    /// The inclusion into the ambient module as a witnessed map.
    pub fn inclusion(&self) -> ModuleMap {
        let m = Matrix::from_cols_unchecked(self.ambient.base(), self.ambient.rank(), self.gens.clone());
        ModuleMap::new(self.presentation.clone(), self.ambient.clone(), m).expect("inclusion is well defined")
    }
}

/// `span(a) = span(b)` inside `ambient`.
pub fn same_submodule(ambient: &FPModule, a: &[FreeElement], b: &[FreeElement]) -> bool {
    let base = ambient.base();
    let r = ambient.rank();
    let with = |g: &[FreeElement]| {
        let mut s = g.to_vec();
        s.extend(ambient.relation_span());
        GroebnerBasis::new(base, r, &s)
    };
    let ga = with(a);
    let gb = with(b);
    b.iter().all(|v| ga.contains(v)) && a.iter().all(|v| gb.contains(v))
}

/// A homomorphism of presented modules given on generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FPModule,
    target: FPModule,
    matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: FPModule, target: FPModule, matrix: Matrix) -> Result<ModuleMap, AlgebraError> {
        if matrix.ncols() != source.rank() || matrix.nrows() != target.rank() {
            return Err(AlgebraError::RankMismatch {
                expected: source.rank(),
                found: matrix.ncols(),
            });
        }
        if !source.ring().maps_onto(target.ring()) {
            return Err(AlgebraError::RingMismatch);
        }
        let gb = target.submodule_basis();
        for (c, r) in source.relations().iter().enumerate() {
            if !gb.contains(&matrix.apply(r)) {
                return Err(AlgebraError::IllDefinedMap { column: c });
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &FreeElement) -> FreeElement {
        self.matrix.apply(v)
    }

    pub fn kernel(&self) -> Subquotient {
        let gens = preimage(self.target.ring(), &self.matrix, self.target.relations());
        Subquotient::new(self.source.clone(), gens)
    }

    /// A source element that maps to zero but is nonzero in the source.
    pub fn kernel_witness(&self) -> Option<FreeElement> {
        let gens = preimage(self.target.ring(), &self.matrix, self.target.relations());
        let gb = self.source.submodule_basis();
        gens.into_iter().find(|g| !gb.contains(g)).map(|g| gb.reduce(&g))
    }

    /// A target generator not reached by the image.
    pub fn cokernel_witness(&self) -> Option<FreeElement> {
        let mut span = self.matrix.columns().to_vec();
        span.extend(self.target.relation_span());
        let gb = GroebnerBasis::new(self.target.base(), self.target.rank(), &span);
        (0..self.target.rank())
            .map(|i| FreeElement::unit(self.target.base(), self.target.rank(), i))
            .find(|e| !gb.contains(e))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_witness().is_none()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_witness().is_none()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    pub fn is_zero(&self) -> bool {
        let gb = self.target.submodule_basis();
        self.matrix.columns().iter().all(|c| gb.contains(c))
    }

    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap, AlgebraError> {
        ModuleMap::new(first.source.clone(), self.target.clone(), self.matrix.compose(&first.matrix))
    }
}

/// Result of minimizing a presentation over a graded or local ring.
#[derive(Clone, Debug)]
pub struct MinimalPresentation {
    pub module: FPModule,
    /// Indices of the original generators that survive.
    pub kept: Vec<usize>,
    pub is_free: bool,
    pub route: MinimalityRoute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimalityRoute {
    /// Homogeneous presentation over a positively graded ring with `K` in degree zero.
    Graded,
    /// Ring with nilpotent maximal ideal `(x_1..x_n)`.
    Local,
}

impl MinimalPresentation {
    /// The comparison map from the minimal presentation to the original one.
    pub fn comparison(&self, original: &FPModule) -> ModuleMap {
        let base = original.base();
        let cols = self
            .kept
            .iter()
            .map(|&i| FreeElement::unit(base, original.rank(), i))
            .collect();
        let m = Matrix::from_cols_unchecked(base, original.rank(), cols);
        ModuleMap::new(self.module.clone(), original.clone(), m).expect("generator inclusion")
    }
}

/// Eliminates unit entries (Nakayama). Errors with a reason when the ring and
/// presentation are neither graded nor local.
pub fn minimal_presentation(m: &FPModule) -> Result<MinimalPresentation, String> {
    let ring = m.ring().clone();
    let base = m.base().clone();
    let route = if m.is_graded() {
        MinimalityRoute::Graded
    } else if ring.is_local_artinian() {
        MinimalityRoute::Local
    } else {
        return Err(format!(
            "presentation over {ring} is neither homogeneous nor over a local artinian ring"
        ));
    };
    let degrees = m.infer_degrees();
    let mut rows: Vec<usize> = (0..m.rank()).collect();
    let mut cols: Vec<Vec<Polynomial>> = m
        .relations()
        .iter()
        .map(|r| r.comps().iter().map(|c| ring.reduce(c)).collect())
        .collect();
    loop {
        let mut pivot = None;
        'search: for (c, col) in cols.iter().enumerate() {
            for (j, e) in col.iter().enumerate() {
                if e.is_zero() || e.constant_term().is_zero() {
                    continue;
                }
                let inv = match route {
                    MinimalityRoute::Graded if e.is_constant() => ring.inverse(e),
                    MinimalityRoute::Graded => None,
                    MinimalityRoute::Local => ring.inverse(e),
                };
                if let Some(inv) = inv {
                    pivot = Some((c, j, inv));
                    break 'search;
                }
            }
        }
        let Some((c, j, inv)) = pivot else { break };
        let pcol = cols.remove(c);
        for col in cols.iter_mut() {
            let f = col[j].mul(&inv);
            if f.is_zero() {
                continue;
            }
            for (l, e) in col.iter_mut().enumerate() {
                *e = ring.reduce(&e.sub(&pcol[l].mul(&f)));
            }
        }
        for col in cols.iter_mut() {
            col.remove(j);
        }
        rows.remove(j);
    }
    let rank = rows.len();
    let rels: Vec<FreeElement> = cols
        .into_iter()
        .map(|c| FreeElement::from_parts(&base, c))
        .filter(|v| !v.is_zero())
        .collect();
    let kept_degrees = degrees.map(|d| rows.iter().map(|&i| d[i]).collect::<Vec<i64>>());
    let rels = minimize_generators(&base, rank, &rels, &ring.modulus_columns(rank), kept_degrees.as_deref());
    let mut module = FPModule::new(&ring, rank, rels).expect("shape");
    if let Some(d) = kept_degrees {
        if let Ok(g) = module.clone().with_degrees(d) {
            module = g;
        }
    }
    let is_free = module.relations().is_empty();
    Ok(MinimalPresentation {
        module,
        kept: rows,
        is_free,
        route,
    })
}

/// Flatness of a finitely presented module, decided through freeness of a
/// minimal presentation. `Err` carries the reason it is undetermined.
pub fn is_flat(m: &FPModule) -> Result<bool, String> {
    minimal_presentation(m).map(|p| p.is_free)
}

/// Convenience: the polynomial-ring handle for `base`.
pub fn polynomial_ring(base: &Arc<PolyRing>) -> Ring {
    QuotientRing::polynomial(base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Arc<PolyRing>, Ring) {
        let b = PolyRing::rational(&["x", "y"]);
        let r = QuotientRing::polynomial(&b);
        (b, r)
    }

    fn cyc(r: &Ring, gens: &[&str]) -> FPModule {
        let b = r.base();
        FPModule::cyclic(r, &Ideal::new(b, gens.iter().map(|s| b.parse(s).unwrap()).collect()).unwrap())
    }

    #[test]
    fn kernel_examples() {
        let (b, r) = setup();
        let row = Matrix::from_rows(&b, 2, vec![vec![b.var(0), b.var(1)]]).unwrap();
        let k = kernel_of_map(&r, &row);
        assert_eq!(k.generators().len(), 1);
        let g = &k.generators()[0];
        assert!(row.apply(g).is_zero());
        assert!(kernel_of_map(&r, &Matrix::identity(&b, 3)).is_zero());

        // multiplication by x on Q[x]/(x^2): kernel (x)
        let bx = PolyRing::rational(&["x"]);
        let a = Ideal::maximal(&bx);
        let a1 = QuotientRing::polynomial(&bx).level(&a, 1);
        let mx = Matrix::scalar(&bx, 1, &bx.var(0));
        let k = kernel_of_map(&a1, &mx);
        assert_eq!(k.generators().len(), 1);
        assert_eq!(k.generators()[0].comp(0), &bx.var(0));
        assert_eq!(k.k_dimension(), Some(1));
    }

    #[test]
    fn colon_examples() {
        let (b, r) = setup();
        let m = cyc(&r, &["x^2", "x*y"]);
        let ann = colon_annihilator(&m, &Ideal::maximal(&b));
        assert_eq!(ann.k_dimension(), Some(1));
        assert!(ann.contains(&FreeElement::from_parts(&b, vec![b.var(0)])));
        let free = FPModule::free(&r, 1);
        assert!(colon_annihilator(&free, &Ideal::new(&b, vec![b.var(0)]).unwrap()).is_zero());
        assert!(colon_annihilator(&cyc(&r, &["x"]), &Ideal::maximal(&b)).is_zero());
    }

    #[test]
    fn tensor_examples() {
        let (b, r) = setup();
        let t = cyc(&r, &["x"]).tensor(&cyc(&r, &["y"])).unwrap();
        let target = cyc(&r, &["x", "y"]);
        let id = ModuleMap::new(t, target, Matrix::identity(&b, 1)).unwrap();
        assert!(id.is_isomorphism());
        let a0 = r.level(&Ideal::maximal(&b), 0);
        let q = cyc(&r, &["x"]).over(&a0).unwrap();
        assert_eq!(q.k_dimension(), Some(1));
        let free3 = FPModule::free(&r, 3).over(&a0).unwrap();
        assert_eq!(free3.k_dimension(), Some(3));
    }

    #[test]
    fn minimal_presentation_examples() {
        let bx = PolyRing::rational(&["x"]);
        let a = Ideal::maximal(&bx);
        let a1 = QuotientRing::polynomial(&bx).level(&a, 1);
        // A_1^2 with a redundant third generator e_3 = e_1 + x e_2
        let rel = FreeElement::from_parts(&bx, vec![bx.one(), bx.var(0), bx.from_i64(-1)]);
        let m = FPModule::new(&a1, 3, vec![rel]).unwrap();
        let mp = minimal_presentation(&m).unwrap();
        assert!(mp.is_free);
        assert_eq!(mp.module.rank(), 2);
        assert!(mp.comparison(&m).is_isomorphism());

        let m = FPModule::new(&a1, 1, vec![FreeElement::from_parts(&bx, vec![bx.var(0)])]).unwrap();
        let mp = minimal_presentation(&m).unwrap();
        assert!(!mp.is_free);
        assert_eq!(mp.module.relations().len(), 1);

        let m = FPModule::from_matrix(&a1, &Matrix::identity(&bx, 2)).unwrap();
        let mp = minimal_presentation(&m).unwrap();
        assert_eq!(mp.module.rank(), 0);

        // non-homogeneous over a non-local ring: undetermined
        let r = QuotientRing::polynomial(&bx);
        let m = FPModule::new(&r, 1, vec![FreeElement::from_parts(&bx, vec![bx.parse("x - 1").unwrap()])]).unwrap();
        assert!(minimal_presentation(&m).is_err());
    }

    #[test]
    fn degree_inference() {
        let (b, r) = setup();
        let rel = FreeElement::from_parts(&b, vec![b.var(0), b.parse("y^2").unwrap()]);
        let m = FPModule::new(&r, 2, vec![rel]).unwrap();
        assert_eq!(m.infer_degrees(), Some(vec![1, 0]));
        let bad = FreeElement::from_parts(&b, vec![b.parse("x + y^2").unwrap()]);
        assert_eq!(FPModule::new(&r, 1, vec![bad]).unwrap().infer_degrees(), None);
    }
}
