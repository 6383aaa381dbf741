//! Scenes: a group acting on an affine variety, with everything derived
//! from that — reflection classification, the component graph of the
//! separating variety, separating-set verification, and size bounds for
//! separating sets.
//!
//! The separating variety is the graph of the action inside X x X. Its
//! irreducible components are H_{sigma,i} = {(x, sigma x) | x in X_i}, one
//! per (group element, component of X) pair, and the codimension of an
//! intersection H_{sigma,i} with H_{tau,j} inside the separating variety
//! equals the codimension in X of the tau^{-1}sigma-fixed part of X_i and X_j's
//! intersection. All graph weights are computed from that formula.

use crate::action::{
    coordinate_difference_ideal, is_invariant, is_invariant_torus, ActionElement, FiniteGroup,
};
use crate::enumerate::{CompiledMap, CompiledPoly, FqTable, TupleScan, RAW_TUPLE_GUARD};
use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};
use crate::groebner::{dimension, groebner_basis_in, radical_member, Dimension, GroebnerConfig};
use crate::matrix::ExactMatrix;
use crate::poly::{DoubledRing, MonomialOrder, PolyRing, Polynomial};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

/// User-asserted geometric hypotheses. Only `irreducible` changes what the
/// tool computes (it supplies the component list); the others select which
/// lower-bound route `gamma_sep_bounds` may use and are echoed in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HypothesisFlag {
    Connected,
    CohenMacaulay,
    Normal,
    Irreducible,
}

impl HypothesisFlag {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "connected" => Ok(HypothesisFlag::Connected),
            "cohen_macaulay" => Ok(HypothesisFlag::CohenMacaulay),
            "normal" => Ok(HypothesisFlag::Normal),
            "irreducible" => Ok(HypothesisFlag::Irreducible),
            other => Err(Error::Parse(format!(
                "unknown hypothesis flag {other:?} (expected connected, cohen_macaulay, normal, irreducible)"
            ))),
        }
    }
}

impl fmt::Display for HypothesisFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HypothesisFlag::Connected => "connected",
            HypothesisFlag::CohenMacaulay => "cohen_macaulay",
            HypothesisFlag::Normal => "normal",
            HypothesisFlag::Irreducible => "irreducible",
        };
        f.write_str(s)
    }
}

/// Codimension of a fixed locus; an empty fixed locus is its own outcome and
/// is never coerced to a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedCodim {
    EmptyFixedLocus,
    Codim(usize),
}

impl fmt::Display for FixedCodim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedCodim::EmptyFixedLocus => f.write_str("empty-fixed-locus"),
            FixedCodim::Codim(k) => write!(f, "{k}"),
        }
    }
}

/// A finite group acting on an affine variety, plus the invariant generators
/// and asserted hypotheses. This is the input to every separating-variety
/// computation.
#[derive(Debug, Clone)]
pub struct Scene {
    pub ring: Arc<PolyRing>,
    /// Generators of the variety ideal; empty means X is all of affine space.
    pub variety: Vec<Polynomial>,
    /// User-supplied irreducible decomposition (containment and dimensions
    /// are checked; primality is trusted).
    pub components: Option<Vec<Vec<Polynomial>>>,
    pub group: FiniteGroup,
    /// Generators of the invariant ring K[X]^G.
    pub invariants: Vec<Polynomial>,
    pub flags: BTreeSet<HypothesisFlag>,
    /// Some(n) marks a torus scene: the ring has 2n variables x_1..x_n,
    /// y_1..y_n and the variety contains the relations x_i y_i - 1.
    pub torus_rank: Option<usize>,
    pub dim_x: usize,
}

impl Scene {
    pub fn new(
        ring: Arc<PolyRing>,
        variety: Vec<Polynomial>,
        components: Option<Vec<Vec<Polynomial>>>,
        group: FiniteGroup,
        invariants: Vec<Polynomial>,
        flags: BTreeSet<HypothesisFlag>,
        torus_rank: Option<usize>,
        cfg: &GroebnerConfig,
    ) -> Result<Scene> {
        let nvars = ring.nvars();
        for e in &group.elements {
            if e.ambient_vars() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "group element acts on {} variables, scene ring has {nvars}",
                    e.ambient_vars()
                )));
            }
            match (torus_rank, e) {
                (Some(_), ActionElement::Monomial(_)) => {}
                (None, ActionElement::Linear(_)) | (None, ActionElement::Affine(..)) => {}
                _ => {
                    return Err(Error::MixedKind(format!(
                        "{} element on a {} scene",
                        e.kind_name(),
                        if torus_rank.is_some() { "torus" } else { "polynomial" }
                    )))
                }
            }
        }
        if let Some(t) = torus_rank {
            if nvars != 2 * t {
                return Err(Error::DimensionMismatch(format!(
                    "torus of rank {t} needs a 2n-variable ring, got {nvars}"
                )));
            }
        }
        let dim_x = match dimension(&ring, &variety, cfg)? {
            Dimension::Empty => {
                return Err(Error::Parse("variety ideal defines the empty set".into()))
            }
            Dimension::Dim(d) => d,
        };
        let scene = Scene {
            ring,
            variety,
            components,
            group,
            invariants,
            flags,
            torus_rank,
            dim_x,
        };
        for f in &scene.invariants {
            if !scene.check_invariant(f)? {
                return Err(Error::NotInvariant(f.to_string()));
            }
        }
        if let Some(comps) = &scene.components {
            if comps.is_empty() {
                return Err(Error::Parse("component list must not be empty".into()));
            }
            for (i, comp) in comps.iter().enumerate() {
                let gb = groebner_basis_in(&scene.ring, comp, MonomialOrder::GrevLex, cfg)?;
                for g in &scene.variety {
                    if !gb.contains(g) {
                        return Err(Error::Parse(format!(
                            "component {i} does not contain the variety ideal (fails on {g})"
                        )));
                    }
                }
                match dimension(&scene.ring, comp, cfg)? {
                    Dimension::Empty => {
                        return Err(Error::Parse(format!("component {i} is empty")))
                    }
                    Dimension::Dim(d) if d > scene.dim_x => {
                        return Err(Error::DimensionMismatch(format!(
                            "component {i} has dimension {d} > dim X = {}",
                            scene.dim_x
                        )))
                    }
                    Dimension::Dim(_) => {}
                }
            }
        }
        Ok(scene)
    }

    /// Invariance of f under the scene's group (modulo the torus relations
    /// on torus scenes).
    pub fn check_invariant(&self, f: &Polynomial) -> Result<bool> {
        match self.torus_rank {
            Some(t) => is_invariant_torus(&self.group, f, t),
            None => is_invariant(&self.group, f),
        }
    }

    /// The component ideals: the user-supplied list, or the variety itself
    /// when the scene is flagged irreducible.
    pub fn component_list(&self) -> Result<Vec<Vec<Polynomial>>> {
        if let Some(c) = &self.components {
            return Ok(c.clone());
        }
        if self.flags.contains(&HypothesisFlag::Irreducible) {
            return Ok(vec![self.variety.clone()]);
        }
        Err(Error::MissingComponents)
    }

    /// True when the scene is all of affine space acted on by matrices, so
    /// fixed loci are linear solution sets.
    fn is_plain_affine(&self) -> bool {
        self.variety.is_empty() && self.torus_rank.is_none()
    }
}

/// Codimension of the fixed locus of g in X. On affine space this is linear
/// algebra; on a variety it is dim X minus the dimension of the ideal of X
/// together with the coordinate differences act(g, x_l) - x_l.
pub fn fixed_codim(g: &ActionElement, scene: &Scene, cfg: &GroebnerConfig) -> Result<FixedCodim> {
    if scene.is_plain_affine() {
        match g {
            ActionElement::Linear(m) => {
                let a_minus_i = m.sub(&ExactMatrix::identity(m.field.clone(), m.rows))?;
                return Ok(FixedCodim::Codim(a_minus_i.rank()));
            }
            ActionElement::Affine(m, t) => {
                let a_minus_i = m.sub(&ExactMatrix::identity(m.field.clone(), m.rows))?;
                let rhs: Vec<FieldScalar> = t.iter().map(|v| m.field.neg(v)).collect();
                return match a_minus_i.solve(&rhs)? {
                    Some(_) => Ok(FixedCodim::Codim(a_minus_i.rank())),
                    None => Ok(FixedCodim::EmptyFixedLocus),
                };
            }
            _ => {}
        }
    }
    fixed_codim_via_ideal(g, scene, cfg)
}

/// The Groebner route for the fixed-locus codimension, usable on every scene
/// kind; `fixed_codim` calls it except on plain affine scenes, and cross-check
/// tests call it directly.
pub fn fixed_codim_via_ideal(
    g: &ActionElement,
    scene: &Scene,
    cfg: &GroebnerConfig,
) -> Result<FixedCodim> {
    let mut gens = scene.variety.clone();
    gens.extend(coordinate_difference_ideal(&scene.ring, g)?);
    match dimension(&scene.ring, &gens, cfg)? {
        Dimension::Empty => Ok(FixedCodim::EmptyFixedLocus),
        Dimension::Dim(d) => Ok(FixedCodim::Codim(scene.dim_x - d)),
    }
}

/// Fixed-locus codimension for every group element, in element order.
pub fn classify_reflections(scene: &Scene, cfg: &GroebnerConfig) -> Result<Vec<FixedCodim>> {
    scene
        .group
        .elements
        .iter()
        .map(|g| fixed_codim(g, scene, cfg))
        .collect()
}

/// Indices of the elements whose fixed-locus codimension is at most k.
pub fn k_reflection_indices(codims: &[FixedCodim], k: usize) -> Vec<usize> {
    codims
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c {
            FixedCodim::Codim(d) if *d <= k => Some(i),
            _ => None,
        })
        .collect()
}

/// Least k such that the k-reflections generate the group; None when even
/// the elements with nonempty fixed loci fail to generate (so elements
/// without fixed points are required).
pub fn min_reflection_k(scene: &Scene, cfg: &GroebnerConfig) -> Result<Option<usize>> {
    let codims = classify_reflections(scene, cfg)?;
    Ok(min_reflection_k_from(&scene.group, &codims))
}

pub fn min_reflection_k_from(group: &FiniteGroup, codims: &[FixedCodim]) -> Option<usize> {
    let max_k = codims
        .iter()
        .filter_map(|c| match c {
            FixedCodim::Codim(d) => Some(*d),
            _ => None,
        })
        .max()?;
    (0..=max_k).find(|&k| group.is_generated_by(&k_reflection_indices(codims, k)))
}

/// An edge weight of the component graph: the codimension in X of the
/// relevant intersection, or Empty when the intersection has no points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Empty,
    Codim(usize),
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Empty => f.write_str("empty"),
            Weight::Codim(k) => write!(f, "{k}"),
        }
    }
}

/// The component graph of the separating variety: one node per
/// (group element, component) pair, and for every node pair the codimension
/// of the components' intersection. Node (sigma, i) has id
/// sigma * num_components + i.
#[derive(Debug, Clone)]
pub struct ComponentGraph {
    pub group_order: usize,
    pub num_components: usize,
    pub dim_x: usize,
    /// All unordered node pairs (a < b) with their weight.
    pub edges: Vec<(usize, usize, Weight)>,
}

impl ComponentGraph {
    pub fn num_nodes(&self) -> usize {
        self.group_order * self.num_components
    }

    pub fn node_label(&self, id: usize) -> String {
        format!("sigma{}_X{}", id / self.num_components, id % self.num_components)
    }

    /// True iff the subgraph keeping edges of weight <= k is connected.
    pub fn connected_in_codim(&self, k: usize) -> bool {
        let n = self.num_nodes();
        let mut uf = UnionFind::new(n);
        for (a, b, w) in &self.edges {
            if let Weight::Codim(c) = w {
                if *c <= k {
                    uf.union(*a, *b);
                }
            }
        }
        uf.component_count() == 1
    }

    /// DOT rendering; nodes in id order, finite-weight edges only.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph vsep {\n");
        for id in 0..self.num_nodes() {
            out.push_str(&format!("  {};\n", self.node_label(id)));
        }
        for (a, b, w) in &self.edges {
            if let Weight::Codim(c) = w {
                out.push_str(&format!(
                    "  {} -- {} [label=\"{}\"];\n",
                    self.node_label(*a),
                    self.node_label(*b),
                    c
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn component_count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&i| self.find(i) == i).count()
    }
}

/// Builds the component graph of the separating variety. For nodes
/// (sigma, i) and (tau, j) the weight is
/// dim X - dim(I_{X_i} + I_{X_j} + I_g) with g = tau^{-1} sigma, computed by
/// the Groebner route on every scene kind. Distinct node pairs sharing the
/// same (component pair, element class) reuse one computation; g and g^{-1}
/// cut out the same fixed locus, so they share a class.
pub fn build_component_graph(scene: &Scene, cfg: &GroebnerConfig) -> Result<ComponentGraph> {
    let comps = scene.component_list()?;
    let r = comps.len();
    let order = scene.group.order();
    let num_nodes = order * r;
    let mut cache: HashMap<(usize, usize, usize), Weight> = HashMap::new();
    let mut edges = Vec::with_capacity(num_nodes * (num_nodes - 1) / 2);
    for a in 0..num_nodes {
        let (sigma, i) = (a / r, a % r);
        for b in (a + 1)..num_nodes {
            let (tau, j) = (b / r, b % r);
            let g = scene.group.mul_indices(scene.group.inv_index(tau), sigma);
            let g_class = g.min(scene.group.inv_index(g));
            let key = (i.min(j), i.max(j), g_class);
            let weight = match cache.get(&key) {
                Some(w) => *w,
                None => {
                    let mut gens = comps[i].clone();
                    gens.extend(comps[j].iter().cloned());
                    gens.extend(coordinate_difference_ideal(
                        &scene.ring,
                        scene.group.element(g),
                    )?);
                    let w = match dimension(&scene.ring, &gens, cfg)? {
                        Dimension::Empty => Weight::Empty,
                        Dimension::Dim(d) => Weight::Codim(scene.dim_x - d),
                    };
                    cache.insert(key, w);
                    w
                }
            };
            edges.push((a, b, weight));
        }
    }
    Ok(ComponentGraph { group_order: order, num_components: r, dim_x: scene.dim_x, edges })
}

/// Connectivity of X itself in codimension k: the same graph machinery with
/// the group replaced by the identity alone.
pub fn x_connected_in_codim(scene: &Scene, k: usize, cfg: &GroebnerConfig) -> Result<bool> {
    let comps = scene.component_list()?;
    let r = comps.len();
    let mut uf = UnionFind::new(r);
    for i in 0..r {
        for j in (i + 1)..r {
            let mut gens = comps[i].clone();
            gens.extend(comps[j].iter().cloned());
            match dimension(&scene.ring, &gens, cfg)? {
                Dimension::Empty => {}
                Dimension::Dim(d) => {
                    if scene.dim_x - d <= k {
                        uf.union(i, j);
                    }
                }
            }
        }
    }
    Ok(uf.component_count() == 1)
}

/// Both sides of the connectedness criterion, computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConnectednessCrosscheck {
    pub k: usize,
    /// Connectivity of the separating variety's component graph at k.
    pub vsep_connected: bool,
    /// Connectivity of X at k.
    pub x_connected: bool,
    /// Whether the k-reflections generate the group.
    pub generated_by_k_reflections: bool,
    /// vsep_connected == (x_connected && generated_by_k_reflections).
    pub agree: bool,
}

/// Checks, at level k, that the separating variety is connected in
/// codimension k exactly when X is and the group is generated by
/// k-reflections. The two sides share no computation: the left side runs on
/// graph weights, the right side on per-element fixed loci. A disagreement
/// indicates a bug and is reported, never corrected.
pub fn crosscheck_connectedness(
    scene: &Scene,
    k: usize,
    cfg: &GroebnerConfig,
) -> Result<ConnectednessCrosscheck> {
    let graph = build_component_graph(scene, cfg)?;
    let codims = classify_reflections(scene, cfg)?;
    Ok(crosscheck_connectedness_with(scene, &graph, &codims, k, cfg)?)
}

/// Same as `crosscheck_connectedness` with the graph and classification
/// precomputed, for sweeping many k against one scene.
pub fn crosscheck_connectedness_with(
    scene: &Scene,
    graph: &ComponentGraph,
    codims: &[FixedCodim],
    k: usize,
    cfg: &GroebnerConfig,
) -> Result<ConnectednessCrosscheck> {
    let vsep_connected = graph.connected_in_codim(k);
    let x_connected = x_connected_in_codim(scene, k, cfg)?;
    let generated = scene
        .group
        .is_generated_by(&k_reflection_indices(codims, k));
    Ok(ConnectednessCrosscheck {
        k,
        vsep_connected,
        x_connected,
        generated_by_k_reflections: generated,
        agree: vsep_connected == (x_connected && generated),
    })
}

/// Verdict of a separating-set verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparatingVerdict {
    Separating,
    /// Index (into the scene's invariant generators) of a generator whose
    /// delta-image is not in the radical of the candidate ideal.
    NotSeparating { generator_index: usize },
    /// A resource cap tripped; the note records where and suggests the
    /// points method.
    Inconclusive { note: String },
}

/// Decides whether the candidates separate, by radical membership in the
/// doubled ring. The candidates' delta-images lie in the separating ideal a
/// priori (they are invariants), so only one inclusion needs checking: every
/// invariant generator's delta-image must lie in the radical of
/// (delta(candidates)) + I_{X x X}. Generator images generate the separating
/// ideal, which makes this equivalent to equality of radicals.
pub fn verify_separating_groebner(
    scene: &Scene,
    candidates: &[Polynomial],
    cfg: &GroebnerConfig,
) -> Result<SeparatingVerdict> {
    if scene.invariants.is_empty() {
        return Err(Error::Parse(
            "scene lists no invariant generators to verify against".into(),
        ));
    }
    for c in candidates {
        if !scene.check_invariant(c)? {
            return Err(Error::NotInvariant(c.to_string()));
        }
    }
    let doubled = DoubledRing::new(&scene.ring);
    let mut ideal: Vec<Polynomial> = candidates.iter().map(|c| doubled.delta(c)).collect();
    ideal.extend(scene.variety.iter().map(|g| doubled.embed_x(g)));
    ideal.extend(scene.variety.iter().map(|g| doubled.embed_y(g)));
    ideal.retain(|f| !f.is_zero());
    for (idx, f) in scene.invariants.iter().enumerate() {
        let image = doubled.delta(f);
        match radical_member(&doubled.ring, &image, &ideal, cfg) {
            Ok(true) => {}
            Ok(false) => return Ok(SeparatingVerdict::NotSeparating { generator_index: idx }),
            Err(e) if e.is_resource_cap() => {
                return Ok(SeparatingVerdict::Inconclusive {
                    note: format!(
                        "resource cap while deciding invariant generator {idx}: {e}; \
                         the points method can still search for refutations"
                    ),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SeparatingVerdict::Separating)
}

/// Why a witness pair refutes: a listed invariant generator distinguishes
/// the two points, or they lie in distinct orbits (in which case some
/// invariant distinguishes them because the listed generators generate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationCertificate {
    GeneratorDisagrees { generator_index: usize },
    DistinctOrbits,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointsWitness {
    /// Extension degree over the scene field where the pair lives.
    pub power: u32,
    /// The extension field itself.
    pub field: FieldSpec,
    pub x: Vec<FieldScalar>,
    pub y: Vec<FieldScalar>,
    pub certificate: ViolationCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub power: u32,
    pub field_order: u64,
    pub variety_points: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointsVerdict {
    /// The candidates provably fail to separate: a same-signature pair in
    /// distinct orbits. Sound over any field.
    Refuted(Box<PointsWitness>),
    /// Every same-signature pair of rational points was in one orbit, over
    /// every listed extension. Evidence, not proof: points over larger
    /// extensions could still refute.
    NoViolationFound { scans: Vec<ScanSummary> },
}

pub const DEFAULT_POINT_CAP: u64 = 2_000_000;

/// Exhaustively scans the variety's rational points over the listed
/// extensions of the scene field, buckets them by candidate-value signature,
/// and requires every bucket to be a single group orbit. Points are scanned
/// in lexicographic order, so the reported witness is the first violation in
/// that order. The cap counts points found on the variety; the raw
/// tuple space is guarded separately.
pub fn verify_separating_points(
    scene: &Scene,
    candidates: &[Polynomial],
    field_powers: &[u32],
    point_cap: u64,
) -> Result<PointsVerdict> {
    for c in candidates {
        if !scene.check_invariant(c)? {
            return Err(Error::NotInvariant(c.to_string()));
        }
    }
    if field_powers.is_empty() {
        return Err(Error::Parse("no field powers listed for the point scan".into()));
    }
    let mut scans = Vec::new();
    for &m in field_powers {
        let table = FqTable::build(&scene.ring.field, m)?;
        let scan_dims = scene.torus_rank.unwrap_or(scene.ring.nvars());
        let raw = (table.q as u128).checked_pow(scan_dims as u32);
        match raw {
            Some(r) if r <= RAW_TUPLE_GUARD as u128 => {}
            _ => {
                return Err(Error::EnumerationCap(format!(
                    "raw tuple space {}^{scan_dims} exceeds the scan guard 2^26",
                    table.q
                )))
            }
        }
        let variety: Vec<CompiledPoly> = scene
            .variety
            .iter()
            .map(|f| CompiledPoly::compile(&table, f))
            .collect();
        let cands: Vec<CompiledPoly> = candidates
            .iter()
            .map(|f| CompiledPoly::compile(&table, f))
            .collect();
        let invs: Vec<CompiledPoly> = scene
            .invariants
            .iter()
            .map(|f| CompiledPoly::compile(&table, f))
            .collect();
        let maps: Vec<CompiledMap> = scene
            .group
            .elements
            .iter()
            .map(|e| CompiledMap::compile(&table, e))
            .collect::<Result<_>>()?;

        let mut buckets: HashMap<Vec<u32>, (Vec<u32>, Vec<u32>)> = HashMap::new();
        let mut seen: u64 = 0;
        let min_value = if scene.torus_rank.is_some() { 1 } else { 0 };
        let mut tuples = TupleScan::new(scan_dims, table.q, min_value);
        let mut point: Vec<u32> = Vec::new();
        let mut image: Vec<u32> = Vec::new();
        while let Some(tuple) = tuples.next() {
            point.clear();
            point.extend_from_slice(tuple);
            if let Some(t) = scene.torus_rank {
                for i in 0..t {
                    point.push(table.inv(point[i]));
                }
            }
            if !variety.iter().all(|f| f.eval(&table, &point) == 0) {
                continue;
            }
            seen += 1;
            if seen > point_cap {
                return Err(Error::EnumerationCap(format!(
                    "more than {point_cap} variety points over extension degree {m}"
                )));
            }
            let signature: Vec<u32> = cands.iter().map(|f| f.eval(&table, &point)).collect();
            // canonical orbit representative: the least image of the point
            let mut rep = point.clone();
            for map in &maps {
                map.apply(&table, &point, &mut image);
                if image < rep {
                    rep.clone_from(&image);
                }
            }
            match buckets.get(&signature) {
                None => {
                    buckets.insert(signature, (rep, point.clone()));
                }
                Some((first_rep, first_point)) => {
                    if *first_rep != rep {
                        let witness =
                            make_witness(&table, m, &invs, first_point, &point);
                        return Ok(PointsVerdict::Refuted(Box::new(witness)));
                    }
                }
            }
        }
        scans.push(ScanSummary {
            power: m,
            field_order: table.q as u64,
            variety_points: seen,
        });
    }
    Ok(PointsVerdict::NoViolationFound { scans })
}

fn make_witness(
    table: &FqTable,
    power: u32,
    invs: &[CompiledPoly],
    x: &[u32],
    y: &[u32],
) -> PointsWitness {
    let certificate = invs
        .iter()
        .position(|f| f.eval(table, x) != f.eval(table, y))
        .map(|generator_index| ViolationCertificate::GeneratorDisagrees { generator_index })
        .unwrap_or(ViolationCertificate::DistinctOrbits);
    let to_scalars =
        |p: &[u32]| p.iter().map(|&i| table.scalar(i).clone()).collect::<Vec<_>>();
    PointsWitness {
        power,
        field: table.field.clone(),
        x: to_scalars(x),
        y: to_scalars(y),
        certificate,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaBounds {
    pub lower: usize,
    pub upper: usize,
    pub notes: Vec<String>,
}

/// Bounds on the least size of a separating set. The upper bound 2*dim X + 1
/// always holds. The lower bound needs user-asserted hypotheses: with
/// {normal, connected} the bound dim X + k* - 1 applies, where k* is the
/// least k with the k-reflections generating; with {connected,
/// cohen_macaulay} the bound dim X + 1 applies unless the group is generated
/// by 1-reflections. Both routes additionally require — machine-checked —
/// that the group is generated by elements having fixed points; when that
/// fails only the trivial bound dim X remains.
pub fn gamma_sep_bounds(scene: &Scene, cfg: &GroebnerConfig) -> Result<GammaBounds> {
    let n = scene.dim_x;
    let upper = 2 * n + 1;
    let normal_route = scene.flags.contains(&HypothesisFlag::Normal)
        && scene.flags.contains(&HypothesisFlag::Connected);
    let cm_route = scene.flags.contains(&HypothesisFlag::Connected)
        && scene.flags.contains(&HypothesisFlag::CohenMacaulay);
    if !normal_route && !cm_route {
        return Err(Error::HypothesisMissing(
            "lower bounds need asserted flags {normal, connected} or {connected, cohen_macaulay}"
                .into(),
        ));
    }
    let codims = classify_reflections(scene, cfg)?;
    let fixed_point_elements: Vec<usize> = codims
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, FixedCodim::Codim(_)))
        .map(|(i, _)| i)
        .collect();
    let machine_ok = scene.group.is_generated_by(&fixed_point_elements);
    let mut notes = Vec::new();
    let lower = if !machine_ok {
        notes.push(
            "the group is not generated by elements having fixed points, so neither \
             hypothesis route applies; only the trivial bound lower = dim X remains"
                .into(),
        );
        n
    } else {
        let k = min_reflection_k_from(&scene.group, &codims)
            .expect("generated by fixed-point elements implies some k works");
        if normal_route {
            notes.push(format!(
                "normal+connected route: least k with the k-reflections generating is {k}, \
                 so any separating set has at least dim X + {k} - 1 elements"
            ));
            n + k - 1
        } else {
            if k >= 2 {
                notes.push(format!(
                    "cohen_macaulay+connected route: the group is not generated by \
                     1-reflections (least generating k is {k}), so any separating set \
                     has more than dim X elements"
                ));
                n + 1
            } else {
                notes.push(
                    "cohen_macaulay+connected route: the group is generated by \
                     1-reflections, so this route yields only lower = dim X"
                        .into(),
                );
                n
            }
        }
    };
    notes.push(format!(
        "upper bound: 2*dim X + 1 = {upper} invariants always suffice to separate"
    ));
    Ok(GammaBounds { lower, upper, notes })
}
