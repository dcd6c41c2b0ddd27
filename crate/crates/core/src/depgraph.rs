//! Dependency graphs, exact fractional covers and chromatic-number bounds.
//!
//! Vertices are sample indices `0..m`. An edge `(i, j)` records that the two
//! examples may be dependent; a missing edge means they are independent.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::lp::{self, Constraint, LinearProgram, LpOutcome, Relation};
use crate::Rational;

/// Largest graph handled by [`fractional_chromatic_exact`].
pub const EXACT_CHI_MAX_VERTICES: usize = 20;
/// Largest graph for which [`clique_number`] is exact.
pub const EXACT_CLIQUE_MAX_VERTICES: usize = 64;
/// Tolerance on per-vertex cover weight.
pub const COVER_TOL: f64 = 1e-9;
/// Relative tolerance for the sum-splitting identity check.
pub const SPLIT_IDENTITY_TOL: f64 = 1e-6;
const SPLIT_IDENTITY_TRIALS: usize = 10;
const SPLIT_IDENTITY_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a dependency graph needs at least one vertex")]
    Empty,
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("vertex {0} listed twice")]
    DuplicateVertex(usize),
    #[error("graph has {vertex_count} vertices; the exact computation is capped at {cap}")]
    TooLarge { vertex_count: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("exact value does not fit a 64-bit rational")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("cover is for {cover} vertices but the graph has {graph}")]
    SizeMismatch { cover: usize, graph: usize },
    #[error("element {0} is empty")]
    EmptyElement(usize),
    #[error("element {element} has weight {weight} outside (0, 1]")]
    WeightOutOfRange { element: usize, weight: Rational },
    #[error("element {element} contains vertex {vertex}, out of range")]
    VertexOutOfRange { element: usize, vertex: usize },
    #[error("element {element} contains the edge ({}, {})", edge.0, edge.1)]
    NotIndependent { element: usize, edge: (usize, usize) },
    #[error("vertex {vertex} has total weight {total}, expected 1")]
    NotExact { vertex: usize, total: f64 },
    #[error("sum splitting failed on trial {trial}: gap {gap}")]
    SplitIdentity { trial: usize, gap: f64 },
}

/// Undirected simple graph on `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    masks: Option<Vec<u64>>,
}

impl DependencyGraph {
    /// Builds a graph; duplicate edges and both orientations of an edge are
    /// merged.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();

        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(a, b) in &list {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        let masks = (vertex_count <= 64).then(|| {
            adjacency
                .iter()
                .map(|row| row.iter().fold(0u64, |acc, &v| acc | (1 << v)))
                .collect()
        });
        Ok(Self {
            vertex_count,
            edges: list,
            adjacency,
            masks,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Result<Self, GraphError> {
        Self::new(vertex_count, [])
    }

    pub fn complete(vertex_count: usize) -> Result<Self, GraphError> {
        let edges = (0..vertex_count).flat_map(|i| (i + 1..vertex_count).map(move |j| (i, j)));
        Self::new(vertex_count, edges)
    }

    pub fn cycle(vertex_count: usize) -> Result<Self, GraphError> {
        let edges = (0..vertex_count).map(|i| (i, (i + 1) % vertex_count));
        Self::new(vertex_count, edges.filter(|&(a, b)| a != b))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        match &self.masks {
            Some(m) => a < self.vertex_count && b < 64 && m[a] >> b & 1 == 1,
            None => self.adjacency.get(a).is_some_and(|r| r.binary_search(&b).is_ok()),
        }
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }

    /// First edge found inside `set`, if any.
    pub fn edge_within(&self, set: &[usize]) -> Option<(usize, usize)> {
        for (k, &a) in set.iter().enumerate() {
            for &b in &set[k + 1..] {
                if self.has_edge(a, b) {
                    return Some((a.min(b), a.max(b)));
                }
            }
        }
        None
    }

    /// Subgraph induced by `keep`; vertex `keep[k]` becomes vertex `k`.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<Self, GraphError> {
        let mut position = vec![usize::MAX; self.vertex_count];
        for (k, &v) in keep.iter().enumerate() {
            if v >= self.vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    vertex: v,
                    vertex_count: self.vertex_count,
                });
            }
            if position[v] != usize::MAX {
                return Err(GraphError::DuplicateVertex(v));
            }
            position[v] = k;
        }
        let edges = self.edges.iter().filter_map(|&(a, b)| {
            let (pa, pb) = (position[a], position[b]);
            (pa != usize::MAX && pb != usize::MAX).then_some((pa, pb))
        });
        Self::new(keep.len(), edges)
    }

    /// Parses the text format: `m <n>` followed by `e <i> <j>` lines.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut vertex_count = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| GraphError::Parse { line, message };
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let number = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("expected a nonnegative integer, found {s:?}")))
            };
            match (fields[0], vertex_count) {
                ("m", None) if fields.len() == 2 => vertex_count = Some(number(fields[1])?),
                ("m", Some(_)) => return Err(err("duplicate vertex count".into())),
                ("e", Some(_)) if fields.len() == 3 => edges.push((number(fields[1])?, number(fields[2])?)),
                ("e", None) => return Err(err("edge before the `m <n>` line".into())),
                _ => return Err(err(format!("unrecognized line {trimmed:?}"))),
            }
        }
        let n = vertex_count.ok_or(GraphError::Parse {
            line: 0,
            message: "missing `m <n>` line".into(),
        })?;
        Self::new(n, edges).map_err(|e| match e {
            GraphError::Empty => GraphError::Parse {
                line: 0,
                message: "vertex count must be positive".into(),
            },
            other => other,
        })
    }

    /// Serializes to the text format read by [`DependencyGraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("m {}\n", self.vertex_count);
        for (a, b) in &self.edges {
            let _ = writeln!(out, "e {a} {b}");
        }
        out
    }
}

/// One weighted independent set of a fractional cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverElement {
    pub vertices: Vec<usize>,
    pub weight: Rational,
}

/// Weighted family of vertex sets; validated against a graph by
/// [`validate_cover`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FractionalCover {
    graph_size: usize,
    elements: Vec<CoverElement>,
}

impl FractionalCover {
    /// Checks weights and vertex ranges; vertex lists are sorted and
    /// deduplicated. Independence and exactness are checked by
    /// [`validate_cover`].
    pub fn new(graph_size: usize, elements: Vec<CoverElement>) -> Result<Self, CoverError> {
        let mut elements = elements;
        for (j, e) in elements.iter_mut().enumerate() {
            e.vertices.sort_unstable();
            e.vertices.dedup();
            if e.vertices.is_empty() {
                return Err(CoverError::EmptyElement(j));
            }
            if let Some(&v) = e.vertices.last().filter(|&&v| v >= graph_size) {
                return Err(CoverError::VertexOutOfRange { element: j, vertex: v });
            }
            if !(e.weight.is_positive() && e.weight <= Rational::one()) {
                return Err(CoverError::WeightOutOfRange {
                    element: j,
                    weight: e.weight,
                });
            }
        }
        Ok(Self { graph_size, elements })
    }

    /// All sets with weight one.
    pub fn unit(graph_size: usize, sets: Vec<Vec<usize>>) -> Result<Self, CoverError> {
        let elements = sets
            .into_iter()
            .map(|vertices| CoverElement {
                vertices,
                weight: Rational::one(),
            })
            .collect();
        Self::new(graph_size, elements)
    }

    pub fn graph_size(&self) -> usize {
        self.graph_size
    }

    pub fn elements(&self) -> &[CoverElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Chromatic weight `Σ ω_j`.
    pub fn weight(&self) -> BigRational {
        self.elements
            .iter()
            .fold(BigRational::zero(), |acc, e| acc + big(e.weight))
    }
}

fn big(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn small(r: &BigRational) -> Result<Rational, GraphError> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational::new(n, d)),
        _ => Err(GraphError::Overflow),
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Weight summaries of a validated cover.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverStats {
    pub omega: f64,
    pub omega_exact: Rational,
    /// `ω_j / ω`
    pub alpha: Vec<f64>,
    /// `ω_j |C_j| / m`
    pub pi: Vec<f64>,
}

/// Checks that every element is independent in `graph` and that each vertex
/// carries total weight one, then computes the weight summaries.
///
/// As a final check, `Σ_i t_i = Σ_j ω_j Σ_{k ∈ C_j} t_k` is verified on a few
/// random vectors `t`.
pub fn validate_cover(graph: &DependencyGraph, cover: &FractionalCover) -> Result<CoverStats, CoverError> {
    let m = graph.vertex_count();
    if cover.graph_size != m {
        return Err(CoverError::SizeMismatch {
            cover: cover.graph_size,
            graph: m,
        });
    }
    let mut totals = vec![BigRational::zero(); m];
    for (j, e) in cover.elements.iter().enumerate() {
        if let Some(edge) = graph.edge_within(&e.vertices) {
            return Err(CoverError::NotIndependent { element: j, edge });
        }
        let w = big(e.weight);
        for &v in &e.vertices {
            totals[v] += &w;
        }
    }
    let one = BigRational::one();
    for (vertex, total) in totals.iter().enumerate() {
        let gap = to_f64(&(total - &one)).abs();
        if gap.is_nan() || gap > COVER_TOL {
            return Err(CoverError::NotExact {
                vertex,
                total: to_f64(total),
            });
        }
    }

    let omega_big = cover.weight();
    let omega_exact = small(&omega_big).map_err(|_| CoverError::NotExact {
        vertex: 0,
        total: f64::NAN,
    })?;
    let m_big = BigRational::from_integer(BigInt::from(m));
    let alpha = cover
        .elements
        .iter()
        .map(|e| to_f64(&(big(e.weight) / &omega_big)))
        .collect();
    let pi = cover
        .elements
        .iter()
        .map(|e| to_f64(&(big(e.weight) * BigInt::from(e.vertices.len()) / &m_big)))
        .collect();

    let weights: Vec<f64> = cover.elements.iter().map(|e| to_f64(&big(e.weight))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_IDENTITY_SEED);
    for trial in 0..SPLIT_IDENTITY_TRIALS {
        let t: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let direct: f64 = t.iter().sum();
        let split: f64 = cover
            .elements
            .iter()
            .zip(&weights)
            .map(|(e, w)| w * e.vertices.iter().map(|&k| t[k]).sum::<f64>())
            .sum();
        let l1: f64 = t.iter().map(|x| x.abs()).sum();
        let gap = (direct - split).abs();
        if gap > SPLIT_IDENTITY_TOL * l1.max(f64::MIN_POSITIVE) {
            return Err(CoverError::SplitIdentity { trial, gap });
        }
    }

    Ok(CoverStats {
        omega: to_f64(&omega_big),
        omega_exact,
        alpha,
        pi,
    })
}

/// Clique number, exact or a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CliqueNumber {
    pub value: usize,
    /// `false` when the graph exceeded the exact-search cap and `value` is
    /// only a greedy lower bound.
    pub exact: bool,
}

/// Largest clique size. Exact branch and bound for up to 64 vertices, a
/// greedy lower bound above that.
pub fn clique_number(graph: &DependencyGraph) -> CliqueNumber {
    match &graph.masks {
        Some(masks) => {
            let n = graph.vertex_count;
            let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let mut best = 0;
            expand_clique(masks, 0, all, &mut best);
            CliqueNumber {
                value: best,
                exact: true,
            }
        }
        None => CliqueNumber {
            value: greedy_clique(graph),
            exact: false,
        },
    }
}

fn expand_clique(adj: &[u64], size: usize, mut cand: u64, best: &mut usize) {
    let (order, bounds) = color_bounds(adj, cand);
    for k in (0..order.len()).rev() {
        if size + bounds[k] <= *best {
            return;
        }
        let v = order[k];
        let next = cand & adj[v];
        if next == 0 {
            *best = (*best).max(size + 1);
        } else {
            expand_clique(adj, size + 1, next, best);
        }
        cand &= !(1 << v);
    }
}

// Greedy sequential coloring of the candidate set; the color of a vertex
// bounds the clique reachable from it and the vertices before it.
fn color_bounds(adj: &[u64], cand: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(cand.count_ones() as usize);
    let mut bounds = Vec::with_capacity(order.capacity());
    let mut uncolored = cand;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut q = uncolored;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !(1 << v) & !adj[v];
            uncolored &= !(1 << v);
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

fn greedy_clique(graph: &DependencyGraph) -> usize {
    let mut best = 1;
    for start in 0..graph.vertex_count {
        let mut clique = vec![start];
        let mut cand: Vec<usize> = graph.neighbors(start).to_vec();
        cand.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
        for v in cand {
            if clique.iter().all(|&u| graph.has_edge(u, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Greedy coloring; entry `v` is the color of vertex `v`.
///
/// Two largest-degree-first orders are tried, a static one and the
/// saturation-driven one (DSatur, degree breaking ties), and the coloring with
/// fewer colors is returned. Both use at most `Δ + 1` colors.
pub fn greedy_coloring(graph: &DependencyGraph) -> Vec<usize> {
    let a = static_order_coloring(graph);
    let b = dsatur_coloring(graph);
    let count = |c: &[usize]| c.iter().max().map_or(0, |m| m + 1);
    if count(&b) < count(&a) {
        b
    } else {
        a
    }
}

fn smallest_free_color(graph: &DependencyGraph, color: &[usize], v: usize) -> usize {
    let mut used = vec![false; graph.degree(v) + 1];
    for &u in graph.neighbors(v) {
        if color[u] < used.len() {
            used[color[u]] = true;
        }
    }
    used.iter().position(|&b| !b).unwrap_or(used.len())
}

fn static_order_coloring(graph: &DependencyGraph) -> Vec<usize> {
    let n = graph.vertex_count;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    let mut color = vec![usize::MAX; n];
    for v in order {
        color[v] = smallest_free_color(graph, &color, v);
    }
    color
}

fn dsatur_coloring(graph: &DependencyGraph) -> Vec<usize> {
    let n = graph.vertex_count;
    let mut color = vec![usize::MAX; n];
    let mut seen: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| (seen[v].len(), graph.degree(v), std::cmp::Reverse(v)))
            .expect("an uncolored vertex remains");
        color[v] = smallest_free_color(graph, &color, v);
        for &u in graph.neighbors(v) {
            seen[u].insert(color[v]);
        }
    }
    color
}

/// Number of colors used by [`greedy_coloring`].
pub fn greedy_chromatic_upper(graph: &DependencyGraph) -> usize {
    greedy_coloring(graph).into_iter().max().map_or(0, |c| c + 1)
}

/// Maximal independent sets as bitmasks (Bron–Kerbosch with pivoting on the
/// complement graph).
fn maximal_independent_sets(graph: &DependencyGraph) -> Vec<u64> {
    let masks = graph.masks.as_ref().expect("bitmask graph");
    let n = graph.vertex_count;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let complement: Vec<u64> = (0..n).map(|v| !masks[v] & all & !(1 << v)).collect();
    let mut out = Vec::new();
    bron_kerbosch(&complement, 0, all, 0, &mut out);
    out
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let mut pool = p | x;
    let mut pivot = 0;
    let mut pivot_hits = 0;
    while pool != 0 {
        let u = pool.trailing_zeros() as usize;
        pool &= pool - 1;
        let hits = (p & adj[u]).count_ones();
        if hits >= pivot_hits {
            pivot = u;
            pivot_hits = hits;
        }
    }
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        cand &= cand - 1;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// Exact fractional chromatic number with an optimal cover as certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FractionalChromatic {
    pub chi_star: Rational,
    pub cover: FractionalCover,
}

/// Solves `min Σ x_S` subject to `Σ_{S ∋ v} x_S ≥ 1` over the maximal
/// independent sets `S`, then trims the optimal solution to an exact cover of
/// the same weight.
pub fn fractional_chromatic_exact(graph: &DependencyGraph) -> Result<FractionalChromatic, GraphError> {
    let n = graph.vertex_count;
    if n > EXACT_CHI_MAX_VERTICES {
        return Err(GraphError::TooLarge {
            vertex_count: n,
            cap: EXACT_CHI_MAX_VERTICES,
        });
    }
    let sets = maximal_independent_sets(graph);
    let constraints = (0..n)
        .map(|v| Constraint {
            coeffs: sets.iter().map(|&s| lp::int((s >> v & 1) as i64)).collect(),
            relation: Relation::Ge,
            rhs: lp::int(1),
        })
        .collect();
    let program = LinearProgram {
        objective: vec![lp::int(1); sets.len()],
        constraints,
    };
    let (value, x) = match lp::solve(&program) {
        LpOutcome::Optimal { value, x } => (value, x),
        other => unreachable!("covering program is feasible and bounded: {other:?}"),
    };

    let mut pieces: Vec<(u64, BigRational)> = sets
        .iter()
        .zip(x)
        .filter(|(_, w)| w.is_positive())
        .map(|(&s, w)| (s, w))
        .collect();
    trim_to_exact(&mut pieces, n);

    // Merge identical sets so the certificate is canonical.
    let mut merged: BTreeMap<u64, BigRational> = BTreeMap::new();
    for (s, w) in pieces {
        *merged.entry(s).or_insert_with(BigRational::zero) += w;
    }
    let elements = merged
        .into_iter()
        .map(|(s, w)| {
            Ok(CoverElement {
                vertices: (0..n).filter(|&v| s >> v & 1 == 1).collect(),
                weight: small(&w)?,
            })
        })
        .collect::<Result<Vec<_>, GraphError>>()?;
    let cover = FractionalCover::new(n, elements).expect("trimmed cover is well formed");
    debug_assert_eq!(cover.weight(), value);
    Ok(FractionalChromatic {
        chi_star: small(&value)?,
        cover,
    })
}

// Removes over-coverage vertex by vertex. A piece whose weight exceeds the
// remaining excess is split in two and only one half loses the vertex, so the
// total weight never changes.
fn trim_to_exact(pieces: &mut Vec<(u64, BigRational)>, n: usize) {
    let one = BigRational::one();
    for v in 0..n {
        let bit = 1u64 << v;
        let covered: BigRational = pieces
            .iter()
            .filter(|(s, _)| s & bit != 0)
            .map(|(_, w)| w.clone())
            .sum();
        let mut excess = covered - &one;
        let mut k = 0;
        while excess.is_positive() && k < pieces.len() {
            if pieces[k].0 & bit != 0 {
                if pieces[k].1 <= excess {
                    excess -= &pieces[k].1;
                    pieces[k].0 &= !bit;
                } else {
                    let rest = &pieces[k].1 - &excess;
                    pieces.push((pieces[k].0 & !bit, excess.clone()));
                    pieces[k].1 = rest;
                    excess = BigRational::zero();
                }
            }
            k += 1;
        }
    }
    // An emptied piece would mean the LP optimum was not minimal.
    debug_assert!(pieces.iter().all(|(s, _)| *s != 0));
    pieces.retain(|(s, _)| *s != 0);
}

/// The chain `c(Γ) ≤ χ* ≤ χ ≤ Δ + 1`, with `χ` replaced by a greedy
/// coloring count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChiEstimates {
    pub clique_lower: usize,
    pub clique_exact: bool,
    /// `None` above [`EXACT_CHI_MAX_VERTICES`].
    pub chi_star: Option<Rational>,
    pub chi_upper: usize,
    pub delta_plus_one: usize,
}

pub fn chi_estimates(graph: &DependencyGraph) -> ChiEstimates {
    let clique = clique_number(graph);
    ChiEstimates {
        clique_lower: clique.value,
        clique_exact: clique.exact,
        chi_star: fractional_chromatic_exact(graph).ok().map(|f| f.chi_star),
        chi_upper: greedy_chromatic_upper(graph),
        delta_plus_one: graph.max_degree() + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_edge() -> DependencyGraph {
        DependencyGraph::new(4, [(1, 2)]).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert_eq!(DependencyGraph::new(0, []), Err(GraphError::Empty));
        assert_eq!(DependencyGraph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            DependencyGraph::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange {
                vertex: 3,
                vertex_count: 3
            })
        );
        let g = DependencyGraph::new(3, [(2, 0), (0, 2), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 2)]);
        assert!(g.has_edge(2, 0) && !g.has_edge(0, 1));
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn iid_and_one_edge_covers() {
        let g = DependencyGraph::edgeless(5).unwrap();
        let c = FractionalCover::unit(5, vec![(0..5).collect()]).unwrap();
        let s = validate_cover(&g, &c).unwrap();
        assert_eq!(s.omega, 1.0);
        assert_eq!(s.alpha, vec![1.0]);
        assert_eq!(s.pi, vec![1.0]);

        let g = one_edge();
        let c = FractionalCover::unit(4, vec![vec![0, 1, 3], vec![2]]).unwrap();
        let s = validate_cover(&g, &c).unwrap();
        assert_eq!(s.omega_exact, Rational::from_integer(2));
        assert_eq!(s.alpha, vec![0.5, 0.5]);
        assert_eq!(s.pi, vec![0.75, 0.25]);
    }

    #[test]
    fn cover_errors_name_the_offender() {
        let g = one_edge();
        let c = FractionalCover::unit(4, vec![vec![0, 3], vec![1, 2]]).unwrap();
        assert_eq!(
            validate_cover(&g, &c),
            Err(CoverError::NotIndependent {
                element: 1,
                edge: (1, 2)
            })
        );
        let c = FractionalCover::unit(4, vec![vec![0, 1, 3], vec![2], vec![3]]).unwrap();
        assert!(matches!(
            validate_cover(&g, &c),
            Err(CoverError::NotExact { vertex: 3, .. })
        ));
        let c = FractionalCover::unit(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(validate_cover(&g, &c), Err(CoverError::SizeMismatch { .. })));
        let half = CoverElement {
            vertices: vec![0],
            weight: Rational::new(3, 2),
        };
        assert!(matches!(
            FractionalCover::new(4, vec![half]),
            Err(CoverError::WeightOutOfRange { .. })
        ));
    }

    #[test]
    fn clique_numbers() {
        assert_eq!(clique_number(&DependencyGraph::edgeless(7).unwrap()).value, 1);
        assert_eq!(clique_number(&DependencyGraph::complete(5).unwrap()).value, 5);
        assert_eq!(clique_number(&DependencyGraph::cycle(5).unwrap()).value, 2);
        let big = DependencyGraph::complete(70).unwrap();
        assert_eq!(
            clique_number(&big),
            CliqueNumber {
                value: 70,
                exact: false
            }
        );
    }

    #[test]
    fn fractional_chromatic_small_graphs() {
        let r = |n, d| Rational::new(n, d);
        let cases = [
            (DependencyGraph::edgeless(6).unwrap(), r(1, 1)),
            (one_edge(), r(2, 1)),
            (DependencyGraph::cycle(5).unwrap(), r(5, 2)),
            (DependencyGraph::cycle(7).unwrap(), r(7, 3)),
            (DependencyGraph::complete(4).unwrap(), r(4, 1)),
        ];
        for (g, expected) in cases {
            let f = fractional_chromatic_exact(&g).unwrap();
            assert_eq!(f.chi_star, expected);
            let stats = validate_cover(&g, &f.cover).unwrap();
            assert_eq!(stats.omega_exact, expected);
        }
        let too_big = DependencyGraph::edgeless(21).unwrap();
        assert!(matches!(
            fractional_chromatic_exact(&too_big),
            Err(GraphError::TooLarge { vertex_count: 21, .. })
        ));
    }

    #[test]
    fn greedy_colors() {
        assert_eq!(greedy_chromatic_upper(&DependencyGraph::edgeless(3).unwrap()), 1);
        assert_eq!(greedy_chromatic_upper(&DependencyGraph::complete(4).unwrap()), 4);
        assert_eq!(greedy_chromatic_upper(&DependencyGraph::cycle(6).unwrap()), 2);
    }

    #[test]
    fn induced_subgraphs() {
        let g = one_edge();
        let without_u = g.induced_subgraph(&[0, 2, 3]).unwrap();
        assert!(without_u.is_edgeless());
        assert_eq!(
            fractional_chromatic_exact(&without_u).unwrap().chi_star,
            Rational::from(1)
        );
        assert_eq!(g.induced_subgraph(&[0, 1, 2, 3]).unwrap(), g);
        let k3 = DependencyGraph::complete(5)
            .unwrap()
            .induced_subgraph(&[4, 0, 2])
            .unwrap();
        assert_eq!(k3, DependencyGraph::complete(3).unwrap());
        assert!(g.induced_subgraph(&[0, 4]).is_err());
        assert_eq!(g.induced_subgraph(&[1, 1]), Err(GraphError::DuplicateVertex(1)));
    }

    #[test]
    fn text_format_round_trip() {
        let g = DependencyGraph::cycle(5).unwrap();
        let text = g.to_text();
        assert!(text.starts_with("m 5\n"));
        assert_eq!(DependencyGraph::parse(&text).unwrap(), g);
        let commented = "# a comment\n\nm 3\n  e 0 2\n# more\ne 1 2\n";
        assert_eq!(DependencyGraph::parse(commented).unwrap().edges(), &[(0, 2), (1, 2)]);
        assert!(matches!(
            DependencyGraph::parse("m 3\ne 0 x\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(DependencyGraph::parse("e 0 1\n").is_err());
        assert!(DependencyGraph::parse("m 0\n").is_err());
    }
}
