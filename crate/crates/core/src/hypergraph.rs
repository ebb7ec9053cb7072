//! Hypergraphs, independence covers and colorings.
//!
//! Vertices are labelled `0..n`. Edges are stored as sorted vertex lists and
//! inserted with symmetric-difference semantics, so adding an edge twice
//! removes it again (the generalized CZ gate squares to the identity).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default vertex limit for [`exact_chromatic_number`].
pub const DEFAULT_EXACT_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphRepr", into = "HypergraphRepr")]
pub struct Hypergraph {
    n: usize,
    edges: BTreeSet<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphRepr {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<HypergraphRepr> for Hypergraph {
    type Error = Error;

    fn try_from(repr: HypergraphRepr) -> Result<Self> {
        Hypergraph::from_edges(repr.n, repr.edges)
    }
}

impl From<Hypergraph> for HypergraphRepr {
    fn from(h: Hypergraph) -> Self {
        HypergraphRepr {
            n: h.n,
            edges: h.edges.into_iter().collect(),
        }
    }
}

impl Hypergraph {
    /// Hypergraph on `n` vertices with no edges.
    pub fn new(n: usize) -> Self {
        Hypergraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = usize>,
    {
        let mut h = Hypergraph::new(n);
        for e in edges {
            h.toggle_edge(e)?;
        }
        Ok(h)
    }

    /// Inserts `edge`, or removes it if already present.
    ///
    /// Returns `true` when the edge is present afterwards.
    pub fn toggle_edge(&mut self, edge: impl IntoIterator<Item = usize>) -> Result<bool> {
        let edge = self.normalize_edge(edge)?;
        if self.edges.remove(&edge) {
            Ok(false)
        } else {
            self.edges.insert(edge);
            Ok(true)
        }
    }

    fn normalize_edge(&self, edge: impl IntoIterator<Item = usize>) -> Result<Vec<usize>> {
        let raw: Vec<usize> = edge.into_iter().collect();
        let set: BTreeSet<usize> = raw.iter().copied().collect();
        if let Some(&v) = set.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        if set.len() < 2 || set.len() != raw.len() {
            return Err(Error::EdgeTooSmall { size: set.len() });
        }
        Ok(set.into_iter().collect())
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order, each sorted ascending.
    pub fn edges(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.edges.iter().map(Vec::as_slice)
    }

    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn edges_containing(&self, v: usize) -> impl Iterator<Item = &[usize]> + '_ {
        self.edges().filter(move |e| e.binary_search(&v).is_ok())
    }

    /// Vertices sharing at least one edge with `v`.
    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges_containing(v)
            .flat_map(|e| e.iter().copied())
            .filter(|&u| u != v)
            .collect()
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_two_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 2)
    }

    /// Adjacency relation of the primal (2-section) graph.
    pub fn primal_graph(&self) -> PrimalGraph {
        let mut adj = vec![BTreeSet::new(); self.n];
        for e in &self.edges {
            for (a, &u) in e.iter().enumerate() {
                for &w in &e[a + 1..] {
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
            }
        }
        PrimalGraph {
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// 0/1 adjacency matrix, only defined when every edge has two vertices.
    pub fn adjacency_matrix(&self) -> Option<Vec<Vec<u8>>> {
        if !self.is_two_uniform() {
            return None;
        }
        let mut m = vec![vec![0u8; self.n]; self.n];
        for e in &self.edges {
            m[e[0]][e[1]] = 1;
            m[e[1]][e[0]] = 1;
        }
        Some(m)
    }

    /// Parses the edge-list text format: the first line holds `n`, each
    /// following non-blank line lists the vertices of one hyperedge.
    /// Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (first, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing vertex count".into(),
        })?;
        let n: usize = header.parse().map_err(|_| Error::Parse {
            line: first,
            message: format!("invalid vertex count {header:?}"),
        })?;

        let mut h = Hypergraph::new(n);
        for (line, body) in lines {
            let mut edge = Vec::new();
            for tok in body.split_whitespace() {
                let v: usize = tok.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("malformed vertex index {tok:?}"),
                })?;
                edge.push(v);
            }
            h.toggle_edge(edge).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(h)
    }

    /// Inverse of [`Hypergraph::parse`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypergraph::parse(s)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Symmetric adjacency lists of the primal graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalGraph {
    adj: Vec<Vec<usize>>,
}

impl PrimalGraph {
    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Color classes `A_1..A_m` with optional weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndependenceCover {
    pub classes: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl IndependenceCover {
    pub fn new(classes: Vec<Vec<usize>>) -> Self {
        let classes = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        IndependenceCover {
            classes,
            weights: None,
        }
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, l: usize) -> Option<&[usize]> {
        self.classes.get(l).map(Vec::as_slice)
    }

    /// Index of the first class containing `v`.
    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&v))
    }

    pub fn is_partition(&self, n: usize) -> bool {
        let total: usize = self.classes.iter().map(Vec::len).sum();
        let union: BTreeSet<usize> = self.classes.iter().flatten().copied().collect();
        total == n && union.len() == n
    }

    pub fn stats(&self) -> ColorStats {
        ColorStats {
            m: self.classes.len(),
            gamma: None,
            class_sizes: self.classes.iter().map(Vec::len).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorStats {
    pub m: usize,
    /// Chromatic number, present only when computed exactly.
    pub gamma: Option<usize>,
    pub class_sizes: Vec<usize>,
}

/// Why a cover failed validation.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CoverViolation {
    #[error("class {class} is empty")]
    EmptyClass { class: usize },
    #[error("class {class} contains vertex {vertex} outside the hypergraph")]
    VertexOutOfRange { class: usize, vertex: usize },
    #[error("vertex {vertex} is not covered by any class")]
    Uncovered { vertex: usize },
    #[error("hyperedge {edge:?} contains two vertices of class {class}")]
    Improper { edge: Vec<usize>, class: usize },
    #[error("weights: {0}")]
    Weights(String),
}

/// Checks union coverage, properness and weight normalization.
pub fn validate_cover(h: &Hypergraph, cover: &IndependenceCover) -> std::result::Result<(), CoverViolation> {
    let n = h.num_vertices();
    let mut covered = vec![false; n];
    for (l, class) in cover.classes.iter().enumerate() {
        if class.is_empty() {
            return Err(CoverViolation::EmptyClass { class: l });
        }
        for &v in class {
            if v >= n {
                return Err(CoverViolation::VertexOutOfRange { class: l, vertex: v });
            }
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(CoverViolation::Uncovered { vertex: v });
    }
    for e in h.edges() {
        for (l, class) in cover.classes.iter().enumerate() {
            let hits = e.iter().filter(|v| class.binary_search(v).is_ok()).count();
            if hits >= 2 {
                return Err(CoverViolation::Improper {
                    edge: e.to_vec(),
                    class: l,
                });
            }
        }
    }
    if let Some(w) = &cover.weights {
        if w.len() != cover.classes.len() {
            return Err(CoverViolation::Weights(format!(
                "{} weights for {} classes",
                w.len(),
                cover.classes.len()
            )));
        }
        if w.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return Err(CoverViolation::Weights("negative or non-finite weight".into()));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(CoverViolation::Weights(format!("weights sum to {sum}")));
        }
    }
    Ok(())
}

/// First-fit coloring of the primal graph, visiting vertices in `order`.
pub fn greedy_coloring(h: &Hypergraph, order: &[usize]) -> Result<IndependenceCover> {
    let n = h.num_vertices();
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::param(format!("vertex {v} repeated in coloring order")));
        }
    }
    if order.len() != n {
        return Err(Error::param("coloring order must be a permutation of the vertices"));
    }

    let g = h.primal_graph();
    let mut color = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in order {
        let used: BTreeSet<usize> = g
            .neighbors(v)
            .iter()
            .map(|&u| color[u])
            .filter(|&c| c != usize::MAX)
            .collect();
        let c = (0..).find(|c| !used.contains(c)).expect("unbounded range");
        color[v] = c;
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(v);
    }
    Ok(IndependenceCover::new(classes))
}

/// Greedy coloring in natural vertex order.
pub fn greedy_cover(h: &Hypergraph) -> IndependenceCover {
    let order: Vec<usize> = (0..h.num_vertices()).collect();
    greedy_coloring(h, &order).expect("natural order is a permutation")
}

/// Optimal coloring by backtracking, trying the smallest color count first.
pub fn exact_coloring(h: &Hypergraph, vertex_limit: usize) -> Result<IndependenceCover> {
    let n = h.num_vertices();
    if n > vertex_limit {
        return Err(Error::TooLarge {
            what: "hypergraph for exact coloring",
            size: n,
            limit: vertex_limit,
        });
    }
    if n == 0 {
        return Ok(IndependenceCover::new(Vec::new()));
    }
    let g = h.primal_graph();

    // Highest degree first shrinks the search tree.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    let lower = if g.num_edges() > 0 { 2 } else { 1 };
    let upper = greedy_cover(h).num_classes();
    for k in lower..upper {
        let mut color = vec![usize::MAX; n];
        if color_rec(&g, &order, 0, k, 0, &mut color) {
            let mut classes = vec![Vec::new(); k];
            for v in 0..n {
                classes[color[v]].push(v);
            }
            classes.retain(|c| !c.is_empty());
            return Ok(IndependenceCover::new(classes));
        }
    }
    Ok(greedy_cover(h))
}

fn color_rec(
    g: &PrimalGraph,
    order: &[usize],
    pos: usize,
    k: usize,
    used: usize,
    color: &mut [usize],
) -> bool {
    let Some(&v) = order.get(pos) else {
        return true;
    };
    // A fresh color is interchangeable with any other fresh one.
    for c in 0..k.min(used + 1) {
        if g.neighbors(v).iter().all(|&u| color[u] != c) {
            color[v] = c;
            if color_rec(g, order, pos + 1, k, used.max(c + 1), color) {
                return true;
            }
            color[v] = usize::MAX;
        }
    }
    false
}

pub fn exact_chromatic_number(h: &Hypergraph, vertex_limit: usize) -> Result<ColorStats> {
    let cover = exact_coloring(h, vertex_limit)?;
    let mut stats = cover.stats();
    stats.gamma = Some(cover.num_classes());
    Ok(stats)
}

/// Union Jack lattice with `cells` cells per side.
///
/// Corners `(r, c)` for `r, c in 0..=L` come first (row-major), followed by
/// the `L*L` cell centers. Each cell carries four order-3 hyperedges: an
/// adjacent corner pair plus the center. The cover is a checkerboard on the
/// corners (even parity, odd parity) plus a class holding all centers.
pub fn union_jack(cells: usize) -> Result<(Hypergraph, IndependenceCover)> {
    if cells == 0 {
        return Err(Error::param("Union Jack lattice needs at least one cell"));
    }
    let side = cells + 1;
    let corner = |r: usize, c: usize| r * side + c;
    let center = |r: usize, c: usize| side * side + r * cells + c;
    let n = side * side + cells * cells;

    let mut h = Hypergraph::new(n);
    for r in 0..cells {
        for c in 0..cells {
            let ring = [
                corner(r, c),
                corner(r, c + 1),
                corner(r + 1, c + 1),
                corner(r + 1, c),
            ];
            for t in 0..4 {
                h.toggle_edge([ring[t], ring[(t + 1) % 4], center(r, c)])?;
            }
        }
    }

    let mut even = Vec::new();
    let mut odd = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if (r + c) % 2 == 0 {
                even.push(corner(r, c));
            } else {
                odd.push(corner(r, c));
            }
        }
    }
    let centers: Vec<usize> = (side * side..n).collect();
    Ok((h, IndependenceCover::new(vec![even, odd, centers])))
}
