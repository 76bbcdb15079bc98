//! Finite simple graphs viewed as clique complexes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
/// An edge with `a < b`.
pub type Edge = (VertexId, VertexId);
/// A clique as a strictly ascending vertex tuple.
pub type Simplex = Vec<VertexId>;

/// Order an unordered pair.
pub fn edge(a: VertexId, b: VertexId) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Simplex counts `(v_0, v_1, ...)`, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }

    /// Top dimension, `-1` for the empty graph.
    pub fn dim(&self) -> i32 {
        self.0.len() as i32 - 1
    }
}

#[derive(Clone, Default)]
pub struct SimplicialGraph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    cliques: OnceLock<Arc<Vec<Vec<Simplex>>>>,
}

impl PartialEq for SimplicialGraph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for SimplicialGraph {}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialGraph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edges())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<VertexId>,
    edges: Vec<[VertexId; 2]>,
}

impl SimplicialGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut g = Self::new();
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Self {
        let mut g = Self::from_edges(edges);
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    fn touch(&mut self) {
        self.cliques = OnceLock::new();
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        if let std::collections::btree_map::Entry::Vacant(e) = self.adj.entry(v) {
            e.insert(BTreeSet::new());
            self.touch();
        }
    }

    /// Insert an edge. Self-loops are ignored.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) {
        if a == b {
            self.add_vertex(a);
            return;
        }
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        self.touch();
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        let removed = self.adj.get_mut(&a).is_some_and(|s| s.remove(&b));
        if removed {
            self.adj.get_mut(&b).expect("symmetric adjacency").remove(&a);
            self.touch();
        }
        removed
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> bool {
        let Some(nbrs) = self.adj.remove(&v) else {
            return false;
        };
        for n in nbrs {
            self.adj.get_mut(&n).expect("symmetric adjacency").remove(&v);
        }
        self.touch();
        true
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.adj.keys().copied().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn neighbors(&self, v: VertexId) -> Result<&BTreeSet<VertexId>> {
        self.adj.get(&v).ok_or(Error::UnknownVertex(v))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.neighbors(v).map(BTreeSet::len)
    }

    /// Edges in lexicographic order, each with `a < b`.
    pub fn edges(&self) -> Vec<Edge> {
        self.adj
            .iter()
            .flat_map(|(&a, nb)| nb.range(a + 1..).map(move |&b| (a, b)))
            .collect()
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.adj.keys().next_back().copied()
    }

    /// Id for the next fresh vertex: one past the largest id in use.
    pub fn next_id(&self) -> VertexId {
        self.max_id().map_or(0, |m| m + 1)
    }

    fn clique_table(&self) -> &Arc<Vec<Vec<Simplex>>> {
        self.cliques.get_or_init(|| Arc::new(enumerate_cliques(&self.adj)))
    }

    /// All `(k+1)`-cliques as ascending tuples, lexicographically sorted.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.clique_table().get(k).map_or(&[], Vec::as_slice)
    }

    /// Clique lists for every dimension that has at least one simplex.
    pub fn simplex_table(&self) -> &[Vec<Simplex>] {
        self.clique_table().as_slice()
    }

    /// Dimension of the largest clique, `-1` for the empty graph.
    pub fn dimension(&self) -> i32 {
        self.simplex_table().len() as i32 - 1
    }

    pub fn f_vector(&self) -> FVector {
        FVector(self.simplex_table().iter().map(Vec::len).collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler()
    }

    pub fn induced(&self, vs: &BTreeSet<VertexId>) -> SimplicialGraph {
        let mut adj = BTreeMap::new();
        for &v in vs {
            if let Some(nb) = self.adj.get(&v) {
                adj.insert(v, nb.intersection(vs).copied().collect());
            }
        }
        SimplicialGraph { adj, cliques: OnceLock::new() }
    }

    /// The subgraph induced on the neighbors of `x`.
    pub fn unit_sphere(&self, x: VertexId) -> Result<SimplicialGraph> {
        Ok(self.induced(self.neighbors(x)?))
    }

    /// The link `S(a) ∩ S(b)` of an edge.
    pub fn edge_link(&self, a: VertexId, b: VertexId) -> Result<SimplicialGraph> {
        if !self.adjacent(a, b) {
            return Err(Error::UnknownEdge(a.min(b), a.max(b)));
        }
        let common: BTreeSet<_> = self.adj[&a].intersection(&self.adj[&b]).copied().collect();
        Ok(self.induced(&common))
    }

    pub fn without_vertex(&self, x: VertexId) -> SimplicialGraph {
        let mut g = self.clone();
        g.remove_vertex(x);
        g
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let comp: BTreeSet<_> = self.distances_from([v]).into_keys().collect();
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Breadth-first distances from a source set; unreachable vertices are absent.
    pub fn distances_from(&self, sources: impl IntoIterator<Item = VertexId>) -> BTreeMap<VertexId, usize> {
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        for s in sources {
            if self.contains(s) && dist.insert(s, 0).is_none() {
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            for &w in &self.adj[&u] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Rename vertices through an injective map; unmapped ids are kept.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<SimplicialGraph> {
        let f = |v: VertexId| *map.get(&v).unwrap_or(&v);
        let image: BTreeSet<_> = self.vertices().map(f).collect();
        if image.len() != self.vertex_count() {
            return Err(Error::NotBijective("relabeling merges vertices".into()));
        }
        Ok(SimplicialGraph::from_parts(
            self.vertices().map(f),
            self.edges().into_iter().map(|(a, b)| (f(a), f(b))),
        ))
    }

    /// Disjoint union, shifting the ids of `other` by `offset`.
    pub fn disjoint_union(&self, other: &SimplicialGraph, offset: VertexId) -> Result<SimplicialGraph> {
        let mut g = self.clone();
        for v in other.vertices() {
            if g.contains(v + offset) {
                return Err(Error::InvalidArgument(format!("offset {offset} makes vertex ids collide")));
            }
            g.add_vertex(v + offset);
        }
        for (a, b) in other.edges() {
            g.add_edge(a + offset, b + offset);
        }
        Ok(g)
    }

    /// Join with a new vertex adjacent to everything.
    pub fn cone(&self, apex: VertexId) -> SimplicialGraph {
        let mut g = self.clone();
        g.add_vertex(apex);
        for v in self.vertices() {
            g.add_edge(apex, v);
        }
        g
    }

    /// Canonical JSON text: ascending vertices, lexicographic edges.
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.vertices().collect(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&file).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<SimplicialGraph> {
        let file: GraphFile = serde_json::from_str(text)?;
        for [a, b] in &file.edges {
            if a == b {
                return Err(Error::Parse(format!("self-loop at vertex {a}")));
            }
        }
        Ok(SimplicialGraph::from_parts(file.vertices, file.edges.into_iter().map(|[a, b]| (a, b))))
    }
}

fn enumerate_cliques(adj: &BTreeMap<VertexId, BTreeSet<VertexId>>) -> Vec<Vec<Simplex>> {
    fn extend(
        adj: &BTreeMap<VertexId, BTreeSet<VertexId>>,
        clique: &mut Vec<VertexId>,
        cand: &[VertexId],
        out: &mut Vec<Vec<Simplex>>,
    ) {
        let k = clique.len() - 1;
        if out.len() <= k {
            out.push(Vec::new());
        }
        out[k].push(clique.clone());
        for (i, &c) in cand.iter().enumerate() {
            let nb = &adj[&c];
            let next: Vec<VertexId> = cand[i + 1..].iter().copied().filter(|w| nb.contains(w)).collect();
            clique.push(c);
            extend(adj, clique, &next, out);
            clique.pop();
        }
    }
    let mut out = Vec::new();
    for (&v, nb) in adj {
        let cand: Vec<VertexId> = nb.range(v + 1..).copied().collect();
        extend(adj, &mut vec![v], &cand, &mut out);
    }
    for level in &mut out {
        level.sort();
    }
    out
}

/// Identify the vertices of `g2` listed in `map` with their images in `g1`.
///
/// The map must be injective. The gluing subgraph is the one induced on the
/// range in `g1`; each of its edges must have an edge of `g2` as preimage.
/// Extra edges of `g2` among the domain are merged in. Vertices of `g1` keep their ids;
/// unmapped vertices of `g2` receive fresh ids above `g1`'s, in ascending
/// order of their old ids.
pub fn glue(g1: &SimplicialGraph, g2: &SimplicialGraph, map: &BTreeMap<VertexId, VertexId>) -> Result<SimplicialGraph> {
    let domain: BTreeSet<_> = map.keys().copied().collect();
    let range: BTreeSet<_> = map.values().copied().collect();
    if range.len() != domain.len() {
        return Err(Error::NotBijective("two vertices share an image".into()));
    }
    if let Some(v) = domain.iter().find(|v| !g2.contains(**v)) {
        return Err(Error::NotBijective(format!("vertex {v} is not in the second graph")));
    }
    if let Some(v) = range.iter().find(|v| !g1.contains(**v)) {
        return Err(Error::NotBijective(format!("vertex {v} is not in the first graph")));
    }
    for &a in &domain {
        for &b in &domain {
            if a < b && g1.adjacent(map[&a], map[&b]) && !g2.adjacent(a, b) {
                return Err(Error::NotBijective(format!("pair ({a}, {b}) does not match its image")));
            }
        }
    }
    let mut rename = map.clone();
    for (fresh, v) in (g1.next_id()..).zip(g2.vertices().filter(|v| !domain.contains(v))) {
        rename.insert(v, fresh);
    }
    let mut g = g1.clone();
    for v in g2.vertices() {
        g.add_vertex(rename[&v]);
    }
    for (a, b) in g2.edges() {
        g.add_edge(rename[&a], rename[&b]);
    }
    Ok(g)
}

/// Dual graph on the top-dimensional simplices.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub graph: SimplicialGraph,
    /// `cells[i]` is the simplex behind dual vertex `i`.
    pub cells: Vec<Simplex>,
}

impl DualGraph {
    /// The face shared by two adjacent cells.
    pub fn shared_face(&self, i: VertexId, j: VertexId) -> Simplex {
        let b = &self.cells[j as usize];
        self.cells[i as usize].iter().copied().filter(|v| b.contains(v)).collect()
    }
}

/// One vertex per maximal-dimension simplex, edges across shared
/// codimension-1 faces.
pub fn dual_graph(g: &SimplicialGraph) -> DualGraph {
    let d = g.dimension();
    if d < 0 {
        return DualGraph { graph: SimplicialGraph::new(), cells: Vec::new() };
    }
    let cells: Vec<Simplex> = g.simplices(d as usize).to_vec();
    let mut by_face: BTreeMap<Simplex, Vec<VertexId>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        for skip in 0..c.len() {
            let face: Simplex = c.iter().enumerate().filter(|(p, _)| *p != skip).map(|(_, &v)| v).collect();
            by_face.entry(face).or_default().push(i as VertexId);
        }
    }
    let mut dual = SimplicialGraph::new();
    for i in 0..cells.len() {
        dual.add_vertex(i as VertexId);
    }
    for holders in by_face.values() {
        for (x, &i) in holders.iter().enumerate() {
            for &j in &holders[x + 1..] {
                dual.add_edge(i, j);
            }
        }
    }
    DualGraph { graph: dual, cells }
}
