//! Vertex colorings: minimal-coloring propagation, the boundary pipeline,
//! Kempe greedy coloring and exact chromatic oracles.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{self, HostComplex};
use crate::error::{Error, Result};
use crate::graph::{dual_graph, edge, Edge, Simplex, SimplicialGraph, VertexId};
use crate::refine::{GreedyOptions, Move, Outcome, RefinementSession, Schedule};
use crate::topology;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringStatus {
    Proper,
    /// An edge whose endpoints share a color.
    Improper(Edge),
    /// A closed walk of cells in the dual graph along which the forced
    /// colors disagree. The first and last cells coincide.
    PropagationConflict(Vec<Simplex>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub assignment: BTreeMap<VertexId, u32>,
    pub colors_used: usize,
    pub status: ColoringStatus,
}

#[derive(Serialize)]
struct ColoringFile<'a> {
    colors: &'a BTreeMap<VertexId, u32>,
}

impl Coloring {
    /// Wrap an assignment, checking it edge by edge against `g`.
    pub fn checked(g: &SimplicialGraph, assignment: BTreeMap<VertexId, u32>) -> Coloring {
        let colors_used = assignment.values().collect::<BTreeSet<_>>().len();
        let status = match first_conflict(g, &assignment) {
            Some(e) => ColoringStatus::Improper(e),
            None => ColoringStatus::Proper,
        };
        Coloring { assignment, colors_used, status }
    }

    pub fn is_proper(&self) -> bool {
        self.status == ColoringStatus::Proper
    }

    /// `{"colors":{"<vertex>":<color>,...}}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ColoringFile { colors: &self.assignment }).expect("plain map")
    }
}

/// First edge of `g` that is uncolored or monochromatic.
pub fn first_conflict(g: &SimplicialGraph, assignment: &BTreeMap<VertexId, u32>) -> Option<Edge> {
    g.edges().into_iter().find(|(a, b)| match (assignment.get(a), assignment.get(b)) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    })
}

fn check_geometric(g: &SimplicialGraph, d: usize) -> Result<()> {
    if g.dimension() != d as i32 {
        return Err(Error::Precondition(format!("expected dimension {d}, found {}", g.dimension())));
    }
    let ok = match d {
        2 => g.vertices().all(|v| {
            let s = g.unit_sphere(v).expect("vertex");
            topology::is_circular(&s) || topology::is_path_graph(&s) || (s.vertex_count() == 2 && s.edge_count() == 1)
        }),
        3 => topology::geometric3_boundary_fast(g).is_some(),
        _ => return Err(Error::DimensionLimit(d as i32)),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("graph is not {d}-dimensional geometric")))
    }
}

/// Propagate a coloring with `d + 1` colors across the dual graph.
///
/// The first cell of each dual component gets colors `0..=d` in vertex
/// order. Crossing a shared face forces the color of the one new vertex.
/// A disagreement yields a conflict carrying the closed dual walk through
/// the two cells that disagree.
pub fn propagate_minimal(g: &SimplicialGraph, d: usize) -> Result<Coloring> {
    check_geometric(g, d)?;
    let dual = dual_graph(g);
    let n = dual.cells.len();
    let mut assignment: BTreeMap<VertexId, u32> = BTreeMap::new();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let forced = |assignment: &BTreeMap<VertexId, u32>, i: usize, j: usize| {
        let face = dual.shared_face(i as VertexId, j as VertexId);
        let used: BTreeSet<u32> = face.iter().map(|v| assignment[v]).collect();
        let color = (0..=d as u32).find(|c| !used.contains(c)).expect("d + 1 colors");
        let new = dual.cells[j].iter().copied().find(|v| !face.contains(v)).expect("one new vertex");
        (new, color)
    };
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let taken: BTreeSet<u32> = dual.cells[root].iter().filter_map(|v| assignment.get(v).copied()).collect();
        let mut free = (0..=d as u32).filter(|c| !taken.contains(c));
        for &v in &dual.cells[root] {
            assignment.entry(v).or_insert_with(|| free.next().unwrap_or(0));
        }
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for &j in dual.graph.neighbors(i as VertexId).expect("dual vertex") {
                let j = j as usize;
                if seen[j] {
                    continue;
                }
                seen[j] = true;
                parent[j] = Some(i);
                let (new, color) = forced(&assignment, i, j);
                assignment.entry(new).or_insert(color);
                queue.push_back(j);
            }
        }
    }
    for (i, j) in dual.graph.edges() {
        let (i, j) = (i as usize, j as usize);
        for (x, y) in [(i, j), (j, i)] {
            let (new, color) = forced(&assignment, x, y);
            if assignment[&new] != color {
                let walk = holonomy_walk(&parent, x, y).into_iter().map(|k| dual.cells[k].clone()).collect();
                return Ok(conflict(assignment, walk));
            }
        }
    }
    for v in g.vertices() {
        assignment.entry(v).or_insert(0);
    }
    Ok(Coloring::checked(g, assignment))
}

fn conflict(assignment: BTreeMap<VertexId, u32>, walk: Vec<Simplex>) -> Coloring {
    let colors_used = assignment.values().collect::<BTreeSet<_>>().len();
    Coloring { assignment, colors_used, status: ColoringStatus::PropagationConflict(walk) }
}

/// Tree path from the common ancestor of `i` and `j` down to `i`, the step
/// to `j`, and the tree path from `j` back up to that ancestor.
fn holonomy_walk(parent: &[Option<usize>], i: usize, j: usize) -> Vec<usize> {
    let up = |mut k: usize| {
        let mut path = vec![k];
        while let Some(p) = parent[k] {
            path.push(p);
            k = p;
        }
        path
    };
    let pi = up(i);
    let pj = up(j);
    let on_j: BTreeSet<usize> = pj.iter().copied().collect();
    let meet = pi.iter().position(|k| on_j.contains(k)).expect("same tree");
    let top = pi[meet];
    let mut walk: Vec<usize> = pi[..=meet].iter().rev().copied().collect();
    walk.extend(pj.iter().take_while(|&&k| k != top));
    walk.push(top);
    walk
}

/// How to build the host whose boundary is the graph to color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Cone,
    Prism,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Driver {
    Greedy(GreedyOptions),
    Anneal(Schedule),
    Script(Vec<Move>),
}

/// Result of the boundary pipeline. `coloring` is the propagated coloring
/// restricted to the original graph, present only when refinement solved
/// the host.
#[derive(Clone, Debug)]
pub struct BoundaryRun {
    pub outcome: Outcome,
    pub session: RefinementSession,
    pub coloring: Option<Coloring>,
}

pub fn build_host(g: &SimplicialGraph, strategy: Strategy) -> Result<HostComplex> {
    match strategy {
        Strategy::Cone => {
            let sphere = match g.dimension() {
                1 => topology::is_circular(g),
                2 => topology::is_s2_fast(g),
                _ => false,
            };
            if !sphere {
                return Err(Error::Precondition("the cone strategy needs a sphere".into()));
            }
            constructions::cone(g)
        }
        Strategy::Prism => constructions::self_cobordism(g),
    }
}

/// Color `g` by refining a host it bounds until the host's interior is
/// even, then propagating a minimal coloring through the host.
pub fn color_boundary_via_host(g: &SimplicialGraph, strategy: Strategy, driver: &Driver) -> Result<BoundaryRun> {
    let host = build_host(g, strategy)?;
    let mut session = RefinementSession::new(host)?;
    let outcome = match driver {
        Driver::Greedy(opts) => session.greedy_reduce(*opts),
        Driver::Anneal(schedule) => session.anneal(*schedule),
        Driver::Script(moves) => session.apply_script(moves)?,
    };
    if outcome != Outcome::Solved {
        return Ok(BoundaryRun { outcome, session, coloring: None });
    }
    let full = propagate_minimal(session.graph(), session.dim())?;
    let coloring = match full.status {
        ColoringStatus::PropagationConflict(_) => full,
        _ => {
            let restricted: BTreeMap<VertexId, u32> = g.vertices().map(|v| (v, full.assignment[&v])).collect();
            Coloring::checked(g, restricted)
        }
    };
    Ok(BoundaryRun { outcome, session, coloring: Some(coloring) })
}

/// Greedy coloring in reverse degeneracy order with one Kempe-chain switch
/// per blocked vertex. `None` when some vertex stays blocked. The seed
/// breaks ties between vertices of equal minimum degree.
pub fn kempe_greedy(g: &SimplicialGraph, colors: u32, seed: u64) -> Option<Coloring> {
    assert!(colors >= 1, "at least one color");
    let mut rank: Vec<VertexId> = g.vertices().collect();
    rank.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let tie: BTreeMap<VertexId, usize> = rank.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut remaining = g.clone();
    let mut order = Vec::with_capacity(g.vertex_count());
    while !remaining.is_empty() {
        let v = remaining
            .vertices()
            .min_by_key(|&v| (remaining.degree(v).expect("vertex"), tie[&v]))
            .expect("nonempty");
        remaining.remove_vertex(v);
        order.push(v);
    }
    let mut assignment: BTreeMap<VertexId, u32> = BTreeMap::new();
    for &v in order.iter().rev() {
        let nb = g.neighbors(v).expect("vertex");
        let used: BTreeSet<u32> = nb.iter().filter_map(|w| assignment.get(w).copied()).collect();
        if let Some(c) = (0..colors).find(|c| !used.contains(c)) {
            assignment.insert(v, c);
            continue;
        }
        let freed = kempe_switch(g, &mut assignment, v, colors)?;
        assignment.insert(v, freed);
    }
    Some(Coloring::checked(g, assignment))
}

/// Try color pairs `(i, j)` in lexicographic order. Swap `i` and `j` on the
/// Kempe components through the `i`-colored neighbours of `v` when none of
/// them reaches a `j`-colored neighbour; color `i` is then free at `v`.
fn kempe_switch(g: &SimplicialGraph, assignment: &mut BTreeMap<VertexId, u32>, v: VertexId, colors: u32) -> Option<u32> {
    let nb = g.neighbors(v).expect("vertex");
    for i in 0..colors {
        for j in 0..colors {
            if i == j {
                continue;
            }
            let starts: Vec<VertexId> = nb.iter().copied().filter(|w| assignment.get(w) == Some(&i)).collect();
            let blockers: BTreeSet<VertexId> = nb.iter().copied().filter(|w| assignment.get(w) == Some(&j)).collect();
            let mut chain = BTreeSet::new();
            let mut stack = starts.clone();
            chain.extend(starts);
            while let Some(x) = stack.pop() {
                for &y in g.neighbors(x).expect("vertex") {
                    if matches!(assignment.get(&y), Some(&c) if c == i || c == j) && chain.insert(y) {
                        stack.push(y);
                    }
                }
            }
            if chain.is_disjoint(&blockers) {
                for x in chain {
                    let c = assignment[&x];
                    assignment.insert(x, if c == i { j } else { i });
                }
                return Some(i);
            }
        }
    }
    None
}

const NODE_BUDGET: u64 = 200_000_000;

struct Bitgraph {
    ids: Vec<VertexId>,
    adj: Vec<u64>,
}

impl Bitgraph {
    fn new(g: &SimplicialGraph, limit: usize) -> Result<Bitgraph> {
        let ids: Vec<VertexId> = g.vertices().collect();
        if ids.len() > limit {
            return Err(Error::Budget(format!("{} vertices, limit {limit}", ids.len())));
        }
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![0u64; ids.len()];
        for (a, b) in g.edges() {
            adj[index[&a]] |= 1 << index[&b];
            adj[index[&b]] |= 1 << index[&a];
        }
        Ok(Bitgraph { ids, adj })
    }
}

/// Depth-first search for a `k`-coloring, most saturated vertex first.
/// New colors are only opened in increasing order.
struct Search<'a> {
    g: &'a Bitgraph,
    k: u32,
    color: Vec<Option<u32>>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, opened: u32) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(Error::Budget("coloring search exceeded its node budget".into()));
        }
        let n = self.g.adj.len();
        let mut best: Option<(u32, u32, usize)> = None;
        for v in 0..n {
            if self.color[v].is_some() {
                continue;
            }
            let mut seen = 0u64;
            let mut m = self.g.adj[v];
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                if let Some(c) = self.color[w] {
                    seen |= 1 << c;
                }
            }
            let key = (seen.count_ones(), self.g.adj[v].count_ones(), v);
            if best.is_none_or(|b| (key.0, key.1) > (b.0, b.1)) {
                best = Some(key);
            }
        }
        let Some((_, _, v)) = best else {
            return Ok(true);
        };
        let mut blocked = 0u64;
        let mut m = self.g.adj[v];
        while m != 0 {
            let w = m.trailing_zeros() as usize;
            m &= m - 1;
            if let Some(c) = self.color[w] {
                blocked |= 1 << c;
            }
        }
        for c in 0..self.k.min(opened + 1) {
            if blocked & (1 << c) != 0 {
                continue;
            }
            self.color[v] = Some(c);
            if self.run(opened.max(c + 1))? {
                return Ok(true);
            }
        }
        self.color[v] = None;
        Ok(false)
    }
}

fn max_clique(g: &SimplicialGraph) -> Vec<VertexId> {
    let d = g.dimension();
    if d < 0 {
        return Vec::new();
    }
    g.simplices(d as usize)[0].clone()
}

/// Exact k-colorability, with the vertices of a largest clique precolored.
pub fn is_colorable(g: &SimplicialGraph, k: u32) -> Result<bool> {
    let bg = Bitgraph::new(g, 64)?;
    colorable(g, &bg, k).map(|c| c.is_some())
}

fn colorable(g: &SimplicialGraph, bg: &Bitgraph, k: u32) -> Result<Option<BTreeMap<VertexId, u32>>> {
    let clique = max_clique(g);
    if clique.len() > k as usize {
        return Ok(None);
    }
    let mut color = vec![None; bg.ids.len()];
    for (c, v) in clique.iter().enumerate() {
        let i = bg.ids.iter().position(|x| x == v).expect("vertex");
        color[i] = Some(c as u32);
    }
    let mut search = Search { g: bg, k, color, nodes: 0 };
    if search.run(clique.len() as u32)? {
        Ok(Some(bg.ids.iter().zip(&search.color).map(|(&v, c)| (v, c.expect("complete"))).collect()))
    } else {
        Ok(None)
    }
}

/// Chromatic number by exact search, for at most 64 vertices.
pub fn chromatic_number(g: &SimplicialGraph) -> Result<u32> {
    Ok(optimal_coloring(g)?.colors_used as u32)
}

/// A coloring with the fewest colors, for at most 64 vertices.
pub fn optimal_coloring(g: &SimplicialGraph) -> Result<Coloring> {
    let bg = Bitgraph::new(g, 64)?;
    let mut k = max_clique(g).len() as u32;
    loop {
        if let Some(a) = colorable(g, &bg, k)? {
            return Ok(Coloring::checked(g, a));
        }
        k += 1;
    }
}

/// Polynomial with integer coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial(pub Vec<BigInt>);

impl Polynomial {
    pub fn from_i64(coeffs: &[i64]) -> Polynomial {
        let mut p = Polynomial(coeffs.iter().map(|&c| BigInt::from(c)).collect());
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = Polynomial(out);
        p.trim();
        p
    }

    /// Space-separated coefficients, constant term first.
    pub fn coefficients_text(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() && !(first && i == 0) {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

const MEMO_LIMIT: usize = 4_000_000;

/// Counts partitions of the vertex set into independent classes, by number
/// of classes. Vertices are processed in breadth-first order; a state keeps
/// only, for each open class, which later vertices it excludes, so classes
/// far behind the frontier merge into a plain count.
struct PartitionCounter<'a> {
    adj: &'a [u64],
    order: Vec<usize>,
    memo: HashMap<(usize, usize, Vec<u64>), Vec<u128>>,
}

impl PartitionCounter<'_> {
    fn future(&self, i: usize) -> u64 {
        self.order[i..].iter().fold(0, |m, &v| m | 1 << v)
    }

    /// `out[t]` counts completions from step `i` that open `t` new classes.
    fn count(&mut self, i: usize, free: usize, blocked: Vec<u64>) -> Result<Vec<u128>> {
        let n = self.order.len();
        if i == n {
            return Ok(vec![1]);
        }
        let key = (i, free, blocked);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        if self.memo.len() >= MEMO_LIMIT {
            return Err(Error::Budget("chromatic polynomial state space too large".into()));
        }
        let (_, free, blocked) = key.clone();
        let v = self.order[i];
        let ahead = self.future(i + 1);
        let reach = self.adj[v] & ahead;
        let settle = |mut classes: Vec<u64>, mut free: usize| {
            classes.retain(|m| {
                let keep = *m != 0;
                if !keep {
                    free += 1;
                }
                keep
            });
            classes.sort_unstable();
            (free, classes)
        };
        let restricted: Vec<u64> = blocked.iter().map(|m| m & ahead).collect();
        let mut out = vec![0u128; n - i + 1];
        let add = |out: &mut Vec<u128>, sub: Vec<u128>, shift: usize, mult: u128| {
            for (t, c) in sub.into_iter().enumerate() {
                out[t + shift] += c * mult;
            }
        };
        // New class.
        let mut classes = restricted.clone();
        classes.push(reach);
        let (f, c) = settle(classes, free);
        let sub = self.count(i + 1, f, c)?;
        add(&mut out, sub, 1, 1);
        // A class that excludes no later vertex.
        if free > 0 {
            let mut classes = restricted.clone();
            classes.push(reach);
            let (f, c) = settle(classes, free - 1);
            let sub = self.count(i + 1, f, c)?;
            add(&mut out, sub, 0, free as u128);
        }
        // A class still excluding some later vertex, but not `v`.
        let mut k = 0;
        while k < blocked.len() {
            let mut j = k;
            while j < blocked.len() && blocked[j] == blocked[k] {
                j += 1;
            }
            if blocked[k] & (1 << v) == 0 {
                let mut classes = restricted.clone();
                classes[k] |= reach;
                let (f, c) = settle(classes, free);
                let sub = self.count(i + 1, f, c)?;
                add(&mut out, sub, 0, (j - k) as u128);
            }
            k = j;
        }
        while out.len() > 1 && out.last() == Some(&0) {
            out.pop();
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

/// Number of partitions of the vertices into `j` nonempty independent
/// sets, for `j = 0..=n`.
pub fn independent_partitions(g: &SimplicialGraph) -> Result<Vec<BigInt>> {
    let bg = Bitgraph::new(g, 64)?;
    let n = bg.ids.len();
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    for s in 0..n {
        if placed & 1 << s != 0 {
            continue;
        }
        placed |= 1 << s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let mut m = bg.adj[x] & !placed;
            while m != 0 {
                let y = m.trailing_zeros() as usize;
                m &= m - 1;
                placed |= 1 << y;
                queue.push_back(y);
            }
        }
    }
    let mut counter = PartitionCounter { adj: &bg.adj, order, memo: HashMap::new() };
    let mut counts: Vec<BigInt> = counter.count(0, 0, Vec::new())?.into_iter().map(BigInt::from).collect();
    counts.resize(n + 1, BigInt::zero());
    Ok(counts)
}

/// Exact chromatic polynomial, for at most 24 vertices, written in the
/// falling-factorial basis `Σ_j a_j x(x-1)...(x-j+1)` from the partition
/// counts `a_j` and expanded.
pub fn chromatic_polynomial(g: &SimplicialGraph) -> Result<Polynomial> {
    if g.vertex_count() > 24 {
        return Err(Error::Budget(format!("{} vertices, limit 24", g.vertex_count())));
    }
    let counts = independent_partitions(g)?;
    let mut result = Polynomial(vec![BigInt::zero()]);
    let mut falling = Polynomial(vec![BigInt::one()]);
    for (j, a) in counts.iter().enumerate() {
        let len = result.0.len().max(falling.0.len());
        result.0.resize(len, BigInt::zero());
        for (r, f) in result.0.iter_mut().zip(&falling.0) {
            *r += f * a;
        }
        falling = falling.mul(&Polynomial(vec![BigInt::from(-(j as i64)), BigInt::one()]));
    }
    result.trim();
    Ok(result)
}

pub fn is_eulerian(g: &SimplicialGraph) -> bool {
    g.vertices().all(|v| g.degree(v).expect("vertex").is_multiple_of(2))
}

/// Three-coloring of an Eulerian two-sphere by propagation.
pub fn eulerian_three_color(g: &SimplicialGraph) -> Result<Coloring> {
    if !topology::is_s2_fast(g) {
        return Err(Error::Precondition("expected a two-sphere".into()));
    }
    if !is_eulerian(g) {
        return Err(Error::Precondition("some vertex has odd degree".into()));
    }
    propagate_minimal(g, 2)
}

/// The graph `{f = c}`: one vertex per edge of `g` whose colors straddle
/// `c`, numbered in edge order, joined when the edges share a triangle.
pub fn level_curve(g: &SimplicialGraph, f: &Coloring, c: f64) -> Result<SimplicialGraph> {
    if !f.is_proper() {
        return Err(Error::Precondition("level curves need a proper coloring".into()));
    }
    let values: BTreeSet<u32> = f.assignment.values().copied().collect();
    if values.iter().any(|&v| v as f64 == c) {
        return Err(Error::InvalidArgument(format!("threshold {c} equals a color value")));
    }
    let below = values.iter().any(|&v| (v as f64) < c);
    let above = values.iter().any(|&v| (v as f64) > c);
    if !below || !above {
        return Err(Error::InvalidArgument(format!("threshold {c} does not separate two colors")));
    }
    let side = |v: &VertexId| (f.assignment[v] as f64) > c;
    let crossing: Vec<Edge> = g.edges().into_iter().filter(|(a, b)| side(a) != side(b)).collect();
    let index: BTreeMap<Edge, VertexId> = crossing.iter().enumerate().map(|(i, &e)| (e, i as VertexId)).collect();
    let mut h = SimplicialGraph::new();
    for i in 0..crossing.len() {
        h.add_vertex(i as VertexId);
    }
    for t in g.simplices(2) {
        let inside: Vec<VertexId> =
            [edge(t[0], t[1]), edge(t[0], t[2]), edge(t[1], t[2])].iter().filter_map(|e| index.get(e).copied()).collect();
        if let [x, y] = inside[..] {
            h.add_edge(x, y);
        }
    }
    Ok(h)
}

/// Proper coloring of a one-dimensional variety with at most three colors,
/// and with two exactly when the graph has no odd cycle.
///
/// Bipartite inputs get a two-coloring. Otherwise singular vertices get
/// color 0, the paths between them alternate 1 and 2, and a cycle without
/// singular vertices of odd length takes one vertex of color 0.
pub fn variety_three_color(g: &SimplicialGraph) -> Result<Coloring> {
    if !topology::is_variety(g, 1) {
        return Err(Error::Precondition("expected a one-dimensional variety".into()));
    }
    if let Some(two) = two_coloring(g) {
        return Ok(Coloring::checked(g, two));
    }
    let singular: BTreeSet<VertexId> = g.vertices().filter(|&v| g.degree(v).expect("vertex") > 2).collect();
    let mut assignment: BTreeMap<VertexId, u32> = singular.iter().map(|&v| (v, 0)).collect();
    let rest: BTreeSet<VertexId> = g.vertex_set().difference(&singular).copied().collect();
    let pieces = g.induced(&rest);
    for comp in pieces.components() {
        let touches = comp.iter().any(|v| g.neighbors(*v).expect("vertex").iter().any(|w| singular.contains(w)));
        let is_cycle = !touches && comp.iter().all(|v| pieces.degree(*v) == Ok(2));
        let start = if is_cycle {
            *comp.first().expect("nonempty")
        } else {
            *comp.iter().find(|v| pieces.degree(**v).expect("vertex") <= 1).expect("path end")
        };
        let mut walk = vec![start];
        let mut prev = None;
        let mut cur = start;
        loop {
            let next = pieces.neighbors(cur).expect("vertex").iter().copied().find(|&w| Some(w) != prev && w != start);
            match next {
                Some(w) if !walk.contains(&w) => {
                    walk.push(w);
                    prev = Some(cur);
                    cur = w;
                }
                _ => break,
            }
        }
        let odd_cycle = is_cycle && walk.len() % 2 == 1;
        for (i, v) in walk.iter().enumerate() {
            let c = if odd_cycle && i == 0 { 0 } else if (i + usize::from(odd_cycle)) % 2 == 0 { 1 } else { 2 };
            assignment.insert(*v, c);
        }
    }
    Ok(Coloring::checked(g, assignment))
}

/// Two-coloring by breadth-first search, if the graph is bipartite.
pub fn two_coloring(g: &SimplicialGraph) -> Option<BTreeMap<VertexId, u32>> {
    let mut color: BTreeMap<VertexId, u32> = BTreeMap::new();
    for s in g.vertices() {
        if color.contains_key(&s) {
            continue;
        }
        color.insert(s, 0);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let cx = color[&x];
            for &y in g.neighbors(x).expect("vertex") {
                match color.get(&y) {
                    Some(&cy) if cy == cx => return None,
                    Some(_) => {}
                    None => {
                        color.insert(y, 1 - cx);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    Some(color)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{capped_cube, cross_polytope, cycle, flat_torus, icosahedron, octahedron};

    fn brute_count(g: &SimplicialGraph, k: u32) -> u64 {
        let vs: Vec<VertexId> = g.vertices().collect();
        fn go(g: &SimplicialGraph, vs: &[VertexId], i: usize, k: u32, a: &mut BTreeMap<VertexId, u32>) -> u64 {
            if i == vs.len() {
                return 1;
            }
            let mut total = 0;
            for c in 0..k {
                if g.neighbors(vs[i]).unwrap().iter().all(|w| a.get(w) != Some(&c)) {
                    a.insert(vs[i], c);
                    total += go(g, vs, i + 1, k, a);
                    a.remove(&vs[i]);
                }
            }
            total
        }
        go(g, &vs, 0, k, &mut BTreeMap::new())
    }

    #[test]
    fn propagation_on_spheres() {
        let c = propagate_minimal(&octahedron(), 2).unwrap();
        assert!(c.is_proper());
        assert_eq!(c.colors_used, 3);
        let c = propagate_minimal(&cross_polytope(4).unwrap(), 3).unwrap();
        assert!(c.is_proper());
        assert_eq!(c.colors_used, 4);
        let c = propagate_minimal(&icosahedron(), 2).unwrap();
        assert!(matches!(c.status, ColoringStatus::PropagationConflict(_)));
    }

    #[test]
    fn odd_torus_has_holonomy() {
        let c = propagate_minimal(&flat_torus(5, 5).unwrap(), 2).unwrap();
        let ColoringStatus::PropagationConflict(walk) = c.status else { panic!("expected conflict") };
        assert!(walk.len() >= 3);
        assert_eq!(walk.first(), walk.last());
        for w in walk.windows(2) {
            let shared = w[0].iter().filter(|v| w[1].contains(v)).count();
            assert_eq!(shared, 2);
        }
        assert!(propagate_minimal(&flat_torus(6, 6).unwrap(), 2).unwrap().is_proper());
    }

    #[test]
    fn propagation_rejects_wrong_dimension() {
        assert!(propagate_minimal(&octahedron(), 3).is_err());
        assert!(propagate_minimal(&crate::constructions::projective_plane_glued(), 3).is_err());
    }

    #[test]
    fn polynomial_small_cases() {
        let tri = SimplicialGraph::from_edges([(0, 1), (1, 2), (0, 2)]);
        assert_eq!(chromatic_polynomial(&tri).unwrap(), Polynomial::from_i64(&[0, 2, -3, 1]));
        let c4 = cycle(4).unwrap();
        assert_eq!(chromatic_polynomial(&c4).unwrap(), Polynomial::from_i64(&[0, -3, 6, -4, 1]));
        assert_eq!(chromatic_polynomial(&SimplicialGraph::new()).unwrap(), Polynomial::from_i64(&[1]));
        for k in 0..5 {
            let p = chromatic_polynomial(&octahedron()).unwrap();
            assert_eq!(p.eval(k), BigInt::from(brute_count(&octahedron(), k as u32)));
        }
    }

    #[test]
    fn polynomial_display() {
        let p = Polynomial::from_i64(&[0, -3, 6, -4, 1]);
        assert_eq!(p.to_string(), "x^4 - 4x^3 + 6x^2 - 3x");
        assert_eq!(p.coefficients_text(), "0 -3 6 -4 1");
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(chromatic_number(&octahedron()).unwrap(), 3);
        assert_eq!(chromatic_number(&icosahedron()).unwrap(), 4);
        assert_eq!(chromatic_number(&cycle(5).unwrap()).unwrap(), 3);
        assert_eq!(chromatic_number(&SimplicialGraph::new()).unwrap(), 0);
    }

    #[test]
    fn kempe() {
        let c = kempe_greedy(&icosahedron(), 4, 0).unwrap();
        assert!(c.is_proper());
        let k5 = SimplicialGraph::from_edges((0..5u32).flat_map(|i| (i + 1..5).map(move |j| (i, j))));
        assert!(kempe_greedy(&k5, 4, 0).is_none());
        assert!(kempe_greedy(&k5, 5, 3).unwrap().is_proper());
    }

    #[test]
    fn eulerian() {
        assert!(is_eulerian(&octahedron()));
        assert!(!is_eulerian(&icosahedron()));
        let c = eulerian_three_color(&capped_cube()).unwrap();
        assert!(c.is_proper());
        assert_eq!(c.colors_used, 3);
        assert!(eulerian_three_color(&icosahedron()).is_err());
    }

    #[test]
    fn level_curves_are_cycles() {
        let g = octahedron();
        let f = propagate_minimal(&g, 2).unwrap();
        let h = level_curve(&g, &f, 0.5).unwrap();
        for comp in h.components() {
            assert!(topology::is_circular(&h.induced(&comp)));
        }
        assert!(level_curve(&g, &f, 1.0).is_err());
        assert!(level_curve(&g, &f, 7.5).is_err());
    }

    #[test]
    fn varieties() {
        let fig8 = SimplicialGraph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)]);
        assert_eq!(variety_three_color(&fig8).unwrap().colors_used, 2);
        let c5 = variety_three_color(&cycle(5).unwrap()).unwrap();
        assert!(c5.is_proper());
        assert_eq!(c5.colors_used, 3);
        let star = SimplicialGraph::from_edges([(0, 1), (0, 2), (0, 3)]);
        assert_eq!(variety_three_color(&star).unwrap().colors_used, 2);
        let lollipops = SimplicialGraph::from_edges([(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 0), (0, 6)]);
        if topology::is_variety(&lollipops, 1) {
            assert!(variety_three_color(&lollipops).unwrap().is_proper());
        }
    }

    #[test]
    fn json_shape() {
        let c = propagate_minimal(&octahedron(), 2).unwrap();
        assert_eq!(c.to_json(), r#"{"colors":{"0":0,"1":1,"2":2,"3":0,"4":1,"5":2}}"#);
    }

    #[test]
    fn cycle_analogue() {
        for n in 4..10u32 {
            let g = cycle(n).unwrap();
            let driver = Driver::Greedy(GreedyOptions { budget: 4, lookahead: 2 });
            let run = color_boundary_via_host(&g, Strategy::Cone, &driver).unwrap();
            assert_eq!(run.outcome, Outcome::Solved);
            assert!(run.session.cut_count() <= 2);
            let c = run.coloring.unwrap();
            assert!(c.is_proper());
            assert_eq!(c.colors_used, if n % 2 == 0 { 2 } else { 3 });
        }
    }
}
