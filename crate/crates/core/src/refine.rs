//! Refinement of host complexes by edge cuts.
//!
//! A session owns a host of dimension 2 or 3 with a designated boundary and
//! tries to make every interior codimension-2 face even, so that the minimal
//! coloring propagates. Moves never touch the boundary.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::HostComplex;
use crate::curvature::{self, OddSet};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, SimplicialGraph, VertexId};
use crate::topology;

/// A refinement move as it appears in a move log.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Cut(VertexId, VertexId),
    Tetra16([VertexId; 4]),
    Octa([VertexId; 3]),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Cut(a, b) => write!(f, "cut {a} {b}"),
            Move::Tetra16([a, b, c, d]) => write!(f, "t16 {a} {b} {c} {d}"),
            Move::Octa([a, b, c]) => write!(f, "oct {a} {b} {c}"),
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(line: &str) -> Result<Move> {
        let mut words = line.split_whitespace();
        let kind = words.next().ok_or_else(|| Error::Parse("empty move".into()))?;
        let ids = words
            .map(|w| w.parse::<VertexId>().map_err(|_| Error::Parse(format!("bad vertex {w:?} in {line:?}"))))
            .collect::<Result<Vec<_>>>()?;
        match (kind, ids.as_slice()) {
            ("cut", &[a, b]) => Ok(Move::Cut(a, b)),
            ("t16", &[a, b, c, d]) => Ok(Move::Tetra16([a, b, c, d])),
            ("oct", &[a, b, c]) => Ok(Move::Octa([a, b, c])),
            _ => Err(Error::Parse(format!("unrecognised move {line:?}"))),
        }
    }
}

/// Parse a move log: one move per line, blank lines and `#` comments skipped.
pub fn parse_moves(text: &str) -> Result<Vec<Move>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

pub fn format_moves(moves: &[Move]) -> String {
    moves.iter().map(|m| format!("{m}\n")).collect()
}

/// One elementary cut: edge `(a, b)` split by the new vertex `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cut {
    pub a: VertexId,
    pub b: VertexId,
    pub v: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub mv: Move,
    pub cuts: Vec<Cut>,
}

impl MoveRecord {
    pub fn created(&self) -> Vec<VertexId> {
        self.cuts.iter().map(|c| c.v).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TracePoint {
    pub step: usize,
    pub phi: u64,
    pub odd: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    Stalled,
    BudgetExhausted,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Solved => "solved",
            Outcome::Stalled => "stalled",
            Outcome::BudgetExhausted => "budget-exhausted",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreedyOptions {
    /// Maximum number of elementary cuts.
    pub budget: usize,
    /// 1 tries single cuts only. 2 also tries a cut followed by a cut of an
    /// edge at the new vertex when no single cut improves.
    pub lookahead: usize,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions { budget: 1000, lookahead: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub t0: f64,
    pub cooling: f64,
    pub steps: usize,
    pub seed: u64,
    /// Weight proposals by `1 + distance to boundary`.
    pub interior_bias: bool,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { t0: 2.0, cooling: 0.995, steps: 5000, seed: 0, interior_bias: false }
    }
}

type Objective = (u64, usize);

fn raw_cut(g: &mut SimplicialGraph, a: VertexId, b: VertexId) -> VertexId {
    let v = g.next_id();
    let link: Vec<VertexId> = g.neighbors(a).expect("a").intersection(g.neighbors(b).expect("b")).copied().collect();
    g.remove_edge(a, b);
    g.add_edge(v, a);
    g.add_edge(v, b);
    for x in link {
        g.add_edge(v, x);
    }
    v
}

fn raw_uncut(g: &mut SimplicialGraph, c: Cut) {
    g.remove_vertex(c.v);
    g.add_edge(c.a, c.b);
}

fn common(g: &SimplicialGraph, face: &[VertexId]) -> BTreeSet<VertexId> {
    let mut it = face.iter();
    let mut set = g.neighbors(*it.next().expect("nonempty face")).expect("vertex").clone();
    for v in it {
        let nb = g.neighbors(*v).expect("vertex");
        set.retain(|x| nb.contains(x));
    }
    set
}

/// Is the subgraph induced on `set` a cycle of length at least 4?
fn induces_cycle(g: &SimplicialGraph, set: &BTreeSet<VertexId>) -> bool {
    if set.len() < 4 {
        return false;
    }
    for &x in set {
        let nb = g.neighbors(x).expect("vertex");
        if set.iter().filter(|y| nb.contains(y)).count() != 2 {
            return false;
        }
    }
    let start = *set.first().expect("nonempty");
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for y in g.neighbors(x).expect("vertex") {
            if set.contains(y) && seen.insert(*y) {
                stack.push(*y);
            }
        }
    }
    seen.len() == set.len()
}

/// Is the link of `face` a sphere of the right dimension for an interior
/// codimension-1 face?
fn interior_hinge(g: &SimplicialGraph, d: usize, a: VertexId, b: VertexId) -> bool {
    let link = common(g, &[a, b]);
    match d {
        3 => induces_cycle(g, &link),
        _ => {
            let mut it = link.iter();
            match (it.next(), it.next(), it.next()) {
                (Some(&x), Some(&y), None) => !g.adjacent(x, y),
                _ => false,
            }
        }
    }
}

fn face_is_odd(g: &SimplicialGraph, face: &[VertexId]) -> bool {
    let link = common(g, face);
    link.len() % 2 == 1 && induces_cycle(g, &link)
}

/// Codimension-2 faces of a `d`-dimensional host spanned by `region`.
fn faces_within(g: &SimplicialGraph, d: usize, region: &BTreeSet<VertexId>) -> Vec<Vec<VertexId>> {
    let present: Vec<VertexId> = region.iter().copied().filter(|&v| g.contains(v)).collect();
    if d == 2 {
        return present.into_iter().map(|v| vec![v]).collect();
    }
    let mut out = Vec::new();
    for (i, &a) in present.iter().enumerate() {
        for &b in &present[i + 1..] {
            if g.adjacent(a, b) {
                out.push(vec![a, b]);
            }
        }
    }
    out
}

fn all_odd_faces(g: &SimplicialGraph, d: usize) -> BTreeSet<Vec<VertexId>> {
    let faces: Vec<Vec<VertexId>> = match d {
        2 => g.vertices().map(|v| vec![v]).collect(),
        _ => g.edges().into_iter().map(|(a, b)| vec![a, b]).collect(),
    };
    faces.into_iter().filter(|f| face_is_odd(g, f)).collect()
}

fn objective_of(g: &SimplicialGraph, odd: &BTreeSet<Vec<VertexId>>, boundary: &BTreeSet<VertexId>) -> Objective {
    if boundary.is_empty() {
        return (odd.len() as u64, odd.len());
    }
    let dist = g.distances_from(boundary.iter().copied());
    let phi = odd
        .iter()
        .map(|f| f.iter().map(|v| dist.get(v).copied().unwrap_or(0)).max().unwrap_or(0) as u64)
        .sum();
    (phi, odd.len())
}

fn boundary_of(g: &SimplicialGraph, d: usize) -> Result<BTreeSet<VertexId>> {
    match d {
        3 => topology::geometric3_boundary_fast(g)
            .ok_or_else(|| Error::Precondition("host is not 3-dimensional geometric".into())),
        2 => {
            let mut boundary = BTreeSet::new();
            let mut interior = 0;
            for v in g.vertices() {
                let s = g.unit_sphere(v)?;
                if topology::is_circular(&s) {
                    interior += 1;
                } else if topology::is_path_graph(&s) {
                    boundary.insert(v);
                } else {
                    return Err(Error::Precondition(format!("unit sphere of {v} is neither a cycle nor a path")));
                }
            }
            if interior == 0 {
                return Err(Error::Precondition("host has no interior".into()));
            }
            Ok(boundary)
        }
        _ => Err(Error::DimensionLimit(d as i32)),
    }
}

/// A host under refinement together with its history.
#[derive(Clone, Debug)]
pub struct RefinementSession {
    host: HostComplex,
    dim: usize,
    boundary_graph: SimplicialGraph,
    log: Vec<MoveRecord>,
    trace: Vec<TracePoint>,
    steps: usize,
    odd: BTreeSet<Vec<VertexId>>,
}

impl RefinementSession {
    /// Start a session. The host must be 2- or 3-dimensional geometric and
    /// its geometric boundary must equal the designated one.
    pub fn new(host: HostComplex) -> Result<Self> {
        let dim = host.graph.dimension();
        if dim != 2 && dim != 3 {
            return Err(Error::Precondition(format!("host must have dimension 2 or 3, found {dim}")));
        }
        let dim = dim as usize;
        let found = boundary_of(&host.graph, dim)?;
        if found != host.boundary {
            return Err(Error::Precondition("designated boundary differs from the geometric boundary".into()));
        }
        let boundary_graph = host.graph.induced(&host.boundary);
        let odd = all_odd_faces(&host.graph, dim);
        let mut s = RefinementSession { host, dim, boundary_graph, log: Vec::new(), trace: Vec::new(), steps: 0, odd };
        s.record();
        Ok(s)
    }

    /// Session on a graph whose boundary is read off its unit spheres.
    pub fn from_graph(g: SimplicialGraph, provenance: &str) -> Result<Self> {
        let d = g.dimension().max(0) as usize;
        let boundary = boundary_of(&g, d)?;
        Self::new(HostComplex { graph: g, boundary, provenance: provenance.to_string() })
    }

    pub fn host(&self) -> &HostComplex {
        &self.host
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.host.graph
    }

    pub fn boundary(&self) -> &BTreeSet<VertexId> {
        &self.host.boundary
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn log(&self) -> &[MoveRecord] {
        &self.log
    }

    pub fn moves(&self) -> Vec<Move> {
        self.log.iter().map(|r| r.mv.clone()).collect()
    }

    pub fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    /// Number of elementary cuts currently applied.
    pub fn cut_count(&self) -> usize {
        self.log.iter().map(|r| r.cuts.len()).sum()
    }

    pub fn odd(&self) -> OddSet {
        curvature::odd_faces(&self.host.graph, self.dim, &self.host.boundary)
    }

    /// `(φ, |O|)` from the maintained odd set.
    pub fn objective(&self) -> (u64, usize) {
        objective_of(&self.host.graph, &self.odd, &self.host.boundary)
    }

    pub fn is_solved(&self) -> bool {
        self.objective().1 == 0
    }

    pub fn boundary_unchanged(&self) -> bool {
        self.host.graph.induced(&self.host.boundary) == self.boundary_graph
    }

    pub fn trace_csv(&self) -> String {
        let mut out = String::from("step,phi,oddcount\n");
        for p in &self.trace {
            out.push_str(&format!("{},{},{}\n", p.step, p.phi, p.odd));
        }
        out
    }

    fn record(&mut self) {
        let (phi, odd) = self.objective();
        self.trace.push(TracePoint { step: self.steps, phi, odd });
    }

    fn check_cut(&self, a: VertexId, b: VertexId) -> Result<()> {
        let g = &self.host.graph;
        if !g.contains(a) || !g.contains(b) || !g.adjacent(a, b) {
            return Err(Error::UnknownEdge(a, b));
        }
        if self.host.boundary.contains(&a) && self.host.boundary.contains(&b) {
            return Err(Error::Precondition(format!("edge ({a}, {b}) joins two boundary vertices")));
        }
        if !interior_hinge(g, self.dim, a, b) {
            return Err(Error::Precondition(format!("edge ({a}, {b}) is not an interior edge")));
        }
        Ok(())
    }

    /// Edges that may be cut, in lexicographic order.
    pub fn legal_cuts(&self) -> Vec<Edge> {
        self.host.graph.edges().into_iter().filter(|&(a, b)| self.check_cut(a, b).is_ok()).collect()
    }

    /// Recompute the odd status of every face spanned by `region`.
    fn refresh(&mut self, region: &BTreeSet<VertexId>) {
        self.odd.retain(|f| !f.iter().all(|v| region.contains(v)));
        for f in faces_within(&self.host.graph, self.dim, region) {
            if face_is_odd(&self.host.graph, &f) {
                self.odd.insert(f);
            }
        }
    }

    fn do_cut(&mut self, a: VertexId, b: VertexId) -> Cut {
        let v = raw_cut(&mut self.host.graph, a, b);
        let mut region = self.host.graph.neighbors(v).expect("new vertex").clone();
        region.insert(v);
        self.refresh(&region);
        Cut { a, b, v }
    }

    fn undo_cut(&mut self, c: Cut) {
        let mut region = self.host.graph.neighbors(c.v).expect("created vertex").clone();
        region.insert(c.v);
        raw_uncut(&mut self.host.graph, c);
        self.refresh(&region);
    }

    /// Split the interior edge `(a, b)` with a new vertex.
    pub fn edge_cut(&mut self, a: VertexId, b: VertexId) -> Result<MoveRecord> {
        self.check_cut(a, b)?;
        let c = self.do_cut(a, b);
        Ok(self.commit(Move::Cut(a, b), vec![c]))
    }

    fn commit(&mut self, mv: Move, cuts: Vec<Cut>) -> MoveRecord {
        let rec = MoveRecord { mv, cuts };
        self.log.push(rec.clone());
        self.steps += 1;
        self.record();
        rec
    }

    /// Cut the first legal edge `(a, b)` of `simplex`, then the edge from `a`
    /// to the new vertex. The link of the second edge is the link of the
    /// first, so every old link edge gains two hinges and keeps its parity.
    fn double_cut(&mut self, simplex: &[VertexId], mv: Move) -> Result<MoveRecord> {
        let mut t = simplex.to_vec();
        t.sort_unstable();
        t.dedup();
        let g = &self.host.graph;
        let is_clique = t.len() == simplex.len()
            && t.iter().all(|&x| g.contains(x))
            && t.iter().enumerate().all(|(i, &x)| t[i + 1..].iter().all(|&y| g.adjacent(x, y)));
        if !is_clique {
            return Err(Error::UnknownSimplex(t));
        }
        let mut first = None;
        'outer: for i in 0..t.len() {
            for j in i + 1..t.len() {
                if self.check_cut(t[i], t[j]).is_ok() {
                    first = Some((t[i], t[j]));
                    break 'outer;
                }
            }
        }
        let (a, b) = first.ok_or_else(|| Error::Precondition(format!("no interior edge of {t:?} can be cut")))?;
        let c1 = self.do_cut(a, b);
        let c2 = self.do_cut(a, c1.v);
        Ok(self.commit(mv, vec![c1, c2]))
    }

    /// Replace a tetrahedron by a stacked pair of cuts on its lowest legal
    /// edge. Parities of surviving interior edges are unchanged and the new
    /// edges to the link have degree 4.
    pub fn tetra_to_16cell(&mut self, t: [VertexId; 4]) -> Result<MoveRecord> {
        if self.dim != 3 {
            return Err(Error::Precondition("the 16-cell move needs a 3-dimensional host".into()));
        }
        self.double_cut(&t, Move::Tetra16(t))
    }

    /// Two-dimensional counterpart of [`Self::tetra_to_16cell`] on a triangle.
    pub fn triangle_to_octahedron(&mut self, t: [VertexId; 3]) -> Result<MoveRecord> {
        if self.dim != 2 {
            return Err(Error::Precondition("the octahedron move needs a 2-dimensional host".into()));
        }
        self.double_cut(&t, Move::Octa(t))
    }

    pub fn apply(&mut self, mv: &Move) -> Result<MoveRecord> {
        match *mv {
            Move::Cut(a, b) => self.edge_cut(a, b),
            Move::Tetra16(t) => self.tetra_to_16cell(t),
            Move::Octa(t) => self.triangle_to_octahedron(t),
        }
    }

    /// Undo the last move, returning it.
    pub fn undo(&mut self) -> Result<MoveRecord> {
        let rec = self.log.pop().ok_or_else(|| Error::Precondition("nothing to undo".into()))?;
        for c in rec.cuts.iter().rev() {
            self.undo_cut(*c);
        }
        self.steps += 1;
        self.record();
        Ok(rec)
    }

    /// Apply all moves or none. A failing move rolls back to the state
    /// before the script and reports its index.
    pub fn apply_script(&mut self, moves: &[Move]) -> Result<Outcome> {
        let start_log = self.log.len();
        let start_trace = self.trace.len();
        let start_steps = self.steps;
        for (step, mv) in moves.iter().enumerate() {
            if let Err(e) = self.apply(mv) {
                while self.log.len() > start_log {
                    let rec = self.log.pop().expect("applied move");
                    for c in rec.cuts.iter().rev() {
                        self.undo_cut(*c);
                    }
                }
                self.trace.truncate(start_trace);
                self.steps = start_steps;
                return Err(Error::IllegalMove { step, reason: e.to_string() });
            }
        }
        Ok(if self.is_solved() { Outcome::Solved } else { Outcome::Stalled })
    }

    fn score_cut(&mut self, a: VertexId, b: VertexId) -> (Objective, Cut) {
        let c = self.do_cut(a, b);
        let obj = self.objective();
        (obj, c)
    }

    fn best_single(&mut self) -> Option<(Objective, Edge)> {
        let mut best: Option<(Objective, Edge)> = None;
        for (a, b) in self.legal_cuts() {
            let (obj, c) = self.score_cut(a, b);
            self.undo_cut(c);
            if best.is_none_or(|bst| (obj, (a, b)) < bst) {
                best = Some((obj, (a, b)));
            }
        }
        best
    }

    fn best_pair(&mut self) -> Option<(Objective, Edge, Edge)> {
        let mut best: Option<(Objective, Edge, Edge)> = None;
        for (a, b) in self.legal_cuts() {
            let c1 = self.do_cut(a, b);
            let seconds: Vec<Edge> = self.host.graph.neighbors(c1.v).expect("new vertex").iter().map(|&x| edge(x, c1.v)).collect();
            for (x, y) in seconds {
                if self.check_cut(x, y).is_err() {
                    continue;
                }
                let (obj, c2) = self.score_cut(x, y);
                self.undo_cut(c2);
                if best.is_none_or(|bst| (obj, (a, b), (x, y)) < bst) {
                    best = Some((obj, (a, b), (x, y)));
                }
            }
            self.undo_cut(c1);
        }
        best
    }

    /// Greedy descent on `(φ, |O|)`. Each step applies the best single cut
    /// if it strictly improves the objective; with lookahead 2 a pair of
    /// stacked cuts is tried next. Ties go to the lowest edge.
    pub fn greedy_reduce(&mut self, opts: GreedyOptions) -> Outcome {
        let mut spent = 0;
        loop {
            let current = self.objective();
            if current.1 == 0 {
                return Outcome::Solved;
            }
            if spent >= opts.budget {
                return Outcome::BudgetExhausted;
            }
            if let Some((obj, (a, b))) = self.best_single() {
                if obj < current {
                    self.edge_cut(a, b).expect("legal cut");
                    spent += 1;
                    continue;
                }
            }
            if opts.lookahead >= 2 {
                if spent + 2 > opts.budget {
                    return Outcome::BudgetExhausted;
                }
                if let Some((obj, (a, b), (x, y))) = self.best_pair() {
                    if obj < current {
                        let rec = self.edge_cut(a, b).expect("legal cut");
                        let v = rec.cuts[0].v;
                        debug_assert!(x == v || y == v);
                        self.edge_cut(x, y).expect("legal cut");
                        spent += 2;
                        continue;
                    }
                }
            }
            return Outcome::Stalled;
        }
    }

    /// Uniform (or distance-weighted) random legal edge. Uniform proposals
    /// use rejection sampling on the edge list and fall back to the full
    /// legal list after repeated misses.
    fn propose(&self, rng: &mut ChaCha8Rng, bias: bool) -> Option<Edge> {
        if !bias {
            let edges = self.host.graph.edges();
            for _ in 0..64 {
                let (a, b) = edges[rng.gen_range(0..edges.len())];
                if self.check_cut(a, b).is_ok() {
                    return Some((a, b));
                }
            }
        }
        let legal = self.legal_cuts();
        if legal.is_empty() {
            return None;
        }
        if !bias {
            return Some(legal[rng.gen_range(0..legal.len())]);
        }
        let dist = curvature::boundary_distances(&self.host.graph, &self.host.boundary);
        let weights: Vec<f64> = legal.iter().map(|(a, b)| 1.0 + dist[a].max(dist[b]) as f64).collect();
        let mut r = rng.gen::<f64>() * weights.iter().sum::<f64>();
        for (e, w) in legal.iter().zip(&weights) {
            if r < *w {
                return Some(*e);
            }
            r -= w;
        }
        legal.last().copied()
    }

    /// Metropolis descent over single cuts on `φ`, with ties on `|O|`
    /// accepted when `|O|` does not grow. Every step, accepted or not, is
    /// recorded in the trace.
    pub fn anneal(&mut self, schedule: Schedule) -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
        let mut current = self.objective();
        let mut temperature = schedule.t0;
        for _ in 0..schedule.steps {
            if current.1 == 0 {
                return Outcome::Solved;
            }
            let Some((a, b)) = self.propose(&mut rng, schedule.interior_bias) else {
                return Outcome::Stalled;
            };
            let (obj, c) = self.score_cut(a, b);
            let delta = obj.0 as f64 - current.0 as f64;
            let accept = if delta < 0.0 {
                true
            } else if delta == 0.0 {
                obj.1 <= current.1
            } else {
                rng.gen::<f64>() < (-delta / temperature).exp()
            };
            if accept {
                self.commit(Move::Cut(a, b), vec![c]);
                current = obj;
            } else {
                self.undo_cut(c);
                self.steps += 1;
                self.record();
            }
            temperature *= schedule.cooling;
        }
        if current.1 == 0 {
            Outcome::Solved
        } else {
            Outcome::BudgetExhausted
        }
    }
}
