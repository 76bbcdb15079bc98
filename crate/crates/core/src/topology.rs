//! Inductive contractibility, dimension and the sphere/ball/variety
//! classification.
//!
//! Every recursive question is asked about a vertex subset of one fixed
//! graph: unit spheres of induced subgraphs are again induced subgraphs.
//! Subsets are bitsets, which makes memo keys exact and cheap.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, VertexId};
use crate::scalar::Rational;

/// Deepest recursion level `classify` accepts.
pub const MAX_CLASSIFY_DIM: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    NotUniformDimensional,
    UniformDimensional,
    Geometric,
    Ball,
    Sphere,
    Variety,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: Kind,
    pub dim: i32,
    pub boundary: BTreeSet<VertexId>,
    pub interior: BTreeSet<VertexId>,
    pub singular: BTreeSet<VertexId>,
    pub contractible: bool,
    pub euler: i64,
}

#[derive(Serialize)]
struct Report<'a> {
    kind: Kind,
    dim: i32,
    boundary: &'a BTreeSet<VertexId>,
    singular: &'a BTreeSet<VertexId>,
    euler: i64,
}

impl Classification {
    /// True for spheres, balls and geometric graphs.
    pub fn is_geometric(&self) -> bool {
        matches!(self.kind, Kind::Geometric | Kind::Ball | Kind::Sphere)
    }

    /// Canonical report `{kind, dim, boundary, singular, euler}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Report {
            kind: self.kind,
            dim: self.dim,
            boundary: &self.boundary,
            singular: &self.singular,
            euler: self.euler,
        })
        .expect("report serialization cannot fail")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn full(n: usize) -> Self {
        let mut b = Bits::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn without(&self, i: usize) -> Bits {
        let mut b = self.clone();
        b.remove(i);
        b
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }
}

/// Memoized inductive predicates on the vertex subsets of one graph.
struct Oracle {
    ids: Vec<VertexId>,
    nb: Vec<Bits>,
    contractible: HashMap<Bits, bool>,
    sphere: HashMap<(Bits, i32), bool>,
    ball: HashMap<(Bits, i32), bool>,
    geometric: HashMap<(Bits, i32), Option<Bits>>,
    variety: HashMap<(Bits, i32), bool>,
    dimension: HashMap<Bits, Rational>,
}

impl Oracle {
    fn new(g: &SimplicialGraph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let pos: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let nb = ids
            .iter()
            .map(|&v| {
                let mut b = Bits::empty(n);
                for w in g.neighbors(v).expect("vertex of g") {
                    b.insert(pos[w]);
                }
                b
            })
            .collect();
        Oracle {
            ids,
            nb,
            contractible: HashMap::new(),
            sphere: HashMap::new(),
            ball: HashMap::new(),
            geometric: HashMap::new(),
            variety: HashMap::new(),
            dimension: HashMap::new(),
        }
    }

    fn all(&self) -> Bits {
        Bits::full(self.ids.len())
    }

    fn to_set(&self, b: &Bits) -> BTreeSet<VertexId> {
        b.iter().map(|i| self.ids[i]).collect()
    }

    fn sphere_of(&self, u: &Bits, x: usize) -> Bits {
        self.nb[x].and(u)
    }

    fn has_edges(&self, u: &Bits) -> bool {
        u.iter().any(|x| !self.sphere_of(u, x).is_empty())
    }

    fn euler(&self, u: &Bits) -> i64 {
        fn walk(o: &Oracle, cand: &Bits, sign: i64) -> i64 {
            let mut total = 0;
            let mut rest = cand.clone();
            for v in cand.iter() {
                rest.remove(v);
                let next = o.nb[v].and(&rest);
                total += sign + walk(o, &next, -sign);
            }
            total
        }
        walk(self, u, 1)
    }

    fn clique_dim(&self, u: &Bits) -> i32 {
        fn walk(o: &Oracle, cand: &Bits, depth: i32) -> i32 {
            let mut best = depth;
            let mut rest = cand.clone();
            for v in cand.iter() {
                rest.remove(v);
                let next = o.nb[v].and(&rest);
                best = best.max(walk(o, &next, depth + 1));
            }
            best
        }
        walk(self, u, -1)
    }

    fn connected(&self, u: &Bits) -> bool {
        let Some(start) = u.first() else {
            return false;
        };
        let mut seen = Bits::empty(self.ids.len());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in self.sphere_of(u, x).iter() {
                if !seen.contains(y) {
                    seen.insert(y);
                    stack.push(y);
                }
            }
        }
        seen.count() == u.count()
    }

    fn contractible(&mut self, u: &Bits) -> bool {
        if let Some(&c) = self.contractible.get(u) {
            return c;
        }
        let n = u.count();
        let result = if n <= 1 {
            n == 1
        } else if u.iter().any(|x| self.sphere_of(u, x).count() == n - 1) {
            // A cone is contractible: delete any other vertex first.
            true
        } else if self.euler(u) != 1 || !self.connected(u) {
            false
        } else {
            let mut found = false;
            for x in u.iter() {
                let s = self.sphere_of(u, x);
                if self.contractible(&s) && self.contractible(&u.without(x)) {
                    found = true;
                    break;
                }
            }
            found
        };
        self.contractible.insert(u.clone(), result);
        result
    }

    /// Boundary of `u` if `u` is in `G_d`.
    fn geometric(&mut self, u: &Bits, d: i32) -> Option<Bits> {
        let key = (u.clone(), d);
        if let Some(r) = self.geometric.get(&key) {
            return r.clone();
        }
        let result = if u.is_empty() || d < 0 {
            None
        } else if d == 0 {
            (!self.has_edges(u)).then(|| Bits::empty(self.ids.len()))
        } else {
            let mut boundary = Bits::empty(self.ids.len());
            let mut interior = 0;
            let mut ok = true;
            for x in u.iter() {
                let s = self.sphere_of(u, x);
                if self.sphere(&s, d - 1) {
                    interior += 1;
                } else if self.ball(&s, d - 1) {
                    boundary.insert(x);
                } else {
                    ok = false;
                    break;
                }
            }
            (ok && interior > 0).then_some(boundary)
        };
        self.geometric.insert(key, result.clone());
        result
    }

    fn sphere(&mut self, u: &Bits, d: i32) -> bool {
        let key = (u.clone(), d);
        if let Some(&r) = self.sphere.get(&key) {
            return r;
        }
        let result = match d {
            d if d < -1 => false,
            -1 => u.is_empty(),
            0 => u.count() == 2 && !self.has_edges(u),
            _ => {
                let expected = if d % 2 == 0 { 2 } else { 0 };
                self.geometric(u, d).is_some_and(|b| b.is_empty())
                    && self.euler(u) == expected
                    && self.connected(u)
                    && !self.contractible(u)
                    && u.iter().collect::<Vec<_>>().into_iter().all(|x| self.ball(&u.without(x), d))
            }
        };
        self.sphere.insert(key, result);
        result
    }

    fn ball(&mut self, u: &Bits, d: i32) -> bool {
        let key = (u.clone(), d);
        if let Some(&r) = self.ball.get(&key) {
            return r;
        }
        let result = match d {
            d if d < 0 => false,
            0 => u.count() == 1,
            _ => match self.geometric(u, d) {
                Some(b) => !b.is_empty() && self.sphere(&b, d - 1) && self.contractible(u),
                None => false,
            },
        };
        self.ball.insert(key, result);
        result
    }

    fn variety(&mut self, u: &Bits, d: i32) -> bool {
        let key = (u.clone(), d);
        if let Some(&r) = self.variety.get(&key) {
            return r;
        }
        let result = match d {
            d if d < -1 => false,
            -1 => u.is_empty(),
            0 => !u.is_empty() && !self.has_edges(u),
            _ => {
                let mut ok = !u.is_empty();
                let mut singular = Bits::empty(self.ids.len());
                let mut boundary = Bits::empty(self.ids.len());
                for x in u.iter().collect::<Vec<_>>() {
                    if !ok {
                        break;
                    }
                    let s = self.sphere_of(u, x);
                    if !self.variety(&s, d - 1) {
                        ok = false;
                    } else if self.sphere(&s, d - 1) {
                    } else if self.ball(&s, d - 1) {
                        boundary.insert(x);
                    } else {
                        singular.insert(x);
                    }
                }
                ok && self.lower_variety(&singular, d) && self.lower_variety(&boundary, d)
            }
        };
        self.variety.insert(key, result);
        result
    }

    fn lower_variety(&mut self, w: &Bits, d: i32) -> bool {
        if w.is_empty() {
            return true;
        }
        let k = self.clique_dim(w);
        k < d && self.variety(w, k)
    }

    fn dimension(&mut self, u: &Bits) -> Rational {
        if u.is_empty() {
            return Rational::from_integer((-1).into());
        }
        if let Some(r) = self.dimension.get(u) {
            return r.clone();
        }
        let mut sum = Rational::zero();
        for x in u.iter() {
            let s = self.sphere_of(u, x);
            sum += self.dimension(&s);
        }
        let r = Rational::from_integer(1.into()) + sum / Rational::from_integer((u.count() as i64).into());
        self.dimension.insert(u.clone(), r.clone());
        r
    }
}

pub fn is_contractible(g: &SimplicialGraph) -> bool {
    let mut o = Oracle::new(g);
    let all = o.all();
    o.contractible(&all)
}

/// Remove, lowest id first, vertices whose unit sphere is contractible,
/// until none is left.
pub fn homotopy_reduce(g: &SimplicialGraph) -> SimplicialGraph {
    let mut o = Oracle::new(g);
    let mut u = o.all();
    'outer: loop {
        for x in u.iter().collect::<Vec<_>>() {
            let s = o.sphere_of(&u, x);
            if o.contractible(&s) {
                u.remove(x);
                continue 'outer;
            }
        }
        break;
    }
    g.induced(&o.to_set(&u))
}

/// `dim(∅) = -1`, otherwise one plus the mean dimension of the unit spheres.
pub fn inductive_dimension(g: &SimplicialGraph) -> Rational {
    let mut o = Oracle::new(g);
    let all = o.all();
    o.dimension(&all)
}

pub fn is_sphere(g: &SimplicialGraph, d: i32) -> bool {
    let mut o = Oracle::new(g);
    let all = o.all();
    o.sphere(&all, d)
}

pub fn is_ball(g: &SimplicialGraph, d: i32) -> bool {
    let mut o = Oracle::new(g);
    let all = o.all();
    o.ball(&all, d)
}

/// Boundary of `g` if it lies in `G_d`.
pub fn geometric_boundary(g: &SimplicialGraph, d: i32) -> Option<BTreeSet<VertexId>> {
    let mut o = Oracle::new(g);
    let all = o.all();
    o.geometric(&all, d).map(|b| o.to_set(&b))
}

/// Vertices whose unit sphere is neither a `(d-1)`-sphere nor a `(d-1)`-ball.
pub fn singular_set(g: &SimplicialGraph, d: i32) -> BTreeSet<VertexId> {
    let mut o = Oracle::new(g);
    let all = o.all();
    let mut out = BTreeSet::new();
    for x in all.iter() {
        let s = o.sphere_of(&all, x);
        if !o.sphere(&s, d - 1) && !o.ball(&s, d - 1) {
            out.insert(o.ids[x]);
        }
    }
    out
}

pub fn is_variety(g: &SimplicialGraph, d: i32) -> bool {
    let mut o = Oracle::new(g);
    let all = o.all();
    o.variety(&all, d)
}

pub fn classify(g: &SimplicialGraph, max_dim: i32) -> Result<Classification> {
    if max_dim > MAX_CLASSIFY_DIM {
        return Err(Error::DimensionLimit(max_dim));
    }
    let d = g.dimension();
    if d > max_dim {
        return Err(Error::DimensionLimit(d));
    }
    let euler = g.euler_characteristic();
    let mut o = Oracle::new(g);
    let all = o.all();
    let vertices = g.vertex_set();
    if g.is_empty() {
        return Ok(Classification {
            kind: Kind::Sphere,
            dim: -1,
            boundary: BTreeSet::new(),
            interior: BTreeSet::new(),
            singular: BTreeSet::new(),
            contractible: false,
            euler,
        });
    }
    let contractible = o.contractible(&all);
    if d == 0 && all.count() == 1 {
        return Ok(Classification {
            kind: Kind::Ball,
            dim: 0,
            boundary: BTreeSet::new(),
            interior: vertices,
            singular: BTreeSet::new(),
            contractible,
            euler,
        });
    }
    let (kind, boundary, singular) = match o.geometric(&all, d) {
        Some(b) => {
            let kind = if b.is_empty() {
                if o.sphere(&all, d) {
                    Kind::Sphere
                } else {
                    Kind::Geometric
                }
            } else if contractible && o.sphere(&b, d - 1) {
                Kind::Ball
            } else {
                Kind::Geometric
            };
            (kind, o.to_set(&b), BTreeSet::new())
        }
        None => {
            let mut boundary = BTreeSet::new();
            let mut singular = BTreeSet::new();
            for x in all.iter() {
                let s = o.sphere_of(&all, x);
                if o.sphere(&s, d - 1) {
                } else if o.ball(&s, d - 1) {
                    boundary.insert(o.ids[x]);
                } else {
                    singular.insert(o.ids[x]);
                }
            }
            let kind = if o.variety(&all, d) {
                Kind::Variety
            } else if o.dimension(&all) == Rational::from_integer(d.into()) {
                Kind::UniformDimensional
            } else {
                Kind::NotUniformDimensional
            };
            (kind, boundary, singular)
        }
    };
    let interior = vertices.difference(&boundary).copied().collect();
    Ok(Classification { kind, dim: d, boundary, interior, singular, contractible, euler })
}

/// True iff the graph is a cycle `C_n` with `n >= 4`.
pub fn is_circular(g: &SimplicialGraph) -> bool {
    g.vertex_count() >= 4 && g.vertices().all(|v| g.degree(v) == Ok(2)) && g.is_connected()
}

/// True iff the graph is a path with at least three vertices.
pub fn is_path_graph(g: &SimplicialGraph) -> bool {
    let n = g.vertex_count();
    n >= 3
        && g.edge_count() == n - 1
        && g.is_connected()
        && g.vertices().all(|v| matches!(g.degree(v), Ok(1) | Ok(2)))
}

/// Two-sphere test by unit spheres and the planar curvature sum.
pub fn is_s2_fast(g: &SimplicialGraph) -> bool {
    if !g.is_connected() {
        return false;
    }
    let mut total: i64 = 0;
    for v in g.vertices() {
        let s = g.unit_sphere(v).expect("vertex of g");
        if !is_circular(&s) {
            return false;
        }
        total += 6 - s.vertex_count() as i64;
    }
    total == 12
}

/// Two-ball test by unit spheres, Euler characteristic and boundary cycle.
pub fn is_b2_fast(g: &SimplicialGraph) -> bool {
    if !g.is_connected() || g.euler_characteristic() != 1 {
        return false;
    }
    let mut boundary = BTreeSet::new();
    let mut interior = 0;
    for v in g.vertices() {
        let s = g.unit_sphere(v).expect("vertex of g");
        if is_circular(&s) {
            interior += 1;
        } else if is_path_graph(&s) {
            boundary.insert(v);
        } else {
            return false;
        }
    }
    interior > 0 && is_circular(&g.induced(&boundary))
}

/// Boundary of a 3-dimensional geometric graph, using the fast 2-dimensional
/// tests on every unit sphere. `None` if some unit sphere fails both.
pub fn geometric3_boundary_fast(g: &SimplicialGraph) -> Option<BTreeSet<VertexId>> {
    let mut boundary = BTreeSet::new();
    let mut interior = 0;
    for v in g.vertices() {
        let s = g.unit_sphere(v).ok()?;
        if is_s2_fast(&s) {
            interior += 1;
        } else if is_b2_fast(&s) {
            boundary.insert(v);
        } else {
            return None;
        }
    }
    (interior > 0).then_some(boundary)
}
