//! Standard graphs and host complexes.
//!
//! Every constructor returns a fixed labelling so that outputs are
//! reproducible. Host complexes carry the designated boundary explicitly.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{glue, SimplicialGraph, VertexId};
use crate::topology;

/// A 3-dimensional (or, for the cycle analogue, 2-dimensional) graph with a
/// designated boundary, ready for refinement.
#[derive(Clone, Debug, PartialEq)]
pub struct HostComplex {
    pub graph: SimplicialGraph,
    pub boundary: BTreeSet<VertexId>,
    pub provenance: String,
}

impl HostComplex {
    pub fn dim(&self) -> usize {
        self.graph.dimension().max(0) as usize
    }
}

/// Cross polytope of dimension `n - 1`: vertices `0..2n`, with `i` and
/// `i + n` antipodal. `n = 3` is the octahedron.
pub fn cross_polytope(n: u32) -> Result<SimplicialGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("cross polytope needs n >= 2, got {n}")));
    }
    let m = 2 * n;
    let mut g = SimplicialGraph::new();
    for i in 0..m {
        g.add_vertex(i);
        for j in i + 1..m {
            if j != i + n {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

pub fn octahedron() -> SimplicialGraph {
    cross_polytope(3).expect("n = 3")
}

/// Top vertex 0, upper ring 1..=5, lower ring 6..=10, bottom 11.
pub fn icosahedron() -> SimplicialGraph {
    let mut g = SimplicialGraph::new();
    for i in 0..5u32 {
        let up = 1 + i;
        let up_next = 1 + (i + 1) % 5;
        let low = 6 + i;
        let low_next = 6 + (i + 1) % 5;
        g.add_edge(0, up);
        g.add_edge(up, up_next);
        g.add_edge(up, low);
        g.add_edge(up_next, low);
        g.add_edge(low, low_next);
        g.add_edge(low, 11);
    }
    g
}

pub fn cycle(n: u32) -> Result<SimplicialGraph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cycle needs n >= 3, got {n}")));
    }
    Ok(SimplicialGraph::from_edges((0..n).map(|i| (i, (i + 1) % n))))
}

/// Wheel with rim `0..n` and hub `n`.
pub fn wheel(n: u32) -> Result<SimplicialGraph> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("wheel needs n >= 4, got {n}")));
    }
    Ok(cycle(n)?.cone(n))
}

/// Triangulated flat torus on an `m x n` grid; `(x, y)` has id `x * n + y`.
pub fn flat_torus(m: u32, n: u32) -> Result<SimplicialGraph> {
    if m < 4 || n < 4 {
        return Err(Error::InvalidArgument(format!("flat torus needs m, n >= 4, got {m}, {n}")));
    }
    let id = |x: u32, y: u32| (x % m) * n + (y % n);
    let mut g = SimplicialGraph::new();
    for x in 0..m {
        for y in 0..n {
            g.add_edge(id(x, y), id(x + 1, y));
            g.add_edge(id(x, y), id(x, y + 1));
            g.add_edge(id(x, y), id(x + 1, y + 1));
        }
    }
    Ok(g)
}

/// One step of the torus construction: edge `(a, b)` was split by `vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub a: VertexId,
    pub b: VertexId,
    pub vertex: VertexId,
}

/// The 13-vertex torus with edges `i ~ i ± 1, i ± 3, i ± 4 (mod 13)`. Every
/// vertex has degree 6.
pub fn even_torus() -> SimplicialGraph {
    let mut g = SimplicialGraph::new();
    for i in 0..13u32 {
        for s in [1, 3, 4] {
            g.add_edge(i, (i + s) % 13);
        }
    }
    g
}

/// Split edge `(a, b)` with a new vertex joined to `a`, `b` and the link of
/// the edge.
pub fn subdivide_edge(g: &mut SimplicialGraph, a: VertexId, b: VertexId, vertex: VertexId) -> Result<()> {
    if !g.adjacent(a, b) {
        return Err(Error::UnknownEdge(a, b));
    }
    if g.contains(vertex) {
        return Err(Error::InvalidArgument(format!("vertex {vertex} already present")));
    }
    let link: Vec<VertexId> = g.neighbors(a)?.intersection(g.neighbors(b)?).copied().collect();
    g.remove_edge(a, b);
    for x in [a, b].into_iter().chain(link) {
        g.add_edge(vertex, x);
    }
    Ok(())
}

/// Reverse of [`subdivide_edge`].
pub fn undo_subdivision(g: &mut SimplicialGraph, s: Subdivision) -> Result<()> {
    if !g.remove_vertex(s.vertex) {
        return Err(Error::UnknownVertex(s.vertex));
    }
    g.add_edge(s.a, s.b);
    Ok(())
}

/// A 15-vertex 5-chromatic torus and the two subdivisions that produced it
/// from [`even_torus`]. The only odd-degree vertices are 0 and 10, and they
/// are adjacent.
pub fn fisk_torus_with_log() -> (SimplicialGraph, Vec<Subdivision>) {
    let mut g = even_torus();
    let log = vec![Subdivision { a: 1, b: 4, vertex: 13 }, Subdivision { a: 6, b: 9, vertex: 14 }];
    for s in &log {
        subdivide_edge(&mut g, s.a, s.b, s.vertex).expect("edges of the even torus");
    }
    (g, log)
}

pub fn fisk_torus() -> SimplicialGraph {
    fisk_torus_with_log().0
}

/// Seven-vertex Möbius strip: the cycle `C_7` with chords `(x, x + 3)`.
pub fn moebius() -> SimplicialGraph {
    let mut g = SimplicialGraph::new();
    for x in 0..7u32 {
        g.add_edge(x, (x + 1) % 7);
        g.add_edge(x, (x + 3) % 7);
    }
    g
}

const PROJECTIVE_EDGES: [(u32, u32); 42] = [
    (0, 2), (0, 4), (0, 6), (0, 10), (1, 3), (1, 4), (1, 6), (1, 7), (1, 8), (1, 9), (1, 13), (1, 14),
    (2, 4), (2, 7), (2, 10), (2, 11), (2, 13), (3, 4), (3, 9), (3, 11), (4, 6), (4, 11), (5, 6), (5, 7),
    (5, 8), (5, 10), (5, 11), (5, 12), (5, 14), (6, 8), (6, 10), (7, 8), (7, 11), (7, 13), (9, 11),
    (9, 14), (10, 12), (10, 13), (11, 14), (12, 13), (12, 14), (13, 14),
];

/// A 15-vertex flag triangulation of the projective plane with chromatic
/// number 5. Vertices 5 and 11 are the only ones of odd degree.
pub fn projective_plane() -> SimplicialGraph {
    SimplicialGraph::from_edges(PROJECTIVE_EDGES)
}

/// Wheel `W_7` glued to the Möbius strip along its boundary cycle.
///
/// The boundary of the strip is the 7-cycle `0, 1, ..., 6` in strip labels
/// (the edges `(x, x + 1)`), matched to the rim of the wheel. Because the
/// rim is a cycle of the strip that is not its core, the result is a cone
/// over the strip rather than a surface; see [`projective_plane`] for a
/// genuine triangulation.
pub fn projective_plane_glued() -> SimplicialGraph {
    let w = wheel(7).expect("n = 7");
    let m = moebius();
    let map: BTreeMap<VertexId, VertexId> = (0..7).map(|x| (x, x)).collect();
    glue(&w, &m, &map).expect("rim matches strip boundary")
}

/// Pentakis dodecahedron: the icosahedron vertices `0..12` plus one vertex
/// per icosahedron face, joined to the face corners and to the vertices of
/// neighbouring faces. Icosahedron edges are removed. Returns the graph and
/// its fixed-point-free antipodal involution.
pub fn pentakis_dodecahedron() -> (SimplicialGraph, BTreeMap<VertexId, VertexId>) {
    let ico = icosahedron();
    let faces: Vec<Vec<VertexId>> = ico.simplices(2).to_vec();
    let mut g = SimplicialGraph::new();
    for (i, f) in faces.iter().enumerate() {
        let fv = 12 + i as VertexId;
        for &x in f {
            g.add_edge(fv, x);
        }
        for (j, h) in faces.iter().enumerate().skip(i + 1) {
            if f.iter().filter(|x| h.contains(x)).count() == 2 {
                g.add_edge(fv, 12 + j as VertexId);
            }
        }
    }
    let ico_antipode = |x: VertexId| match x {
        0 => 11,
        11 => 0,
        1..=5 => 6 + (x - 1 + 2) % 5,
        _ => 1 + (x - 6 + 3) % 5,
    };
    let mut map = BTreeMap::new();
    for x in 0..12 {
        map.insert(x, ico_antipode(x));
    }
    for (i, f) in faces.iter().enumerate() {
        let mut image: Vec<VertexId> = f.iter().map(|&x| ico_antipode(x)).collect();
        image.sort_unstable();
        let j = faces.iter().position(|h| *h == image).expect("antipodal face");
        map.insert(12 + i as VertexId, 12 + j as VertexId);
    }
    (g, map)
}

/// Quotient of a graph by a fixed-point-free involution. Orbit
/// representatives are the smaller ids, relabelled consecutively.
pub fn quotient(g: &SimplicialGraph, involution: &BTreeMap<VertexId, VertexId>) -> Result<(SimplicialGraph, BTreeMap<VertexId, VertexId>)> {
    let mut reps = BTreeMap::new();
    let mut next = 0;
    for v in g.vertices() {
        let w = *involution.get(&v).ok_or(Error::UnknownVertex(v))?;
        if w == v || involution.get(&w) != Some(&v) {
            return Err(Error::NotBijective(format!("{v} is not in a free orbit of size two")));
        }
        if v < w {
            reps.insert(v, next);
            next += 1;
        }
    }
    let project: BTreeMap<VertexId, VertexId> =
        g.vertices().map(|v| (v, reps[&v.min(involution[&v])])).collect();
    let mut q = SimplicialGraph::new();
    for v in g.vertices() {
        q.add_vertex(project[&v]);
    }
    for (a, b) in g.edges() {
        if project[&a] == project[&b] {
            return Err(Error::InvalidArgument(format!("edge ({a}, {b}) joins antipodes")));
        }
        q.add_edge(project[&a], project[&b]);
    }
    Ok((q, project))
}

/// Cube with a vertex added in the middle of every face. An Eulerian
/// two-sphere with 14 vertices.
pub fn capped_cube() -> SimplicialGraph {
    let mut g = SimplicialGraph::new();
    for v in 0..8u32 {
        for bit in [1, 2, 4] {
            let w = v ^ bit;
            if v < w {
                g.add_edge(v, w);
            }
        }
    }
    let mut center = 8;
    for bit in [1u32, 2, 4] {
        for side in [0, bit] {
            for v in (0..8u32).filter(|v| v & bit == side) {
                g.add_edge(center, v);
            }
            center += 1;
        }
    }
    g
}

/// Cone over a closed 2-dimensional (or 1-dimensional) geometric graph. The
/// apex is the next free id and the original vertices form the boundary.
pub fn cone(g: &SimplicialGraph) -> Result<HostComplex> {
    check_closed_surface(g)?;
    let apex = g.next_id();
    Ok(HostComplex { graph: g.cone(apex), boundary: g.vertex_set(), provenance: format!("cone with apex {apex}") })
}

fn check_closed_surface(g: &SimplicialGraph) -> Result<()> {
    let closed = match g.dimension() {
        1 => topology::is_circular(g),
        2 => g.vertices().all(|v| topology::is_circular(&g.unit_sphere(v).expect("vertex"))),
        _ => false,
    };
    if !closed || !g.is_connected() {
        return Err(Error::Precondition("expected a closed connected curve or surface".into()));
    }
    Ok(())
}

/// Product of `g` with a path of three vertices. Layer `l` holds vertex
/// `v + l * offset`, where `offset` is the next free id of `g`, so layer 0
/// keeps the labels of `g`. Besides the vertical edges, `x` in layer `l` is
/// joined to `y` in layer `l + 1` whenever `x < y` are adjacent. Layers 0
/// and 2 form the boundary.
pub fn self_cobordism(g: &SimplicialGraph) -> Result<HostComplex> {
    check_closed_surface(g)?;
    let offset = g.next_id();
    let id = |v: VertexId, l: u32| v + l * offset;
    let mut h = SimplicialGraph::new();
    for l in 0..3 {
        for v in g.vertices() {
            h.add_vertex(id(v, l));
        }
        for (a, b) in g.edges() {
            h.add_edge(id(a, l), id(b, l));
        }
    }
    for l in 0..2 {
        for v in g.vertices() {
            h.add_edge(id(v, l), id(v, l + 1));
        }
        for (a, b) in g.edges() {
            h.add_edge(id(a, l), id(b, l + 1));
        }
    }
    let boundary = g.vertices().flat_map(|v| [id(v, 0), id(v, 2)]).collect();
    Ok(HostComplex { graph: h, boundary, provenance: format!("three-layer prism, layer offset {offset}") })
}

/// True iff the boundary of the host has even Euler characteristic, as the
/// boundary of any 3-dimensional geometric graph must.
pub fn chi_parity_check(host: &HostComplex) -> bool {
    host.graph.induced(&host.boundary).euler_characteristic().rem_euclid(2) == 0
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "octahedron",
    "icosahedron",
    "cross4",
    "cross:<n>",
    "cycle:<n>",
    "wheel:<n>",
    "torus:<m>,<n>",
    "even-torus",
    "fisk",
    "moebius",
    "projective",
    "projective-glued",
    "pentakis",
    "pentakis-quotient",
    "capped-cube",
    "cone:<name>",
    "prism:<name>",
];

fn parse_u32(s: &str, name: &str) -> Result<u32> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?} in {name:?}")))
}

/// Look up a construction by name.
pub fn by_name(name: &str) -> Result<SimplicialGraph> {
    if let Some(rest) = name.strip_prefix("cone:").or_else(|| name.strip_prefix("prism:")) {
        return Ok(host_by_name(name).map_err(|e| match e {
            Error::Parse(_) => Error::Parse(format!("unknown construction {rest:?}")),
            e => e,
        })?
        .graph);
    }
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    match (head, arg) {
        ("octahedron", None) => Ok(octahedron()),
        ("icosahedron", None) => Ok(icosahedron()),
        ("cross4", None) => cross_polytope(4),
        ("cross", Some(a)) => cross_polytope(parse_u32(a, name)?),
        ("cycle", Some(a)) => cycle(parse_u32(a, name)?),
        ("wheel", Some(a)) => wheel(parse_u32(a, name)?),
        ("torus", Some(a)) => {
            let (m, n) = a.split_once(',').ok_or_else(|| Error::Parse(format!("expected torus:m,n, got {name:?}")))?;
            flat_torus(parse_u32(m, name)?, parse_u32(n, name)?)
        }
        ("even-torus", None) => Ok(even_torus()),
        ("fisk", None) => Ok(fisk_torus()),
        ("moebius", None) => Ok(moebius()),
        ("projective", None) => Ok(projective_plane()),
        ("projective-glued", None) => Ok(projective_plane_glued()),
        ("pentakis", None) => Ok(pentakis_dodecahedron().0),
        ("pentakis-quotient", None) => {
            let (g, inv) = pentakis_dodecahedron();
            Ok(quotient(&g, &inv)?.0)
        }
        ("capped-cube", None) => Ok(capped_cube()),
        _ => Err(Error::Parse(format!("unknown construction {name:?}"))),
    }
}

/// Host complex by name: `cone:<name>` or `prism:<name>`.
pub fn host_by_name(name: &str) -> Result<HostComplex> {
    if let Some(rest) = name.strip_prefix("cone:") {
        cone(&by_name(rest)?)
    } else if let Some(rest) = name.strip_prefix("prism:") {
        self_cobordism(&by_name(rest)?)
    } else {
        Err(Error::Parse(format!("host names start with cone: or prism:, got {name:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{is_s2_fast, Kind};

    fn degrees(g: &SimplicialGraph) -> Vec<usize> {
        g.vertices().map(|v| g.degree(v).unwrap()).collect()
    }

    fn closed_surface(g: &SimplicialGraph) -> bool {
        g.vertices().all(|v| topology::is_circular(&g.unit_sphere(v).unwrap()))
    }

    #[test]
    fn platonic() {
        assert_eq!(octahedron().f_vector().0, vec![6, 12, 8]);
        assert_eq!(icosahedron().f_vector().0, vec![12, 30, 20]);
        assert!(is_s2_fast(&icosahedron()));
        assert!(degrees(&icosahedron()).iter().all(|&d| d == 5));
        assert_eq!(cross_polytope(4).unwrap().f_vector().0, vec![8, 24, 32, 16]);
        assert!(cross_polytope(1).is_err());
    }

    #[test]
    fn wheel_labels() {
        let w = wheel(6).unwrap();
        assert_eq!(w.degree(6).unwrap(), 6);
        assert!(wheel(3).is_err());
    }

    #[test]
    fn tori() {
        let t = flat_torus(4, 5).unwrap();
        assert_eq!(t.euler_characteristic(), 0);
        assert!(closed_surface(&t));
        let e = even_torus();
        assert_eq!(e.f_vector().0, vec![13, 39, 26]);
        assert!(closed_surface(&e));
    }

    #[test]
    fn fisk_log_round_trip() {
        let (mut g, log) = fisk_torus_with_log();
        assert_eq!(g.f_vector().0, vec![15, 45, 30]);
        assert!(closed_surface(&g));
        let odd: Vec<_> = g.vertices().filter(|&v| g.degree(v).unwrap() % 2 == 1).collect();
        assert_eq!(odd, vec![0, 10]);
        assert!(g.adjacent(0, 10));
        for s in log.iter().rev() {
            undo_subdivision(&mut g, *s).unwrap();
        }
        assert_eq!(g, even_torus());
    }

    #[test]
    fn moebius_counts() {
        let m = moebius();
        assert_eq!(m.f_vector().0, vec![7, 14, 7]);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn projective_plane_is_a_surface() {
        let p = projective_plane();
        assert_eq!(p.f_vector().0, vec![15, 42, 28]);
        assert_eq!(p.euler_characteristic(), 1);
        assert!(closed_surface(&p));
        let odd: Vec<_> = p.vertices().filter(|&v| p.degree(v).unwrap() % 2 == 1).collect();
        assert_eq!(odd, vec![5, 11]);
    }

    #[test]
    fn glued_projective_plane_is_a_cone() {
        let g = projective_plane_glued();
        assert_eq!(g.f_vector().0, vec![8, 21, 21, 7]);
        assert!(topology::is_contractible(&g));
    }

    #[test]
    fn pentakis_and_quotient() {
        let (g, inv) = pentakis_dodecahedron();
        assert_eq!(g.f_vector().0, vec![32, 90, 60]);
        assert!(is_s2_fast(&g));
        for (a, b) in g.edges() {
            assert!(g.adjacent(inv[&a], inv[&b]));
        }
        let (q, _) = quotient(&g, &inv).unwrap();
        assert_eq!(q.f_vector().0, vec![16, 45, 30]);
        assert_eq!(q.euler_characteristic(), 1);
        assert!(closed_surface(&q));
    }

    #[test]
    fn capped_cube_is_eulerian_sphere() {
        let g = capped_cube();
        assert_eq!(g.vertex_count(), 14);
        assert!(is_s2_fast(&g));
        assert!(degrees(&g).iter().all(|d| d % 2 == 0));
    }

    #[test]
    fn hosts() {
        let h = cone(&octahedron()).unwrap();
        assert_eq!(h.graph.vertex_count(), 7);
        assert_eq!(topology::geometric3_boundary_fast(&h.graph), Some(h.boundary.clone()));
        assert!(chi_parity_check(&h));
        let p = self_cobordism(&octahedron()).unwrap();
        assert_eq!(p.graph.vertex_count(), 18);
        assert_eq!(p.graph.dimension(), 3);
        assert_eq!(topology::geometric3_boundary_fast(&p.graph), Some(p.boundary.clone()));
        assert!(chi_parity_check(&p));
        assert!(cone(&SimplicialGraph::from_edges([(0, 1)])).is_err());
        let c = topology::classify(&h.graph, 3).unwrap();
        assert_eq!(c.kind, Kind::Ball);
    }

    #[test]
    fn names() {
        assert_eq!(by_name("wheel:5").unwrap(), wheel(5).unwrap());
        assert_eq!(by_name("cone:octahedron").unwrap().vertex_count(), 7);
        assert!(by_name("nonsense").is_err());
        assert!(by_name("torus:4").is_err());
    }
}
