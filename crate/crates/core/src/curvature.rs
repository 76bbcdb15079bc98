//! Vertex curvature, Poincaré–Hopf indices, edge degrees and the odd-edge
//! functional.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Simplex, SimplicialGraph, VertexId};
use crate::scalar::{ratio, Rational};
use crate::topology;

/// `K(x) = Σ_k (-1)^k V_{k-1}(x) / (k+1)` with `V_{-1} = 1`.
pub fn vertex_curvature(g: &SimplicialGraph, x: VertexId) -> Result<Rational> {
    let s = g.unit_sphere(x)?;
    let mut k = Rational::from_integer(1.into());
    for (j, &count) in s.f_vector().0.iter().enumerate() {
        let term = ratio(count as i64, j as i64 + 2);
        if j % 2 == 0 {
            k -= term;
        } else {
            k += term;
        }
    }
    Ok(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussBonnet {
    pub sum: Rational,
    pub chi: i64,
    pub ok: bool,
}

pub fn gauss_bonnet(g: &SimplicialGraph) -> GaussBonnet {
    let sum = g
        .vertices()
        .map(|x| vertex_curvature(g, x).expect("vertex of g"))
        .fold(Rational::zero(), |a, b| a + b);
    let chi = g.euler_characteristic();
    let ok = sum == Rational::from_integer(chi.into());
    GaussBonnet { sum, chi, ok }
}

fn check_locally_injective(g: &SimplicialGraph, f: &BTreeMap<VertexId, i64>) -> Result<()> {
    for v in g.vertices() {
        if !f.contains_key(&v) {
            return Err(Error::InvalidArgument(format!("function has no value at vertex {v}")));
        }
    }
    for (a, b) in g.edges() {
        if f[&a] == f[&b] {
            return Err(Error::NotLocallyInjective(a, b));
        }
    }
    Ok(())
}

fn index_unchecked(g: &SimplicialGraph, f: &BTreeMap<VertexId, i64>, x: VertexId) -> Result<i64> {
    let below: BTreeSet<VertexId> = g.neighbors(x)?.iter().copied().filter(|y| f[y] < f[&x]).collect();
    Ok(1 - g.induced(&below).euler_characteristic())
}

/// `i_f(x) = 1 - χ(S^-(x))` where `S^-(x)` holds the neighbors with smaller value.
pub fn poincare_hopf_index(g: &SimplicialGraph, f: &BTreeMap<VertexId, i64>, x: VertexId) -> Result<i64> {
    check_locally_injective(g, f)?;
    index_unchecked(g, f, x)
}

pub fn index_sum(g: &SimplicialGraph, f: &BTreeMap<VertexId, i64>) -> Result<i64> {
    check_locally_injective(g, f)?;
    g.vertices().map(|x| index_unchecked(g, f, x)).sum()
}

/// Average the index of every vertex over all proper colorings with
/// `colors` colors and compare with the curvature, exactly.
pub fn curvature_is_color_index_expectation(g: &SimplicialGraph, colors: usize) -> Result<bool> {
    const BUDGET: u64 = 20_000_000;
    let order: Vec<VertexId> = g.vertices().collect();
    let mut sums: BTreeMap<VertexId, i64> = order.iter().map(|&v| (v, 0)).collect();
    let mut count: i64 = 0;
    let mut steps: u64 = 0;
    let mut f: BTreeMap<VertexId, i64> = BTreeMap::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &SimplicialGraph,
        order: &[VertexId],
        i: usize,
        colors: usize,
        f: &mut BTreeMap<VertexId, i64>,
        sums: &mut BTreeMap<VertexId, i64>,
        count: &mut i64,
        steps: &mut u64,
    ) -> Result<()> {
        *steps += 1;
        if *steps > BUDGET {
            return Err(Error::Budget(format!("more than {BUDGET} partial colorings")));
        }
        if i == order.len() {
            *count += 1;
            for &x in order {
                *sums.get_mut(&x).expect("vertex") += index_unchecked(g, f, x)?;
            }
            return Ok(());
        }
        let v = order[i];
        for c in 0..colors as i64 {
            let clash = g.neighbors(v)?.iter().any(|w| f.get(w) == Some(&c));
            if !clash {
                f.insert(v, c);
                rec(g, order, i + 1, colors, f, sums, count, steps)?;
                f.remove(&v);
            }
        }
        Ok(())
    }

    rec(g, &order, 0, colors, &mut f, &mut sums, &mut count, &mut steps)?;
    if count == 0 {
        return Err(Error::Precondition(format!("graph has no proper {colors}-coloring")));
    }
    for &x in &order {
        if ratio(sums[&x], count) != vertex_curvature(g, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    Interior,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeReport {
    pub edge: Edge,
    pub kind: EdgeKind,
    pub degree: usize,
    pub ricci: Rational,
    pub distance_to_boundary: usize,
}

/// Number of vertices adjacent to every vertex of `face`.
pub fn hinge_degree(g: &SimplicialGraph, face: &[VertexId]) -> usize {
    common_neighbors(g, face).len()
}

fn common_neighbors(g: &SimplicialGraph, face: &[VertexId]) -> BTreeSet<VertexId> {
    let mut it = face.iter();
    let Some(first) = it.next() else {
        return g.vertex_set();
    };
    let mut common = g.neighbors(*first).cloned().unwrap_or_default();
    for v in it {
        let nb = g.neighbors(*v).cloned().unwrap_or_default();
        common = common.intersection(&nb).copied().collect();
    }
    common
}

/// The link of a face: the subgraph induced on its common neighbors.
pub fn face_link(g: &SimplicialGraph, face: &[VertexId]) -> SimplicialGraph {
    g.induced(&common_neighbors(g, face))
}

/// A face is interior when its link is a cycle, boundary when it is a path.
pub fn hinge_kind(g: &SimplicialGraph, face: &[VertexId]) -> Option<EdgeKind> {
    let link = face_link(g, face);
    if topology::is_circular(&link) {
        Some(EdgeKind::Interior)
    } else if topology::is_path_graph(&link) || link.vertex_count() == 2 && link.edge_count() == 1 {
        Some(EdgeKind::Boundary)
    } else {
        None
    }
}

/// Geodesic distance of every vertex to `boundary`; all zero when it is empty.
pub fn boundary_distances(g: &SimplicialGraph, boundary: &BTreeSet<VertexId>) -> BTreeMap<VertexId, usize> {
    if boundary.is_empty() {
        return g.vertices().map(|v| (v, 0)).collect();
    }
    g.distances_from(boundary.iter().copied())
}

fn face_distance(dist: &BTreeMap<VertexId, usize>, face: &[VertexId]) -> usize {
    face.iter().map(|v| dist.get(v).copied().unwrap_or(usize::MAX)).max().unwrap_or(0)
}

/// Odd-degree interior faces of codimension 2 (vertices for `d = 2`, edges
/// for `d = 3`) and the functional `φ`.
///
/// `φ` sums the distance of each odd face to the boundary. When the boundary
/// is empty the functional falls back to the number of odd faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddSet {
    pub faces: BTreeSet<Simplex>,
    pub phi: u64,
}

impl OddSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

pub fn odd_faces(g: &SimplicialGraph, d: usize, boundary: &BTreeSet<VertexId>) -> OddSet {
    let dist = boundary_distances(g, boundary);
    let mut faces = BTreeSet::new();
    let mut phi = 0u64;
    for face in g.simplices(d - 2) {
        let link = face_link(g, face);
        if link.vertex_count() % 2 == 1 && topology::is_circular(&link) {
            phi += face_distance(&dist, face) as u64;
            faces.insert(face.clone());
        }
    }
    if boundary.is_empty() {
        phi = faces.len() as u64;
    }
    OddSet { faces, phi }
}

/// Boundary of a 3-dimensional geometric graph, or an error.
pub fn host_boundary(g: &SimplicialGraph) -> Result<BTreeSet<VertexId>> {
    if g.dimension() != 3 {
        return Err(Error::Precondition(format!("expected a 3-dimensional graph, found dimension {}", g.dimension())));
    }
    topology::geometric3_boundary_fast(g)
        .ok_or_else(|| Error::Precondition("graph is not 3-dimensional geometric".into()))
}

pub fn edge_report(g: &SimplicialGraph, e: Edge) -> Result<EdgeReport> {
    let boundary = host_boundary(g)?;
    edge_report_with(g, &boundary_distances(g, &boundary), e)
}

fn edge_report_with(g: &SimplicialGraph, dist: &BTreeMap<VertexId, usize>, e: Edge) -> Result<EdgeReport> {
    let (a, b) = edge(e.0, e.1);
    if !g.adjacent(a, b) {
        return Err(Error::UnknownEdge(a, b));
    }
    let face = [a, b];
    let kind = hinge_kind(g, &face)
        .ok_or_else(|| Error::Precondition(format!("link of edge ({a}, {b}) is neither a cycle nor a path")))?;
    let degree = hinge_degree(g, &face);
    Ok(EdgeReport {
        edge: (a, b),
        kind,
        degree,
        ricci: Rational::from_integer(1.into()) - ratio(degree as i64, 6),
        distance_to_boundary: face_distance(dist, &face),
    })
}

pub fn edge_reports(g: &SimplicialGraph) -> Result<Vec<EdgeReport>> {
    let boundary = host_boundary(g)?;
    let dist = boundary_distances(g, &boundary);
    g.edges().into_iter().map(|e| edge_report_with(g, &dist, e)).collect()
}

pub fn odd_edge_set(g: &SimplicialGraph) -> Result<BTreeSet<Edge>> {
    let boundary = host_boundary(g)?;
    Ok(odd_faces(g, 3, &boundary).faces.into_iter().map(|f| (f[0], f[1])).collect())
}

pub fn phi(g: &SimplicialGraph) -> Result<u64> {
    let boundary = host_boundary(g)?;
    Ok(odd_faces(g, 3, &boundary).phi)
}
