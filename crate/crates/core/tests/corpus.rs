use std::collections::BTreeMap;

use chromacut::coloring;
use chromacut::constructions::{self, by_name};
use chromacut::graph::{glue, SimplicialGraph};
use chromacut::topology::{self, Kind};

#[test]
fn quotient_colorings_lift() {
    let (g, antipode) = constructions::pentakis_dodecahedron();
    let (q, project) = constructions::quotient(&g, &antipode).unwrap();
    assert_eq!((g.vertex_count(), q.vertex_count()), (32, 16));
    let qc = coloring::optimal_coloring(&q).unwrap();
    let lifted: BTreeMap<_, _> = g.vertices().map(|v| (v, qc.assignment[&project[&v]])).collect();
    assert_eq!(coloring::first_conflict(&g, &lifted), None);
    assert!(coloring::chromatic_number(&g).unwrap() <= qc.colors_used as u32);
}

#[test]
fn fisk_torus_is_critical_at_its_odd_vertices() {
    let g = constructions::fisk_torus();
    let odd: Vec<_> = g.vertices().filter(|&v| g.degree(v).unwrap() % 2 == 1).collect();
    assert_eq!(odd, vec![0, 10]);
    assert!(g.adjacent(0, 10));
    assert!(!coloring::is_colorable(&g, 4).unwrap());
    for v in odd {
        assert!(coloring::is_colorable(&g.without_vertex(v), 4).unwrap(), "removing {v}");
    }
}

#[test]
fn fisk_log_unwinds_to_the_even_torus() {
    let (mut g, log) = constructions::fisk_torus_with_log();
    for s in log.into_iter().rev() {
        constructions::undo_subdivision(&mut g, s).unwrap();
    }
    assert_eq!(g, constructions::even_torus());
    assert!(g.vertices().all(|v| g.degree(v).unwrap() == 6));
    assert_eq!(coloring::chromatic_number(&g).unwrap(), 5);
}

#[test]
fn level_curves_of_sphere_colorings_are_cycles() {
    for (name, c) in [("octahedron", 0.5), ("icosahedron", 1.5), ("capped-cube", 0.5)] {
        let g = by_name(name).unwrap();
        let f = coloring::optimal_coloring(&g).unwrap();
        let curve = coloring::level_curve(&g, &f, c).unwrap();
        assert!(!curve.is_empty(), "{name}");
        for comp in curve.components() {
            assert!(topology::is_circular(&curve.induced(&comp)), "{name}: component {comp:?}");
        }
    }
}

#[test]
fn level_curve_rejects_bad_thresholds() {
    let g = constructions::octahedron();
    let f = coloring::optimal_coloring(&g).unwrap();
    assert!(coloring::level_curve(&g, &f, 1.0).is_err());
    assert!(coloring::level_curve(&g, &f, 7.5).is_err());
}

#[test]
fn eulerian_spheres_are_three_colorable() {
    for name in ["octahedron", "capped-cube"] {
        let g = by_name(name).unwrap();
        assert!(coloring::is_eulerian(&g));
        let c = coloring::eulerian_three_color(&g).unwrap();
        assert!(c.is_proper() && c.colors_used == 3, "{name}");
    }
    assert!(coloring::eulerian_three_color(&constructions::icosahedron()).is_err());
}

#[test]
fn kempe_handles_planar_corpus() {
    for name in ["octahedron", "icosahedron", "capped-cube", "pentakis"] {
        let g = by_name(name).unwrap();
        let c = (0..8).find_map(|seed| coloring::kempe_greedy(&g, 5, seed)).unwrap_or_else(|| panic!("{name}"));
        assert!(c.is_proper());
    }
}

#[test]
fn wheel_glued_to_moebius_is_contractible() {
    let w = constructions::wheel(7).unwrap();
    let m = constructions::moebius();
    let id: BTreeMap<_, _> = m.vertices().map(|v| (v, v)).collect();
    let g = glue(&w, &m, &id).unwrap();
    assert_eq!(g.f_vector().0, vec![8, 21, 21, 7]);
    assert!(topology::is_contractible(&g));
}

#[test]
fn projective_planes_agree() {
    let rp2 = constructions::projective_plane();
    assert_eq!(rp2.euler_characteristic(), 1);
    let c = topology::classify(&rp2, 2).unwrap();
    assert_eq!((c.kind, c.dim), (Kind::Geometric, 2));
    let glued = constructions::projective_plane_glued();
    assert_eq!(glued.euler_characteristic(), 1);
}

#[test]
fn hosts_bound_their_surfaces() {
    for name in ["cone:octahedron", "cone:icosahedron", "prism:octahedron", "prism:torus:4,4"] {
        let h = constructions::host_by_name(name).unwrap();
        let b: SimplicialGraph = h.graph.induced(&h.boundary);
        assert_eq!(h.dim(), 3, "{name}");
        assert_eq!(topology::geometric3_boundary_fast(&h.graph), Some(h.boundary.clone()), "{name}");
        assert!(b.dimension() == 2, "{name}");
    }
}
