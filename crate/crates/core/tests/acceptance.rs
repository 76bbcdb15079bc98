//! Acceptance run: seven criteria, one line each. Exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chromacut::coloring::{self, Driver, Polynomial, Strategy};
use chromacut::constructions::{self, by_name, host_by_name};
use chromacut::curvature;
use chromacut::graph::{SimplicialGraph, VertexId};
use chromacut::hodge::{self, SurfaceSolution};
use chromacut::refine::{GreedyOptions, Outcome, RefinementSession, Schedule};
use chromacut::topology::{self, Kind};
use chromacut::{Gf2Chain, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> std::result::Result<(), String> {
    let spent = start.elapsed();
    ensure!(spent <= limit, "{what} took {spent:?}, limit {limit:?}");
    Ok(())
}

fn poly(coeffs: &[i64]) -> Polynomial {
    Polynomial::from_i64(coeffs)
}

fn moebius_fixture() -> Check {
    let start = Instant::now();
    let g = constructions::moebius();
    ensure!(g.f_vector().0 == vec![7, 14, 7], "f-vector {:?}", g.f_vector().0);
    ensure!(g.euler_characteristic() == 0, "euler {}", g.euler_characteristic());
    let b = hodge::betti_numbers(&g);
    ensure!(b == vec![1, 1, 0], "betti {b:?}");

    let l0 = hodge::spectrum::<f64>(&g, 0, 1e-9).map_err(|e| e.to_string())?;
    let expected = [6.24698, 6.24698, 4.55496, 4.55496, 3.19806, 3.19806, 0.0];
    ensure!(l0.eigenvalues.len() == 7, "L0 has {} eigenvalues", l0.eigenvalues.len());
    for (got, want) in l0.eigenvalues.iter().zip(expected) {
        ensure!((got - want).abs() < 1e-4, "L0 eigenvalue {got} vs {want}");
    }

    let factor = poly(&[0, 1]).mul(&poly(&[-1, 1])).mul(&poly(&[-2, 1])).mul(&poly(&[-3, 1])).mul(&poly(&[-29, 25, -8, 1]));
    let p = coloring::chromatic_polynomial(&g).map_err(|e| e.to_string())?;
    ensure!(p == factor, "chromatic polynomial {p}");
    ensure!(p.eval(4) == BigInt::from(168), "P(4) = {}", p.eval(4));

    let l2 = hodge::laplacian::<Rational>(&g, 2);
    ensure!(l2.is_invertible(), "L2 is singular");

    let kernel = hodge::laplacian::<Rational>(&g, 1).kernel();
    ensure!(kernel.len() == 1, "L1 kernel has dimension {}", kernel.len());
    let v = &kernel[0];
    let unit = v.iter().filter(|x| !x.is_zero()).map(|x| x.abs()).min().ok_or("zero kernel vector")?;
    let mut scaled: Vec<Rational> = v.iter().map(|x| x.abs() / &unit).collect();
    scaled.sort();
    let mut printed: Vec<Rational> =
        [1, -2, 2, -1, 1, 2, -1, -2, 2, -1, 1, -1, 2, 2].iter().map(|&x| Rational::from_integer(BigInt::from(x).abs())).collect();
    printed.sort();
    ensure!(scaled == printed, "harmonic form magnitudes {scaled:?}");
    within(start, Duration::from_secs(1), "moebius suite")?;
    Ok(format!("P = {p}, L0 and harmonic form match"))
}

fn corpus() -> Vec<(&'static str, SimplicialGraph)> {
    let mut out: Vec<(&'static str, SimplicialGraph)> = [
        "octahedron",
        "icosahedron",
        "cross4",
        "torus:4,4",
        "torus:5,5",
        "torus:6,6",
        "fisk",
        "moebius",
        "projective",
        "capped-cube",
        "pentakis-quotient",
    ]
    .into_iter()
    .map(|n| (n, by_name(n).expect("corpus name")))
    .collect();
    for n in ["cone:octahedron", "cone:icosahedron", "prism:octahedron", "prism:icosahedron"] {
        out.push((n, host_by_name(n).expect("host").graph));
    }
    out
}

fn gauss_bonnet_suite() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let graphs = corpus();
    for (name, g) in &graphs {
        let gb = curvature::gauss_bonnet(g);
        ensure!(gb.ok, "{name}: curvature sum {} vs euler {}", gb.sum, gb.chi);
        let mut values: Vec<i64> = (0..g.vertex_count() as i64).collect();
        for _ in 0..100 {
            values.shuffle(&mut rng);
            let f: BTreeMap<VertexId, i64> = g.vertices().zip(values.iter().copied()).collect();
            let s = curvature::index_sum(g, &f).map_err(|e| e.to_string())?;
            ensure!(s == gb.chi, "{name}: index sum {s} vs euler {}", gb.chi);
        }
    }
    let c5 = constructions::cycle(5).map_err(|e| e.to_string())?;
    for (name, g, colors) in [("octahedron", constructions::octahedron(), 3), ("octahedron", constructions::octahedron(), 4), ("C5", c5, 3)] {
        let ok = curvature::curvature_is_color_index_expectation(&g, colors).map_err(|e| e.to_string())?;
        ensure!(ok, "{name}: curvature differs from the {colors}-color index expectation");
    }
    within(start, Duration::from_secs(60), "gauss-bonnet suite")?;
    Ok(format!("{} graphs, 100 index functions each", graphs.len()))
}

fn four_connected(g: &SimplicialGraph) -> bool {
    let vs: Vec<VertexId> = g.vertices().collect();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            for k in j + 1..vs.len() {
                let mut h = g.clone();
                h.remove_vertex(vs[i]);
                h.remove_vertex(vs[j]);
                h.remove_vertex(vs[k]);
                if !h.is_connected() {
                    return false;
                }
            }
        }
    }
    true
}

fn classification_suite() -> Check {
    let kind = |g: &SimplicialGraph, max: i32| topology::classify(g, max).map_err(|e| e.to_string());
    for name in ["octahedron", "icosahedron"] {
        let c = kind(&by_name(name).expect("name"), 2)?;
        ensure!(c.kind == Kind::Sphere && c.dim == 2, "{name}: {:?} {}", c.kind, c.dim);
    }
    let c = kind(&by_name("cross4").expect("name"), 3)?;
    ensure!(c.kind == Kind::Sphere && c.dim == 3, "16-cell: {:?} {}", c.kind, c.dim);
    for n in 4..=9 {
        let c = kind(&constructions::wheel(n).expect("wheel"), 2)?;
        ensure!(c.kind == Kind::Ball && c.dim == 2, "wheel {n}: {:?} {}", c.kind, c.dim);
    }
    let c = kind(&host_by_name("cone:octahedron").expect("host").graph, 3)?;
    ensure!(c.kind == Kind::Ball && c.dim == 3, "cone(octahedron): {:?} {}", c.kind, c.dim);
    for (m, n) in [(4, 4), (4, 5), (5, 5), (6, 6)] {
        let c = kind(&constructions::flat_torus(m, n).expect("torus"), 2)?;
        ensure!(c.kind == Kind::Geometric && c.dim == 2 && c.boundary.is_empty(), "torus {m}x{n}: {:?}", c.kind);
    }
    let mut threes: Vec<(String, SimplicialGraph, BTreeSet<VertexId>)> = Vec::new();
    threes.push(("cross4".into(), by_name("cross4").expect("name"), BTreeSet::new()));
    for n in ["cone:octahedron", "cone:icosahedron", "prism:octahedron", "prism:icosahedron", "cone:pentakis"] {
        let h = host_by_name(n).expect("host");
        threes.push((n.into(), h.graph, h.boundary));
    }
    let mut s = RefinementSession::new(host_by_name("cone:icosahedron").expect("host")).map_err(|e| e.to_string())?;
    s.greedy_reduce(GreedyOptions { budget: 40, lookahead: 2 });
    threes.push(("refined cone(icosahedron)".into(), s.graph().clone(), s.boundary().clone()));
    for (name, g, boundary) in &threes {
        for v in g.vertices().filter(|v| !boundary.contains(v)) {
            let k = curvature::vertex_curvature(g, v).map_err(|e| e.to_string())?;
            ensure!(k.is_zero(), "{name}: interior vertex {v} has curvature {k}");
        }
    }
    for name in ["octahedron", "icosahedron", "capped-cube", "pentakis"] {
        let g = by_name(name).expect("name");
        ensure!(topology::is_s2_fast(&g), "{name}: not a two-sphere");
        ensure!(g.edge_count() == 3 * g.vertex_count() - 6, "{name}: e != 3v - 6");
        ensure!(four_connected(&g), "{name}: not 4-connected");
    }
    Ok(format!("{} three-dimensional graphs flat inside", threes.len()))
}

fn chromatic_suite() -> Check {
    let start = Instant::now();
    let cases = [("octahedron", 3), ("icosahedron", 4), ("torus:6,6", 3), ("torus:4,4", 4), ("fisk", 5)];
    for (name, want) in cases {
        let got = coloring::chromatic_number(&by_name(name).expect("name")).map_err(|e| e.to_string())?;
        ensure!(got == want, "{name}: chromatic number {got}, expected {want}");
    }
    let t55 = coloring::chromatic_number(&by_name("torus:5,5").expect("name")).map_err(|e| e.to_string())?;
    ensure!(t55 >= 4, "T(5,5): chromatic number {t55}");
    let p = coloring::chromatic_polynomial(&constructions::icosahedron()).map_err(|e| e.to_string())?;
    ensure!(p.eval(4) == BigInt::from(240), "icosahedron P(4) = {}", p.eval(4));
    let rp2 = constructions::projective_plane();
    let chi = coloring::chromatic_number(&rp2).map_err(|e| e.to_string())?;
    let prp2 = coloring::chromatic_polynomial(&rp2).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(300), "chromatic suite")?;
    Ok(format!(
        "T(5,5) = {t55}; projective plane ({} vertices) has chromatic number {chi}, P(5) = {}",
        rp2.vertex_count(),
        prp2.eval(5)
    ))
}

fn odd_chain(s: &RefinementSession) -> std::result::Result<Gf2Chain, String> {
    let odd = s.odd();
    Gf2Chain::indicator(s.graph(), 1, odd.faces.iter()).map_err(|e| e.to_string())
}

fn parity(s: &RefinementSession) -> BTreeSet<Vec<VertexId>> {
    s.odd().faces
}

fn interior_edge(g: &SimplicialGraph, a: VertexId, b: VertexId) -> bool {
    curvature::hinge_kind(g, &[a, b]) == Some(curvature::EdgeKind::Interior)
}

fn check_state(s: &RefinementSession, label: &str) -> std::result::Result<(), String> {
    ensure!(s.boundary_unchanged(), "{label}: boundary graph changed");
    let chain = odd_chain(s)?;
    ensure!(hodge::is_relative_cycle(s.graph(), &chain, s.boundary()), "{label}: O is not a cycle");
    match hodge::solve_surface_relative(s.graph(), &chain, s.boundary()).map_err(|e| e.to_string())? {
        SurfaceSolution::Surface(c) => {
            let b = hodge::z2_boundary(s.graph(), &c);
            let bad = s
                .graph()
                .simplices(1)
                .iter()
                .zip(b.coeffs.iter().zip(&chain.coeffs))
                .any(|(e, (x, y))| x != y && !e.iter().all(|v| s.boundary().contains(v)));
            ensure!(!bad, "{label}: surface boundary differs from O");
        }
        SurfaceSolution::Unsolvable => return Err(format!("{label}: no surface bounds O")),
    }
    Ok(())
}

fn refinement_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let hosts = ["cone:octahedron", "cone:icosahedron", "prism:octahedron", "cone:pentakis"];
    let mut cuts = 0;
    let mut runs = 0;
    while cuts < 500 {
        let name = hosts[runs % hosts.len()];
        runs += 1;
        let mut s = RefinementSession::new(host_by_name(name).expect("host")).map_err(|e| e.to_string())?;
        check_state(&s, name)?;
        for _ in 0..25 {
            let legal = s.legal_cuts();
            let &(a, b) = legal.choose(&mut rng).ok_or("no legal cut")?;
            let link: BTreeSet<VertexId> =
                s.graph().neighbors(a).unwrap().intersection(s.graph().neighbors(b).unwrap()).copied().collect();
            let before = parity(&s);
            let rec = s.edge_cut(a, b).map_err(|e| e.to_string())?;
            let v = rec.cuts[0].v;
            cuts += 1;
            let after = parity(&s);
            let was_odd = before.contains(&vec![a, b]);
            for x in [a, b] {
                let mut key = vec![x, v];
                key.sort_unstable();
                ensure!(after.contains(&key) == was_odd, "{name}: edge ({x}, {v}) parity after cutting ({a}, {b})");
            }
            for &x in &link {
                let mut key = vec![x, v];
                key.sort_unstable();
                ensure!(!after.contains(&key), "{name}: edge ({x}, {v}) odd after cutting ({a}, {b})");
            }
            let old_after: BTreeSet<Vec<VertexId>> = after.iter().filter(|f| !f.contains(&v)).cloned().collect();
            let mut delta: BTreeSet<Vec<VertexId>> = before.symmetric_difference(&old_after).cloned().collect();
            delta.remove(&vec![a, b]);
            let expected: BTreeSet<Vec<VertexId>> = s
                .graph()
                .edges()
                .into_iter()
                .filter(|&(x, y)| link.contains(&x) && link.contains(&y) && interior_edge(s.graph(), x, y))
                .map(|(x, y)| vec![x, y])
                .collect();
            ensure!(delta == expected, "{name}: parity change after cutting ({a}, {b}) is {delta:?}, expected {expected:?}");
            check_state(&s, name)?;
        }
    }
    let mut moves16 = 0;
    for name in ["cone:icosahedron", "cone:octahedron", "prism:octahedron"] {
        let mut s = RefinementSession::new(host_by_name(name).expect("host")).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let tets = s.graph().simplices(3).to_vec();
            let t = tets[rng.gen_range(0..tets.len())].clone();
            let before = parity(&s);
            let edges_before = s.graph().edges();
            let Ok(rec) = s.tetra_to_16cell([t[0], t[1], t[2], t[3]]) else { continue };
            moves16 += 1;
            let after = parity(&s);
            for (x, y) in edges_before {
                if s.graph().adjacent(x, y) {
                    let key = vec![x, y];
                    ensure!(before.contains(&key) == after.contains(&key), "{name}: 16-cell move changed parity of ({x}, {y})");
                }
            }
            let first = rec.cuts[0];
            let removed_odd = before.contains(&vec![first.a, first.b]);
            for pair in [[first.a, rec.cuts[1].v], [rec.cuts[1].v, first.v], [first.b, first.v]] {
                let mut key = pair.to_vec();
                key.sort_unstable();
                ensure!(after.contains(&key) == removed_odd, "{name}: 16-cell move path edge parity");
            }
            check_state(&s, name)?;
        }
    }
    Ok(format!("{cuts} cuts over {runs} runs, {moves16} 16-cell moves"))
}

fn end_to_end_suite() -> Check {
    let oct = constructions::octahedron();
    let run = coloring::color_boundary_via_host(&oct, Strategy::Cone, &Driver::Greedy(GreedyOptions::default()))
        .map_err(|e| e.to_string())?;
    ensure!(run.outcome == Outcome::Solved && run.session.cut_count() == 0, "cone(octahedron) needed refinement");
    let c = run.coloring.ok_or("no coloring")?;
    ensure!(c.is_proper() && c.colors_used <= 4, "octahedron coloring {:?}", c.status);

    let ico = constructions::icosahedron();
    let run = coloring::color_boundary_via_host(&ico, Strategy::Cone, &Driver::Greedy(GreedyOptions { budget: 200, lookahead: 2 }))
        .map_err(|e| e.to_string())?;
    ensure!(run.outcome == Outcome::Solved, "cone(icosahedron) greedy: {}", run.outcome);
    let c = run.coloring.ok_or("no coloring")?;
    ensure!(c.is_proper() && c.colors_used <= 4, "icosahedron coloring {:?}", c.status);
    ensure!(coloring::first_conflict(&ico, &c.assignment).is_none(), "icosahedron edge scan failed");
    let ico_cuts = run.session.cut_count();

    for n in 4..=15u32 {
        let g = constructions::cycle(n).map_err(|e| e.to_string())?;
        let run = coloring::color_boundary_via_host(&g, Strategy::Cone, &Driver::Greedy(GreedyOptions { budget: 2, lookahead: 2 }))
            .map_err(|e| e.to_string())?;
        ensure!(run.outcome == Outcome::Solved, "disc over C_{n}: {}", run.outcome);
        ensure!(run.session.cut_count() <= 2, "disc over C_{n}: {} subdivisions", run.session.cut_count());
        let c = run.coloring.ok_or("no coloring")?;
        let want = if n % 2 == 0 { 2 } else { 3 };
        ensure!(c.is_proper() && c.colors_used == want, "C_{n}: {} colors", c.colors_used);
    }

    let mut notes = Vec::new();
    let mut s = RefinementSession::new(host_by_name("cone:icosahedron").expect("host")).map_err(|e| e.to_string())?;
    notes.push(format!("anneal on cone(icosahedron): {}", s.anneal(Schedule::default())));
    for name in ["prism:octahedron", "prism:icosahedron"] {
        let mut s = RefinementSession::new(host_by_name(name).expect("host")).map_err(|e| e.to_string())?;
        notes.push(format!("greedy on {name}: {}", s.greedy_reduce(GreedyOptions { budget: 400, lookahead: 2 })));
    }
    Ok(format!("icosahedron solved with {ico_cuts} cuts; recorded: {}", notes.join(", ")))
}

fn hodge_suite() -> Check {
    let mut graphs = corpus();
    graphs.retain(|(n, _)| *n != "prism:icosahedron");
    for (name, g) in &graphs {
        let top = g.dimension().max(0) as usize;
        for k in 0..top.saturating_sub(1) {
            let d0 = hodge::exterior_derivative::<Rational>(g, k);
            let d1 = hodge::exterior_derivative::<Rational>(g, k + 1);
            ensure!((&d1 * &d0).is_zero(), "{name}: d_{} d_{k} != 0", k + 1);
        }
        let b = hodge::betti_numbers(g);
        let p: i64 = b.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        ensure!(p == g.euler_characteristic(), "{name}: Betti alternating sum {p} vs euler {}", g.euler_characteristic());
        for t in [0.0, 0.5, 1.0, 2.0] {
            let st = hodge::mckean_singer::<f64>(g, t).map_err(|e| e.to_string())?;
            ensure!((st - g.euler_characteristic() as f64).abs() < 1e-8, "{name}: supertrace at t={t} is {st}");
        }
    }
    for name in ["moebius", "projective"] {
        let g = by_name(name).expect("name");
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for k in 0..=g.dimension() as usize {
            let report = hodge::spectrum::<f64>(&g, k, 1e-9).map_err(|e| e.to_string())?;
            let nonzero = report.eigenvalues.into_iter().filter(|x| *x > 1e-7);
            if k % 2 == 0 { even.extend(nonzero) } else { odd.extend(nonzero) }
        }
        even.sort_by(f64::total_cmp);
        odd.sort_by(f64::total_cmp);
        ensure!(even.len() == odd.len(), "{name}: {} bosonic vs {} fermionic eigenvalues", even.len(), odd.len());
        for (x, y) in even.iter().zip(&odd) {
            ensure!((x - y).abs() < 1e-6, "{name}: spectra differ at {x} vs {y}");
        }
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("moebius fixture", moebius_fixture),
        ("gauss-bonnet and poincare-hopf", gauss_bonnet_suite),
        ("classification", classification_suite),
        ("chromatic", chromatic_suite),
        ("refinement", refinement_suite),
        ("end-to-end coloring", end_to_end_suite),
        ("hodge identities", hodge_suite),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(detail) => println!("PASS {name} ({:.2?}): {detail}", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({:.2?}): {why}", start.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
