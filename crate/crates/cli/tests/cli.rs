use std::collections::BTreeMap;

use chromacut::constructions;
use chromacut::SimplicialGraph;
use chromacut_cli::cli::run;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn chromacut(args: &[&str], input: &str) -> Output {
    let mut stdin = input.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("chromacut").chain(args.iter().copied()).collect();
    let code = run(argv, &mut stdin, &mut out, &mut err);
    Output { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn gen(name: &str) -> String {
    let o = chromacut(&["gen", name], "");
    assert_eq!(o.code, 0, "{}", o.err);
    o.out
}

#[test]
fn check_reports_the_octahedron_as_a_sphere() {
    let o = chromacut(&["check", "-"], &gen("octahedron"));
    assert_eq!(o.code, 0);
    assert!(o.out.starts_with("kind=Sphere dim=2 euler=2\n"), "{}", o.out);
    assert!(o.out.contains("gauss-bonnet sum=2 euler=2 ok"));
}

#[test]
fn fisk_torus_needs_five_colors() {
    let o = chromacut(&["chromatic", "-"], &gen("fisk"));
    assert_eq!((o.code, o.out.as_str()), (0, "5\n"));
}

#[test]
fn boundary_pipeline_colors_the_icosahedron() {
    let o = chromacut(&["color", "-", "--method", "boundary", "--strategy", "cone", "--driver", "greedy"], &gen("icosahedron"));
    assert_eq!(o.code, 0, "{}", o.err);
    let v: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    let colors: BTreeMap<u32, u32> =
        v["colors"].as_object().unwrap().iter().map(|(k, c)| (k.parse().unwrap(), c.as_u64().unwrap() as u32)).collect();
    let g = constructions::icosahedron();
    assert_eq!(colors.len(), 12);
    assert!(g.edges().iter().all(|(a, b)| colors[a] != colors[b]));
    assert!(colors.values().all(|&c| c < 4));
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        vec!["color", "-", "--method", "boundary", "--driver", "anneal", "--seed", "3", "--steps", "50"],
        vec!["color", "-", "--method", "kempe", "--colors", "5", "--seed", "9"],
        vec!["hodge", "-", "--spectrum", "1"],
    ] {
        let a = chromacut(&args, &gen("icosahedron"));
        let b = chromacut(&args, &gen("icosahedron"));
        assert_eq!((a.code, &a.out, &a.err), (b.code, &b.out, &b.err), "{args:?}");
    }
    let a = chromacut(&["refine", "-", "--driver", "anneal", "--seed", "5", "--steps", "40"], &gen("cone:octahedron"));
    let b = chromacut(&["refine", "-", "--driver", "anneal", "--seed", "5", "--steps", "40"], &gen("cone:octahedron"));
    assert_eq!(a.out, b.out);
}

#[test]
fn refine_log_replays_through_the_script_driver() {
    let dir = std::env::temp_dir().join(format!("chromacut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let script = dir.join("moves.txt");
    let first = dir.join("first.json");
    let second = dir.join("second.json");
    let host = gen("cone:icosahedron");
    let o = chromacut(&["refine", "-", "--driver", "greedy", "--out", first.to_str().unwrap()], &host);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.starts_with("# outcome=solved phi=0 odd=0"), "{}", o.out);
    std::fs::write(&script, &o.out).unwrap();
    let driver = format!("script:{}", script.display());
    let r = chromacut(&["refine", "-", "--driver", &driver, "--out", second.to_str().unwrap()], &host);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out, o.out);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn trace_is_written_as_csv() {
    let path = std::env::temp_dir().join(format!("chromacut-trace-{}.csv", std::process::id()));
    let o = chromacut(&["refine", "-", "--budget", "4", "--trace", path.to_str().unwrap()], &gen("cone:icosahedron"));
    assert_eq!(o.code, 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(csv.starts_with("step,phi,oddcount\n0,12,12\n"), "{csv}");
    assert!(o.out.starts_with("# outcome=budget-exhausted"), "{}", o.out);
}

#[test]
fn gen_writes_canonical_graphs() {
    for name in ["octahedron", "cross4", "torus:4,5", "pentakis-quotient", "prism:octahedron"] {
        let text = gen(name);
        let g = SimplicialGraph::from_json(text.trim()).unwrap();
        assert_eq!(g, constructions::by_name(name).unwrap(), "{name}");
    }
}

#[test]
fn exit_codes_separate_usage_from_domain_errors() {
    assert_eq!(chromacut(&["frobnicate"], "").code, 2);
    assert_eq!(chromacut(&["color", "-"], "").code, 2);
    assert_eq!(chromacut(&["color", "-", "--method", "exact", "--driver", "sideways"], &gen("octahedron")).code, 0);
    assert_eq!(chromacut(&["color", "-", "--method", "boundary", "--driver", "sideways"], &gen("octahedron")).code, 2);
    assert_eq!(chromacut(&["gen", "dodecagon"], "").code, 1);
    assert_eq!(chromacut(&["check", "-"], "not json").code, 1);
    assert_eq!(chromacut(&["check", "/nonexistent/graph.json"], "").code, 1);
    let o = chromacut(&["color", "-", "--method", "propagate"], &gen("icosahedron"));
    assert_eq!(o.code, 1);
    assert!(o.err.contains("conflict"), "{}", o.err);
    let help = chromacut(&["--help"], "");
    assert_eq!(help.code, 0);
    assert!(help.out.contains("refine"));
}

#[test]
fn hodge_reports_betti_numbers_and_supertrace() {
    let o = chromacut(&["hodge", "-"], &gen("moebius"));
    assert_eq!(o.out, "betti=1,1,0\n");
    let o = chromacut(&["hodge", "-", "--mckean", "0.5"], &gen("torus:4,4"));
    assert_eq!(o.code, 0);
    let st: f64 = o.out.split_whitespace().next().unwrap().trim_start_matches("supertrace=").parse().unwrap();
    assert!(st.abs() < 1e-8);
}
