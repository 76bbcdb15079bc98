//! Command line front end. Exit codes: 0 success, 1 domain error, 2 usage.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context};
use chromacut::coloring::{self, ColoringStatus, Driver, Strategy};
use chromacut::constructions;
use chromacut::curvature;
use chromacut::hodge;
use chromacut::refine::{format_moves, parse_moves, GreedyOptions, Outcome, RefinementSession, Schedule};
use chromacut::topology::{self, MAX_CLASSIFY_DIM};
use chromacut::SimplicialGraph;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_PORT: u16 = 8080;
pub const PORT_ENV: &str = "CHROMACUT_PORT";

#[derive(Parser, Debug)]
#[command(name = "chromacut", version, about = "Geometric graphs, Hodge theory and boundary coloring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a named construction as graph JSON.
    Gen {
        name: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Classification, curvature and Gauss-Bonnet report.
    Check { file: String },
    /// Betti numbers, a Laplacian spectrum or the McKean-Singer supertrace.
    Hodge {
        file: String,
        #[arg(long, conflicts_with_all = ["spectrum", "mckean"])]
        betti: bool,
        #[arg(long, value_name = "K", conflicts_with = "mckean")]
        spectrum: Option<usize>,
        #[arg(long, value_name = "T")]
        mckean: Option<f64>,
    },
    /// Color a graph.
    Color {
        file: String,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, value_enum, default_value = "cone")]
        strategy: StrategyArg,
        #[command(flatten)]
        driver: DriverArgs,
        /// Palette size for the Kempe method.
        #[arg(long, default_value_t = 4)]
        colors: u32,
    },
    /// Refine a host graph towards an even interior and print the move log.
    Refine {
        file: String,
        #[command(flatten)]
        driver: DriverArgs,
        /// Write the objective trace as CSV to this file.
        #[arg(long, value_name = "FILE")]
        trace: Option<String>,
        /// Write the refined graph to this file.
        #[arg(long)]
        out: Option<String>,
    },
    /// Chromatic number, and optionally the chromatic polynomial.
    Chromatic {
        file: String,
        #[arg(long)]
        polynomial: bool,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Propagate,
    Kempe,
    Exact,
    Boundary,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Cone,
    Prism,
}

#[derive(Args, Debug)]
pub struct DriverArgs {
    /// greedy, anneal or script:<file>
    #[arg(long, default_value = "greedy")]
    driver: String,
    /// Greedy cut budget.
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    /// Greedy lookahead, 1 or 2.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    lookahead: u8,
    /// Anneal seed; also the Kempe tie-break seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Anneal step count.
    #[arg(long, default_value_t = Schedule::default().steps)]
    steps: usize,
}

impl DriverArgs {
    fn resolve(&self) -> anyhow::Result<Driver> {
        match self.driver.as_str() {
            "greedy" => Ok(Driver::Greedy(GreedyOptions { budget: self.budget, lookahead: self.lookahead as usize })),
            "anneal" => Ok(Driver::Anneal(Schedule { seed: self.seed, steps: self.steps, ..Schedule::default() })),
            other => match other.strip_prefix("script:") {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading script {path}"))?;
                    Ok(Driver::Script(parse_moves(&text)?))
                }
                None => Err(UsageError(format!("unknown driver {other:?}, expected greedy, anneal or script:<file>")).into()),
            },
        }
    }
}

/// Marks an error that should exit with the usage code.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Run the command line with explicit streams. Returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdin, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if e.is::<UsageError>() {
                2
            } else {
                1
            }
        }
    }
}

fn read_graph(path: &str, stdin: &mut dyn Read) -> anyhow::Result<SimplicialGraph> {
    let text = if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).context("reading standard input")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    Ok(SimplicialGraph::from_json(text.trim())?)
}

fn write_text(path: Option<&str>, text: &str, out: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {p}")),
        None => out.write_all(text.as_bytes()).context("writing output"),
    }
}

fn strategy(s: StrategyArg) -> Strategy {
    match s {
        StrategyArg::Cone => Strategy::Cone,
        StrategyArg::Prism => Strategy::Prism,
    }
}

fn execute(command: Command, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<()> {
    match command {
        Command::Gen { name, out: path } => {
            let g = constructions::by_name(&name)?;
            write_text(path.as_deref(), &format!("{}\n", g.to_json()), out)
        }
        Command::Check { file } => {
            let g = read_graph(&file, stdin)?;
            out.write_all(check_report(&g)?.as_bytes())?;
            Ok(())
        }
        Command::Hodge { file, betti: _, spectrum, mckean } => {
            let g = read_graph(&file, stdin)?;
            if let Some(k) = spectrum {
                let report = hodge::spectrum::<f64>(&g, k, 1e-9)?;
                writeln!(out, "betti_{k}={}", report.betti)?;
                for v in report.eigenvalues {
                    writeln!(out, "{:.6}", v + 0.0)?;
                }
            } else if let Some(t) = mckean {
                let st = hodge::mckean_singer::<f64>(&g, t)?;
                writeln!(out, "supertrace={st:.10} euler={}", g.euler_characteristic())?;
            } else {
                let b = hodge::betti_numbers(&g);
                let text: Vec<String> = b.iter().map(ToString::to_string).collect();
                writeln!(out, "betti={}", text.join(","))?;
            }
            Ok(())
        }
        Command::Color { file, method, strategy: strat, driver, colors } => {
            let g = read_graph(&file, stdin)?;
            let coloring = match method {
                Method::Propagate => {
                    let d = g.dimension().max(0) as usize;
                    coloring::propagate_minimal(&g, d)?
                }
                Method::Kempe => coloring::kempe_greedy(&g, colors, driver.seed)
                    .ok_or_else(|| anyhow!("kempe greedy found no {colors}-coloring with seed {}", driver.seed))?,
                Method::Exact => coloring::optimal_coloring(&g)?,
                Method::Boundary => {
                    let run = coloring::color_boundary_via_host(&g, strategy(strat), &driver.resolve()?)?;
                    writeln!(err, "outcome={} cuts={}", run.outcome, run.session.cut_count())?;
                    run.coloring.ok_or_else(|| anyhow!("refinement ended {}, no coloring", run.outcome))?
                }
            };
            match &coloring.status {
                ColoringStatus::Proper => {
                    writeln!(out, "{}", coloring.to_json())?;
                    Ok(())
                }
                ColoringStatus::Improper((a, b)) => bail!("coloring is improper on edge ({a}, {b})"),
                ColoringStatus::PropagationConflict(w) => bail!("propagation conflict around {w:?}"),
            }
        }
        Command::Refine { file, driver, trace, out: path } => {
            let g = read_graph(&file, stdin)?;
            let mut s = RefinementSession::from_graph(g, &file)?;
            let outcome = match driver.resolve()? {
                Driver::Greedy(o) => s.greedy_reduce(o),
                Driver::Anneal(sch) => s.anneal(sch),
                Driver::Script(moves) => s.apply_script(&moves)?,
            };
            let (phi, odd) = s.objective();
            writeln!(out, "# outcome={outcome} phi={phi} odd={odd} cuts={}", s.cut_count())?;
            out.write_all(format_moves(&s.moves()).as_bytes())?;
            if let Some(p) = trace {
                fs::write(&p, s.trace_csv()).with_context(|| format!("writing {p}"))?;
            }
            if let Some(p) = path {
                fs::write(&p, format!("{}\n", s.graph().to_json())).with_context(|| format!("writing {p}"))?;
            }
            if outcome != Outcome::Solved {
                writeln!(err, "refinement ended {outcome}")?;
            }
            Ok(())
        }
        Command::Chromatic { file, polynomial } => {
            let g = read_graph(&file, stdin)?;
            writeln!(out, "{}", coloring::chromatic_number(&g)?)?;
            if polynomial {
                writeln!(out, "{}", coloring::chromatic_polynomial(&g)?)?;
            }
            Ok(())
        }
        Command::Serve { port } => {
            let port = match std::env::var(PORT_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| UsageError(format!("{PORT_ENV}={v:?} is not a port")))?,
                Err(_) => port,
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(crate::server::serve(port))
        }
    }
}

/// Plain `key=value` report for the check subcommand.
pub fn check_report(g: &SimplicialGraph) -> anyhow::Result<String> {
    let max = g.dimension().clamp(0, MAX_CLASSIFY_DIM);
    let c = topology::classify(g, max)?;
    let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(",");
    let gb = curvature::gauss_bonnet(g);
    let mut s = String::new();
    s += &format!("kind={} dim={} euler={}\n", c.kind, c.dim, c.euler);
    s += &format!("f-vector={}\n", join(&mut g.f_vector().0.iter().map(ToString::to_string)));
    s += &format!("boundary={}\n", join(&mut c.boundary.iter().map(ToString::to_string)));
    s += &format!("singular={}\n", join(&mut c.singular.iter().map(ToString::to_string)));
    s += &format!("contractible={}\n", c.contractible);
    s += &format!("gauss-bonnet sum={} euler={} {}\n", gb.sum, gb.chi, if gb.ok { "ok" } else { "FAILED" });
    for v in g.vertices() {
        s += &format!("curvature {v} {}\n", curvature::vertex_curvature(g, v)?);
    }
    Ok(s)
}
