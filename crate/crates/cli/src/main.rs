use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use coregame::breaker::CheckMode;
use coregame::engine::{play, Player};
use coregame::experiments::{
    build_breaker, build_maker, run_experiment, ExperimentConfig, BREAKER_SEED_OFFSET, MAKER_SEED_OFFSET,
};
use coregame::graphs::{gen_configuration, gen_gnm, gen_gnp, gen_simple_from_sequence, read_graph, write_graph, DegreeSequence, Graph};
use coregame::maker::{find_nl_tree_with_restarts, tree_params_for, TwoPhaseConfig};
use coregame::numerics::{core_constants, solve_ck, solve_mu_ck};
use coregame::peeling::{k_core, peel};

#[derive(Parser)]
#[command(name = "coregame", version, about = "k-core peeling and (1:b) Maker-Breaker component games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    Gnm,
    /// Configuration multigraph, `d`-regular.
    Config,
    /// Simple `d`-regular graph by rejection.
    Regular,
}

#[derive(Clone, Copy, ValueEnum)]
enum First {
    Auto,
    Maker,
    Breaker,
}

#[derive(Subcommand)]
enum Command {
    /// Core thresholds c_k for k = 3..=kmax.
    Thresholds {
        #[arg(long, default_value_t = 10)]
        kmax: usize,
    },
    /// Constants derived from (k, c) above the threshold.
    Constants {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: f64,
    },
    /// Generate a random graph as an edge list.
    Gen {
        #[arg(long, value_enum, default_value = "gnp")]
        model: Model,
        #[arg(long)]
        n: usize,
        /// Average degree (gnp, gnm).
        #[arg(long, default_value_t = 3.0)]
        c: f64,
        /// Degree (config, regular).
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parallel k-peeling of a graph: ranks, T* and per-round statistics.
    Peel {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Play one game on a graph file, or on G(n, c/n) when no file is given.
    Play {
        #[arg(long)]
        board: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 3.0)]
        c: f64,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value = "naive")]
        maker: String,
        #[arg(long, default_value = "sb")]
        breaker: String,
        #[arg(long, value_enum, default_value = "auto")]
        first: First,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tree height override for the two-phase Maker.
        #[arg(long = "N")]
        height: Option<usize>,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long)]
        d0: Option<usize>,
        /// Print every move.
        #[arg(long)]
        log: bool,
    },
    /// Search the (k)-core of a graph for an (N,L)-tree and print its parent array.
    FindNltree {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Average degree for the constants; the graph's own when absent.
        #[arg(long)]
        c: Option<f64>,
        #[arg(long = "N")]
        height: Option<usize>,
        #[arg(long = "L")]
        l: Option<usize>,
        #[arg(long)]
        d0: Option<usize>,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a configured experiment and write CSV.
    Experiment {
        name: String,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `output`; `-` for standard output.
        #[arg(long)]
        output: Option<String>,
    },
}

fn load_graph(path: &Path) -> Result<Graph> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_graph(BufReader::new(f))?)
}

fn writer(path: Option<&str>) -> Result<Box<dyn Write>> {
    Ok(match path {
        None | Some("-") => Box::new(BufWriter::new(io::stdout().lock())),
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {p}"))?)),
    })
}

fn run(cli: Cli) -> Result<bool> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Thresholds { kmax } => {
            writeln!(out, "k,c_k,mu_ck")?;
            for k in 3..=kmax {
                writeln!(out, "{k},{:.9},{:.9}", solve_ck(k)?, solve_mu_ck(k)?)?;
            }
        }
        Command::Constants { k, c } => write!(out, "{}", core_constants(k, c)?)?,
        Command::Gen { model, n, c, d, seed, out } => {
            let g = match model {
                Model::Gnp => gen_gnp(n, c / n as f64, seed)?,
                Model::Gnm => gen_gnm(n, (c * n as f64 / 2.0).round() as usize, seed)?,
                Model::Config => gen_configuration(&DegreeSequence::new(vec![d; n]), seed)?,
                Model::Regular => gen_simple_from_sequence(&DegreeSequence::new(vec![d; n]), seed, 1_000_000)?.graph,
            };
            let mut w = writer(out.as_deref().and_then(Path::to_str))?;
            write_graph(&g, &mut w)?;
            w.flush()?;
        }
        Command::Peel { graph, k } => {
            let g = load_graph(&graph)?;
            let trace = peel(&g, k, None);
            let core = k_core(&g, k);
            writeln!(out, "# n={} m={} k={k} T*={} core_vertices={} core_edges={}", g.n(), g.m(), trace.t_star, core.nhat, core.mhat)?;
            writeln!(out, "t,edges,largest_component,components")?;
            for s in &trace.per_iteration {
                writeln!(out, "{},{},{},{}", s.t, s.edges, s.largest_component, s.components)?;
            }
        }
        Command::Play { board, n, c, b, maker, breaker, first, seed, height, l, d0, log } => {
            let g = match &board {
                Some(p) => load_graph(p)?,
                None => gen_gnp(n, c / n as f64, seed)?,
            };
            let avg = if g.n() == 0 { 0.0 } else { 2.0 * g.m() as f64 / g.n() as f64 };
            let c = if board.is_some() { avg } else { c };
            let first = match first {
                First::Maker => Player::Maker,
                First::Breaker => Player::Breaker,
                First::Auto if c < solve_ck(b + 2)? => Player::Maker,
                First::Auto => Player::Breaker,
            };
            let tp = TwoPhaseConfig { c: Some(c), height, l, d0, ..TwoPhaseConfig::default() };
            let mut m = build_maker(&maker, &g, b, seed.wrapping_add(MAKER_SEED_OFFSET), &tp)?;
            let mut br = build_breaker(&breaker, &g, b, seed.wrapping_add(BREAKER_SEED_OFFSET), CheckMode::Touched)?;
            let r = play(&g, b, m.as_mut(), br.as_mut(), first)?;
            if log {
                for (i, mv) in r.moves.iter().enumerate() {
                    let edges: Vec<String> = mv.edges.iter().map(|&e| format!("{:?}", g.edge(e))).collect();
                    writeln!(out, "{i} {} {}", mv.player, edges.join(" "))?;
                }
            }
            writeln!(out, "n={} m={} b={b} first={first} maker={maker} breaker={breaker}", g.n(), g.m())?;
            writeln!(out, "largest_maker_component={}", r.largest_maker_component)?;
            writeln!(out, "rounds={}", r.rounds)?;
            for (k, v) in &r.notes {
                writeln!(out, "{k}={v}")?;
            }
            writeln!(out, "violations={}", r.invariant_violations.len())?;
            for v in &r.invariant_violations {
                eprintln!("violation: {v}");
            }
            return Ok(r.invariant_violations.is_empty());
        }
        Command::FindNltree { graph, k, c, height, l, d0, restarts, seed } => {
            let g = load_graph(&graph)?;
            let core = k_core(&g, k);
            if core.nhat == 0 {
                bail!("the {k}-core is empty");
            }
            let tp = TwoPhaseConfig { c, height, l, d0, restarts };
            let Some(params) = tree_params_for(&g, k, &tp) else {
                bail!("below the threshold the constants are undefined; pass --L and --d0");
            };
            let run = find_nl_tree_with_restarts(&core.core, k, &params, seed, restarts)?;
            match run.tree {
                Some(t) => {
                    let t = t.relabel(&core.vertex_map, &core.edge_map);
                    writeln!(out, "# attempts={}", run.attempts)?;
                    write!(out, "{}", t.to_parent_array())?;
                }
                None => bail!("no tree found after {} attempts (N={}, L={}, d0={})", run.attempts, params.height, params.l, params.d0),
            }
        }
        Command::Experiment { name, config, output } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if cfg.experiment != name {
                bail!("config {} is for experiment '{}', not '{name}'", config.display(), cfg.experiment);
            }
            if let Some(o) = output {
                cfg.output = (o != "-").then_some(o);
            }
            let out = run_experiment(&cfg)?;
            let mut w = writer(cfg.output.as_deref())?;
            w.write_all(out.csv.as_bytes())?;
            w.flush()?;
            eprintln!("{} rows, {} violations", out.rows, out.violations);
            return Ok(out.violations == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
