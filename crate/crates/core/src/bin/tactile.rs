//! Command-line front end: scene generators, runs, oracle, verification, plots.
//!
//! Exit codes: 0 success or verified, 1 a bound was violated, 2 bad usage or input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tactile_nav::adversarial::{adaptive_unblock, build_comb, build_pc, build_sine_corridor, PcParams, SineParams, Unblocked};
use tactile_nav::error::{Error, Result};
use tactile_nav::harness::io::{load_json, load_scene, save_json};
use tactile_nav::harness::{default_resolution, emit_svg, offline_lopt, run_algo, verify_run, Algo, OracleResult, Slice};
use tactile_nav::planners::{Mode, PlannerConfig, RunRecord};

#[derive(Parser)]
#[command(name = "tactile", version, about = "Tactile motion planning experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Nav,
    Search,
    Cover,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parallel-corridor scene.
    GenPc {
        #[arg(long)]
        l0: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        dim: usize,
        /// Corridor index, `sealed`, or `adaptive` (picked against plain nav boxes).
        #[arg(long)]
        unblocked: String,
        #[arg(short)]
        o: PathBuf,
    },
    /// Sine-shaped tube in 3-D.
    GenSine {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 200)]
        segments: usize,
        #[arg(short)]
        o: PathBuf,
    },
    /// Comb of thin teeth in 2-D.
    GenComb {
        #[arg(long)]
        teeth: usize,
        #[arg(long)]
        radius: f64,
        #[arg(short)]
        o: PathBuf,
    },
    /// Runs one algorithm on a scene.
    Run {
        #[arg(long)]
        algo: String,
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        greedy: bool,
        #[arg(long)]
        gray: bool,
        #[arg(long)]
        diagonals: bool,
        #[arg(long)]
        maximal_coloring: bool,
        #[arg(long)]
        noticing_t: bool,
        #[arg(long)]
        subdivide: bool,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        a0: Option<f64>,
        #[arg(short)]
        o: PathBuf,
    },
    /// Offline shortest path for the inflated robot.
    Oracle {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        resolution: Option<f64>,
        #[arg(short)]
        o: PathBuf,
    },
    /// Checks a run against the applicable bounds.
    Verify {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// SVG drawing of a scene and, optionally, a run.
    Plot {
        #[arg(long)]
        run: Option<PathBuf>,
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        slice: Option<String>,
        #[arg(short)]
        o: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match exec(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a bound was violated.
fn exec(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::GenPc { l0, eps, radius, dim, unblocked, o } => {
            let which = match unblocked.as_str() {
                "adaptive" => Unblocked::Adaptive,
                "sealed" => Unblocked::Sealed,
                s => Unblocked::Index(s.parse().map_err(|_| Error::Config(format!("bad --unblocked {s}")))?),
            };
            let params = PcParams::new(l0, eps, radius, dim, which);
            let scene = if which == Unblocked::Adaptive {
                let res = adaptive_unblock(&params, &PlannerConfig::nav())?;
                println!("corridor order {:?}", res.order);
                res.scene
            } else {
                build_pc(&params)?
            };
            save_json(o, &scene)?;
        }
        Cmd::GenSine { k, radius, segments, o } => {
            save_json(o, &build_sine_corridor(&SineParams { k, r: radius, segments })?)?;
        }
        Cmd::GenComb { teeth, radius, o } => save_json(o, &build_comb(teeth, radius)?)?,
        Cmd::Run { algo, scene, greedy, gray, diagonals, maximal_coloring, noticing_t, subdivide, mode, a0, o } => {
            let algo: Algo = algo.parse()?;
            let scene = load_scene(scene)?;
            let mode = match (mode, algo) {
                (Some(ModeArg::Nav), _) => Mode::Nav,
                (Some(ModeArg::Search), _) => Mode::Search,
                (Some(ModeArg::Cover), _) | (None, Algo::Cboxes) => Mode::Cover,
                (None, _) => Mode::Nav,
            };
            let cfg = PlannerConfig {
                greedy,
                gray,
                diagonals,
                maximal_coloring,
                noticing_t,
                subdivision: subdivide,
                ..PlannerConfig::new(mode)
            };
            let run = run_algo(&scene, algo, &cfg, a0)?;
            println!("{:?} length {:.6} iterations {}", run.outcome, run.total_length, run.iterations.len());
            save_json(o, &run)?;
        }
        Cmd::Oracle { scene, resolution, o } => {
            let scene = load_scene(scene)?;
            let res = match resolution {
                Some(r) => r,
                None => default_resolution(&scene)?,
            };
            let out = offline_lopt(&scene, res)?;
            if out.found {
                println!("length {:.6} at resolution {res}", out.length);
            } else {
                println!("no path at resolution {res}");
            }
            save_json(o, &out)?;
        }
        Cmd::Verify { run, scene, oracle, o } => {
            let run: RunRecord = load_json(run)?;
            let scene = load_scene(scene)?;
            let oracle: Option<OracleResult> = oracle.map(load_json).transpose()?;
            let report = verify_run(&run, &scene, oracle.as_ref())?;
            for row in &report.rows {
                let tag = if row.satisfied { "ok" } else { "VIOLATED" };
                let info = if row.informational { " (informational)" } else { "" };
                println!("{:<24} {:>8} lhs {:.6} rhs {:.6}{info}", row.name, tag, row.lhs_value, row.rhs_value);
            }
            if let Some(o) = o {
                save_json(o, &report)?;
            }
            return Ok(report.all_satisfied());
        }
        Cmd::Plot { run, scene, slice, o } => {
            let scene = load_scene(scene)?;
            let run: Option<RunRecord> = run.map(load_json).transpose()?;
            let slice: Option<Slice> = slice.map(|s| s.parse()).transpose()?;
            std::fs::write(o, emit_svg(run.as_ref(), &scene, slice)?)?;
        }
    }
    Ok(true)
}
