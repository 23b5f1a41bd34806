//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime abort.

use crate::cases::{builtin_case, run_case, CaseConfig, CaseRun, CASE_IDS};
use crate::config::parse_config;
use crate::error::VofError;
use crate::metrics::{convergence_order, l1_error, EndReason};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "vvof", version, about = "Geometric VOF front-propagation benchmark kernel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a case described by a JSON config file.
    Run { config: PathBuf },
    /// Run a built-in case, optionally overriding grid, time step and output.
    Case {
        id: String,
        /// Cell counts: N, N,N or N,N,N. Without --dt the time step scales
        /// with the refinement ratio.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_final: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List built-in case ids.
    List,
    /// Refinement study: run a case over a grid ladder and print the
    /// pairwise convergence orders of the L1 error against the initial state.
    Convergence {
        id: String,
        #[arg(long, value_delimiter = ',', required = true)]
        grids: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn default_out_dir() -> PathBuf {
    std::env::var("VVOF_OUT").map(PathBuf::from).unwrap_or_else(|_| PathBuf::from("out"))
}

fn exit_code(err: &VofError) -> i32 {
    match err {
        VofError::Config(_) | VofError::GridMismatch(_) => 1,
        _ => 2,
    }
}

fn summarize(run: &CaseRun, name: &str) -> i32 {
    let d = &run.diagnostics;
    let last = d.len() - 1;
    let drift = (d.volume_norm[last] - 1.0).abs();
    let max_wisps = d.wisps.iter().copied().max().unwrap_or(0);
    let max_cfl = d.cfl.iter().cloned().fold(0.0f64, f64::max);
    println!(
        "{name}: {} steps to t={:.6}, volume drift {:.3e}, max CFL {:.3}, max wisps {}",
        last, d.t[last], drift, max_cfl, max_wisps
    );
    match d.end_reason.as_ref() {
        Some(EndReason::CflAbort { t, cfl }) => {
            eprintln!("{name}: aborted at t={t:.6} with CFL {cfl:.3}");
            2
        }
        Some(reason) => {
            println!("{name}: end: {reason}");
            0
        }
        None => 0,
    }
}

fn run_configured(mut cfg: CaseConfig, out: Option<PathBuf>) -> i32 {
    if let Some(dir) = out {
        cfg.outputs.dir = Some(dir);
    } else if cfg.outputs.dir.is_none() {
        cfg.outputs.dir = Some(default_out_dir());
    }
    let name = cfg.name.clone();
    match run_case(&cfg) {
        Ok(run) => summarize(&run, &name),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn convergence(id: &str, grids: &[usize], out: Option<PathBuf>) -> i32 {
    let base = match builtin_case(id) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let mut errors: Vec<(usize, f64)> = Vec::new();
    println!("grid      L1 error");
    for &n in grids {
        let dims = if base.grid[2] == 1 { [n, n, 1] } else { [n, n, n] };
        let mut cfg = base.clone().with_grid(dims);
        cfg.outputs.dir = out.clone();
        cfg.snapshots.clear();
        match run_case(&cfg) {
            Ok(run) => {
                let e = match l1_error(&run.field, &run.initial) {
                    Ok(e) => e,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return exit_code(&e);
                    }
                };
                println!("{n:<8}  {e:.6e}");
                errors.push((n, e));
            }
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code(&e);
            }
        }
    }
    match convergence_order(&errors) {
        Ok(orders) => {
            println!("pair      order");
            for (w, o) in errors.windows(2).zip(&orders) {
                println!("{}->{}  {o:.3}", w[0].0, w[1].0);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => match parse_config(&config) {
            Ok(cfg) => run_configured(cfg, None),
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        },
        Command::Case { id, grid, dt, t_final, out } => {
            let cfg = match builtin_case(&id) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_code(&e);
                }
            };
            let mut cfg = match grid {
                Some(g) => {
                    let dims = match g.as_slice() {
                        [n] => {
                            if cfg.grid[2] == 1 {
                                [*n, *n, 1]
                            } else {
                                [*n, *n, *n]
                            }
                        }
                        [nx, ny] => [*nx, *ny, 1],
                        [nx, ny, nz] => [*nx, *ny, *nz],
                        _ => {
                            eprintln!("error: --grid takes 1..3 comma-separated counts");
                            return 1;
                        }
                    };
                    cfg.with_grid(dims)
                }
                None => cfg,
            };
            if let Some(dt) = dt {
                cfg.dt = dt;
            }
            if let Some(tf) = t_final {
                cfg.t_final = tf;
                cfg.snapshots.retain(|&s| s <= tf + 1e-12);
            }
            run_configured(cfg, out)
        }
        Command::List => {
            for id in CASE_IDS {
                println!("{id}");
            }
            0
        }
        Command::Convergence { id, grids, out } => convergence(&id, &grids, out),
    }
}
