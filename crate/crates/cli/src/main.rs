mod config;
mod csvout;
mod svg;

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use config::RunConfig;
use curveclose_core::perm::{build_reduction_plan, Perm};
use curveclose_core::rearrange::{rearranged, tangent_mismatch, Cuts};
use curveclose_core::solver::{
    certify_zk_nonclosure, check_c0_condition, find_all_two_cut, oracle_grid, solve_c0, solve_k,
    solve_two_cut, Method, SolveResult, SolveStatus,
};
use curveclose_core::{CurveError, CurveTable, TurningCurve};

#[derive(Parser)]
#[command(name = "curveclose", version, about = "Close constant-speed planar curves by rearranging arcs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Quadrature resolution (power of two >= 64).
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Residual tolerance relative to the curve speed.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized internals (certificates).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Closed C1 rearrangement (tangent frames match everywhere).
    C1,
    /// Closed but possibly non-smooth at the closing point.
    C0,
    /// All two-cut solutions, one per winding bracket.
    All,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report turning, endpoint, radius, and applicable solvers.
    Analyze { curve: String },
    /// Find closing cuts; writes CSV and exits 0/2/3.
    Close {
        curve: String,
        /// Number of arcs (default 3).
        #[arg(long)]
        k: Option<usize>,
        /// Arc order in one-line notation, e.g. "2 5 1 6 4 3".
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::C1)]
        mode: Mode,
        /// CSV output path (stdout if omitted).
        #[arg(long)]
        out: Option<String>,
        /// Also render the first solution to this SVG path.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Print the reduction plan of a permutation.
    Reduce {
        #[arg(long)]
        sigma: String,
    },
    /// Render a curve and a rearrangement as SVG.
    Render {
        curve: String,
        /// Interior cut values, e.g. "0.3 0.7".
        #[arg(long)]
        cuts: String,
        /// Arc order (default: identity).
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        out: String,
    },
    /// Brute-force grid scan of the endpoint map (independent oracle).
    Oracle {
        curve: String,
        #[arg(long)]
        sigma: Option<String>,
        /// Grid resolution per cut dimension.
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let cfg = match RunConfig::load(
        cli.config.as_deref(),
        cli.resolution,
        cli.tol,
        cli.seed,
    ) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let run = match cli.cmd {
        Cmd::Analyze { curve } => cmd_analyze(&curve, &cfg),
        Cmd::Close {
            curve,
            k,
            sigma,
            mode,
            out,
            svg,
        } => cmd_close(&curve, k, sigma.as_deref(), mode, out.as_deref(), svg.as_deref(), &cfg),
        Cmd::Reduce { sigma } => cmd_reduce(&sigma),
        Cmd::Render {
            curve,
            cuts,
            sigma,
            out,
        } => cmd_render(&curve, &cuts, sigma.as_deref(), &out, &cfg),
        Cmd::Oracle { curve, sigma, grid } => cmd_oracle(&curve, sigma.as_deref(), grid, &cfg),
    };
    match run {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn init_threads() {
    if let Ok(v) = std::env::var("CURVECLOSE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn load_table(path: &str, cfg: &RunConfig) -> Result<CurveTable> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let curve = TurningCurve::from_json(&text)
        .map_err(|e| anyhow!("{path}: {e}"))?
        .normalize();
    CurveTable::new(&curve, cfg.resolution).map_err(|e| anyhow!("{path}: {e}"))
}

fn cmd_analyze(path: &str, cfg: &RunConfig) -> Result<ExitCode> {
    let table = load_table(path, cfg)?;
    let total = table.total_turning();
    let multiple = table.turning_multiple(1e-6);
    let endpoint = table.endpoint();
    let closed = endpoint.norm() <= 1e-9 * table.speed();
    let cond = check_c0_condition(&table);
    println!("speed: {}", table.speed());
    println!("total_turning: {total}");
    match multiple {
        Some(m) => println!("turning_multiple: {m}"),
        None => println!("turning_multiple: none"),
    }
    println!("endpoint: ({}, {})", endpoint.x, endpoint.y);
    println!("endpoint_norm: {}", endpoint.norm());
    println!("max_radius: {}", table.max_radius());
    println!("closed: {closed}");
    println!(
        "two_cut_applicable: {}",
        matches!(multiple, Some(m) if m != 0) && !closed
    );
    println!(
        "c0_condition: holds={} lhs={} rhs={}",
        cond.holds, cond.lhs, cond.rhs
    );
    let report = serde_json::json!({
        "speed": table.speed(),
        "total_turning": total,
        "turning_multiple": multiple,
        "endpoint": [endpoint.x, endpoint.y],
        "endpoint_norm": endpoint.norm(),
        "max_radius": table.max_radius(),
        "closed": closed,
        "c0_condition": {
            "holds": cond.holds,
            "lhs": cond.lhs,
            "rhs": cond.rhs,
        },
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn default_sigma(k: usize) -> Result<Perm> {
    match k {
        3 => Ok(Perm::new(vec![1, 3, 2]).expect("transposition")),
        _ => bail!("--k {k} requires an explicit --sigma (only k=3 has a canonical order)"),
    }
}

/// A REJECTED placeholder row for hypothesis failures, so the CSV always
/// documents the outcome.
fn rejected_row(table: &CurveTable, sigma: Perm) -> SolveResult {
    let k = sigma.k();
    SolveResult {
        status: SolveStatus::Rejected,
        sigma,
        cuts: Cuts::new(vec![0.0; k - 1]).expect("zero cuts"),
        residual: table.endpoint().norm(),
        tangent_mismatch: tangent_mismatch(table.total_turning()),
        margin: 0.0,
        iterations: 0,
        method: Method::Degenerate,
    }
}

fn cmd_close(
    path: &str,
    k: Option<usize>,
    sigma: Option<&str>,
    mode: Mode,
    out: Option<&str>,
    svg_out: Option<&str>,
    cfg: &RunConfig,
) -> Result<ExitCode> {
    let table = load_table(path, cfg)?;
    let sigma = match sigma {
        Some(text) => {
            let p = Perm::parse(text).map_err(|e| anyhow!("--sigma: {e}"))?;
            if let Some(k) = k {
                if k != p.k() {
                    bail!("--k {k} does not match sigma with {} arcs", p.k());
                }
            }
            p
        }
        None => default_sigma(k.unwrap_or(3))?,
    };
    let solver_cfg = cfg.solver();
    let three = Perm::new(vec![1, 3, 2]).expect("transposition");

    let outcome = match mode {
        Mode::C0 => {
            if sigma != three {
                bail!("--mode c0 supports only the three-arc order [1,3,2]");
            }
            solve_c0(&table, &solver_cfg).map(|r| vec![r])
        }
        Mode::All => {
            if sigma != three {
                bail!("--mode all supports only the three-arc order [1,3,2]");
            }
            find_all_two_cut(&table, &solver_cfg)
        }
        Mode::C1 => {
            if sigma == three {
                solve_two_cut(&table, &solver_cfg).map(|r| vec![r])
            } else {
                solve_k(&table, &sigma, &solver_cfg).map(|r| vec![r])
            }
        }
    };

    let results = match outcome {
        Ok(rs) => rs,
        Err(
            e @ (CurveError::NotTurningMultiple(_)
            | CurveError::C0ConditionFails { .. }
            | CurveError::CyclicShift(_)
            | CurveError::ReductionPrecondition(_)),
        ) => {
            eprintln!("rejected: {e}");
            if let CurveError::CyclicShift(_) = e {
                let h = (sigma.at(1) + sigma.k() - 1) % sigma.k();
                let cert =
                    certify_zk_nonclosure(&table, sigma.k(), h, 10_000, cfg.seed)?;
                eprintln!(
                    "certificate: ||e|| in [{}, {}] over {} random cuts, ||gamma(1)|| = {} (constant: {})",
                    cert.min, cert.max, cert.samples, cert.gamma1_norm, cert.holds
                );
            }
            vec![rejected_row(&table, sigma.clone())]
        }
        Err(e) => return Err(e.into()),
    };

    let csv = csvout::render(&results, sigma.k());
    match out {
        Some(p) => std::fs::write(p, &csv).with_context(|| format!("writing {p}"))?,
        None => print!("{csv}"),
    }

    if let Some(svg_path) = svg_out {
        if let Some(first) = results
            .iter()
            .find(|r| matches!(r.status, SolveStatus::Success | SolveStatus::Degenerate))
        {
            let composite = rearranged(&table, &first.sigma, &first.cuts)?;
            let doc = svg::render(&table, &first.cuts, Some(&composite))?;
            std::fs::write(svg_path, doc).with_context(|| format!("writing {svg_path}"))?;
        }
    }

    let best = results.iter().map(|r| r.status).fold(
        SolveStatus::Inconclusive,
        |acc, s| match (acc, s) {
            (SolveStatus::Success, _) | (_, SolveStatus::Success) => SolveStatus::Success,
            (SolveStatus::Degenerate, _) | (_, SolveStatus::Degenerate) => SolveStatus::Degenerate,
            (SolveStatus::Rejected, _) | (_, SolveStatus::Rejected) => SolveStatus::Rejected,
            _ => SolveStatus::Inconclusive,
        },
    );
    Ok(match best {
        SolveStatus::Success | SolveStatus::Degenerate => ExitCode::SUCCESS,
        SolveStatus::Rejected => ExitCode::from(2),
        SolveStatus::Inconclusive => ExitCode::from(3),
    })
}

fn cmd_reduce(sigma: &str) -> Result<ExitCode> {
    let sigma = Perm::parse(sigma).map_err(|e| anyhow!("--sigma: {e}"))?;
    match build_reduction_plan(&sigma) {
        Ok(plan) => {
            println!("sigma: {}", plan.sigma);
            println!("pre_shift: {}", plan.pre_shift);
            println!("working: {}", plan.working);
            let chain: Vec<String> = plan
                .chain
                .iter()
                .map(|s| format!("F{}", s.position))
                .collect();
            let ids: Vec<String> = plan.chain.iter().map(|s| s.arc_id.to_string()).collect();
            println!(
                "chain: {} (collapsed arc ids {})",
                if chain.is_empty() {
                    "(empty)".to_string()
                } else {
                    chain.join(" ")
                },
                if ids.is_empty() {
                    "none".to_string()
                } else {
                    ids.join(" ")
                }
            );
            println!(
                "survivors: {} {} {}",
                plan.survivors[0], plan.survivors[1], plan.survivors[2]
            );
            println!("q: {} {} {}", plan.q[0], plan.q[1], plan.q[2]);
            println!("induced: {}", plan.induced);
            Ok(ExitCode::SUCCESS)
        }
        Err(CurveError::CyclicShift(s)) => {
            eprintln!("rejected: {s} is a cyclic shift; no rearrangement closes a non-closed curve (and no reduction exists)");
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_render(
    path: &str,
    cuts: &str,
    sigma: Option<&str>,
    out: &str,
    cfg: &RunConfig,
) -> Result<ExitCode> {
    let table = load_table(path, cfg)?;
    let values: Vec<f64> = cuts
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| anyhow!("--cuts: {e}")))
        .collect::<Result<_>>()?;
    let cuts = Cuts::new(values).map_err(|e| anyhow!("--cuts: {e}"))?;
    let sigma = match sigma {
        Some(text) => Perm::parse(text).map_err(|e| anyhow!("--sigma: {e}"))?,
        None => Perm::identity(cuts.k()),
    };
    if sigma.k() != cuts.k() {
        bail!("sigma has {} arcs but cuts define {}", sigma.k(), cuts.k());
    }
    let composite = rearranged(&table, &sigma, &cuts)?;
    let doc = svg::render(&table, &cuts, Some(&composite))?;
    std::fs::write(out, doc).with_context(|| format!("writing {out}"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(path: &str, sigma: Option<&str>, grid: usize, cfg: &RunConfig) -> Result<ExitCode> {
    let table = load_table(path, cfg)?;
    let sigma = match sigma {
        Some(text) => Perm::parse(text).map_err(|e| anyhow!("--sigma: {e}"))?,
        None => Perm::new(vec![1, 3, 2]).expect("transposition"),
    };
    let r = oracle_grid(&table, &sigma, grid)?;
    let cuts: Vec<String> = r.cuts.values().iter().map(|c| c.to_string()).collect();
    println!("sigma: {sigma}");
    println!("grid: {grid}");
    println!("best_cuts: {}", cuts.join(" "));
    println!("residual: {}", r.residual);
    Ok(ExitCode::SUCCESS)
}
