//! `chainwalk`: shape graphs, Hodge potentials, exact diffusivity, Monte
//! Carlo estimates and the invariant suite from the command line.
//!
//! Exit status: 0 on success, 1 when verification fails or a run errors,
//! 2 for usage errors, 3 when a requested order exceeds a capacity limit.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chainwalk::export::{hodge_document, potential_table_csv, VERSION};
use chainwalk::fields::{sigma_squared_exact, PotentialSource};
use chainwalk::scalar::{decimal_12, render_rational};
use chainwalk::sim::{estimate_sigma2, simulate_trajectory, Representation, SimEstimate};
use chainwalk::verify::{run_verification, VerifyOptions};
use chainwalk::{build_graph, Error, Mode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use num::ToPrimitive;
use serde::Serialize;
use serde_json::json;

/// Base directory for relative `--output` paths.
const OUTPUT_DIR_ENV: &str = "CHAINWALK_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "chainwalk", version, about = "Constrained walker chains, their shape graphs and diffusivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump the shape graph G_K.
    Graph {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Decompose A into grad f + B.
    Hodge {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[command(flatten)]
        out: Output,
    },
    /// Exact diffusivity sigma_K^2.
    Sigma {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo estimate of sigma_K^2, or a single trajectory.
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(2..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit one path instead of an estimate.
        #[arg(long)]
        trajectory: bool,
        #[arg(long, value_enum, default_value_t = RepresentationArg::Graph, requires = "trajectory")]
        representation: RepresentationArg,
        /// Report wall-clock time on stderr.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run the invariant suite for every order up to --k-max.
    Verify {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        k_max: u32,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write here instead of stdout; relative paths resolve against
    /// $CHAINWALK_OUTPUT_DIR when it is set.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RepresentationArg {
    Walker,
    Graph,
}

enum Failure {
    Usage(String),
    Run(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn json_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn unsupported(command: &str, format: Format) -> Failure {
    Failure::Usage(format!("`{command}` does not support --format {format:?}").to_lowercase())
}

fn graph_doc(k: u32, format: Format) -> Result<String, Failure> {
    let g = build_graph(k)?;
    let dump = g.dump();
    Ok(match format {
        Format::Json => json_text(&json!({
            "version": VERSION,
            "k": dump.k,
            "vertices": dump.vertices,
            "edges": dump.edges,
            "d_k": dump.d_k,
            "delta_k": dump.delta_k,
        })),
        Format::Csv => {
            let mut out = format!("# k={k} version={VERSION}\ntail,head,a,loop\n");
            for e in &dump.edges {
                let _ = writeln!(out, "{},{},{},{}", e.tail.compact(), e.head.compact(), e.a, e.is_loop);
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "G_{k}: {} vertices, D_K = {}, delta_K = {} (version {VERSION})\n",
                dump.vertices.len(),
                dump.d_k,
                dump.delta_k
            );
            for e in &dump.edges {
                let kind = if e.is_loop { "loop" } else { "move" };
                let _ = writeln!(out, "{} -> {} A={:+} {kind}", e.tail.compact(), e.head.compact(), e.a);
            }
            out
        }
    })
}

fn hodge_doc(k: u32, mode: ModeArg, format: Format) -> Result<String, Failure> {
    match format {
        Format::Csv => Ok(match mode {
            ModeArg::Exact => potential_table_csv::<BigRational>(k)?,
            ModeArg::Float => potential_table_csv::<f64>(k)?,
        }),
        Format::Json | Format::Text => {
            let doc = match mode {
                ModeArg::Exact => hodge_document::<BigRational>(k)?,
                ModeArg::Float => hodge_document::<f64>(k)?,
            };
            if format == Format::Json {
                return Ok(json_text(&doc));
            }
            let show = |v: &serde_json::Value| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let mut out = format!("k={k} mode={} version={VERSION}\n", doc.mode.as_str());
            let _ = writeln!(out, "<A, grad f> = {}", show(&doc.a_dot_grad_f));
            let _ = writeln!(out, "|B|^2 = {}", show(&doc.b_norm_squared));
            let _ = writeln!(out, "sigma^2 = {}", show(&doc.sigma_squared));
            let _ = writeln!(
                out,
                "max |div B| = {:e}, <grad f, B> = {}, solver = {} ({} iterations)",
                doc.residuals.max_divergence_b,
                show(&doc.residuals.orthogonality),
                doc.residuals.solver,
                doc.residuals.iterations
            );
            out.push_str("potential f:\n");
            for (vertex, value) in &doc.potential {
                let _ = writeln!(out, "  {vertex} {}", show(value));
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct SigmaDocument {
    version: &'static str,
    k: u32,
    mode: Mode,
    sigma_squared: String,
    decimal: String,
    a_norm_squared: String,
    a_dot_grad_f: String,
    b_norm_squared: String,
    source: PotentialSource,
}

fn sigma_doc(k: u32, format: Format) -> Result<String, Failure> {
    let r = sigma_squared_exact(k)?;
    let decimal = decimal_12(r.sigma_squared.to_f64().unwrap_or(f64::NAN));
    match format {
        Format::Json => Ok(json_text(&SigmaDocument {
            version: VERSION,
            k,
            mode: Mode::Exact,
            sigma_squared: render_rational(&r.sigma_squared),
            decimal,
            a_norm_squared: render_rational(&r.a_norm_squared),
            a_dot_grad_f: render_rational(&r.a_dot_grad_f),
            b_norm_squared: render_rational(&r.b_norm_squared),
            source: r.source,
        })),
        Format::Text => Ok(format!(
            "k={k} mode=exact version={VERSION}\nsigma^2 = {} = {decimal}\n<A, grad f> = {}\n",
            r.sigma_squared, r.a_dot_grad_f
        )),
        Format::Csv => Err(unsupported("sigma", format)),
    }
}

#[derive(Serialize)]
struct EstimateDocument<'a> {
    version: &'static str,
    mode: Mode,
    #[serde(flatten)]
    estimate: &'a SimEstimate,
}

fn estimate_doc(e: &SimEstimate, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(json_text(&EstimateDocument { version: VERSION, mode: Mode::Float, estimate: e })),
        Format::Csv => Ok(format!(
            "# version={VERSION}\nk,steps_per_trial,trials,point_estimate,std_error,seed\n{},{},{},{},{},{}\n",
            e.k, e.steps_per_trial, e.trials, e.point_estimate, e.std_error, e.seed
        )),
        Format::Text => Ok(format!(
            "k={} steps={} trials={} seed={} version={VERSION}\nsigma^2 ~ {} +- {} (target {})\n",
            e.k,
            e.steps_per_trial,
            e.trials,
            e.seed,
            e.point_estimate,
            e.std_error,
            decimal_12(2.0 / (e.k as f64 + 2.0))
        )),
    }
}

fn emit(text: &str, out: &Output) -> Result<(), Failure> {
    match &out.output {
        None => io::stdout().write_all(text.as_bytes()).map_err(Failure::Io),
        Some(path) => {
            let path = match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.clone(),
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(Failure::Io)?;
            }
            fs::write(&path, text).map_err(Failure::Io)
        }
    }
}

/// Returns whether every requested check passed.
fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Graph { k, out } => emit(&graph_doc(k, out.format)?, &out)?,
        Command::Hodge { k, mode, out } => emit(&hodge_doc(k, mode, out.format)?, &out)?,
        Command::Sigma { k, out } => emit(&sigma_doc(k, out.format)?, &out)?,
        Command::Simulate { k, steps, trials, seed, trajectory, representation, timing, out } => {
            let start = std::time::Instant::now();
            let text = if trajectory {
                let rep = match representation {
                    RepresentationArg::Walker => Representation::Walker,
                    RepresentationArg::Graph => Representation::Graph,
                };
                let t = simulate_trajectory(k, steps, seed, rep)?;
                match out.format {
                    Format::Csv => t.to_csv(),
                    Format::Json => json_text(&json!({ "version": VERSION, "trajectory": t })),
                    Format::Text => return Err(unsupported("simulate --trajectory", out.format)),
                }
            } else {
                estimate_doc(&estimate_sigma2(k, steps, trials, seed)?, out.format)?
            };
            emit(&text, &out)?;
            if timing {
                eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
            }
        }
        Command::Verify { k_max, seed, out } => {
            let report = run_verification(&VerifyOptions { k_max, seed, ..VerifyOptions::default() })?;
            let text = match out.format {
                Format::Json => json_text(&report),
                Format::Text => report.to_text(),
                Format::Csv => return Err(unsupported("verify", out.format)),
            };
            emit(&text, &out)?;
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed arguments.
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e @ Error::Capacity { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Run(e @ Error::InvalidArgument(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
