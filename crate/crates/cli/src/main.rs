//! `lawsonlab`: verification suites, volume evaluation and geometry exports.

mod export;
mod report;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lawsonlab::euler::METRIC_SCALE;
use lawsonlab::lawson::LawsonParams;
use lawsonlab::numerics::{QuadratureSpec, DEFAULT_NODES_1D};
use lawsonlab::vfields::{ellipse_length, volume_vk};

use export::{Projection, Resolution, SurfaceFormat};
use report::{Report, RunMeta};
use suites::Suite;

/// Environment override for the quadrature node count.
const NODES_ENV: &str = "LAWSONLAB_NODES";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] lawsonlab::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Export(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser)]
#[command(
    name = "lawsonlab",
    version,
    about = "Lawson surfaces, the Euler map and the fields V_k"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Quadrature nodes (overrides LAWSONLAB_NODES).
        #[arg(long)]
        nodes: Option<usize>,
        /// Finite-difference step of the Euler differential checks.
        #[arg(long, default_value_t = 1e-5)]
        fd_step: f64,
        /// Factor of the SO(3) metric `scale·tr(AᵀB)` used by the isometry check.
        #[arg(long, default_value_t = METRIC_SCALE)]
        metric_scale: f64,
    },
    /// Print vol(V_k), π L(ε_k) and L(ε_k).
    Volume {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Write a mesh or CSV sample of τ_{n,m}.
    ExportSurface {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value = "64x32")]
        res: Resolution,
        #[arg(long, value_enum, default_value_t = SurfaceFormat::Obj)]
        format: SurfaceFormat,
        #[arg(long, value_enum, default_value_t = Projection::Stereo)]
        project: Projection,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a CSV sample of V_k on the chart grid.
    ExportField {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value_t = 64)]
        res: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn node_count(flag: Option<usize>) -> Result<usize, CliError> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(NODES_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("{NODES_ENV}={v:?}: {e}")))?,
            Err(_) => DEFAULT_NODES_1D,
        },
    };
    if n < 2 {
        return Err(CliError::Usage(format!(
            "node count must be at least 2, got {n}"
        )));
    }
    Ok(n)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify {
            suite,
            seed,
            json,
            nodes,
            fd_step,
            metric_scale,
        } => {
            let meta = RunMeta {
                seed,
                node_count: node_count(nodes)?,
                fd_step,
                metric_scale,
            };
            let report = Report::new(suite.name(), &meta, suites::run(suite, &meta));
            print!("{}", report.to_text());
            if let Some(path) = json {
                write_file(&path, &report.to_json())?;
            }
            Ok(report.passed)
        }
        Command::Volume { k, nodes } => {
            let spec = QuadratureSpec::new(node_count(nodes)?)?;
            let l: f64 = ellipse_length(k, spec)?;
            let vol: f64 = volume_vk(k, spec)?;
            println!(
                "k={k} volume={vol:.16e} pi_L={:.16e} L={l:.16e}",
                std::f64::consts::PI * l
            );
            Ok(true)
        }
        Command::ExportSurface {
            n,
            m,
            radius,
            res,
            format,
            project,
            out,
        } => {
            let params = LawsonParams::new(n, m, radius)?;
            let text = match format {
                SurfaceFormat::Obj => export::surface_obj(&params, res, project)?,
                SurfaceFormat::Csv => export::surface_csv(&params, res)?,
            };
            write_file(&out, &text)?;
            Ok(true)
        }
        Command::ExportField { k, res, out } => {
            write_file(&out, &export::field_csv(k, res)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
