use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plnet_core::exact_geometry::{format_scalar, parse_scalar, to_f64};
use plnet_core::io::{self, Artifact, FormatError};
use plnet_core::{
    compile_mesh, decompose, generate_random, stats, verify, DecomposeError, GeometryError, MeshError, NetworkError,
    NetworkStats, Point, VerifyError, VerifyOptions,
};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "plnet", version, about = "Exact piecewise-linear meshes to signed simplex sums and ReLU networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a mesh file describes a valid compactly supported PL function.
    Validate { mesh: PathBuf },
    /// Write the signed simplex decomposition of a mesh.
    Decompose {
        mesh: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Cone point as comma-separated coordinates "c1,...,c_{d+1}".
        #[arg(long, allow_hyphen_values = true)]
        cone_point: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Drop pairs of identical simplices with opposite signs.
        #[arg(long)]
        prune: bool,
    },
    /// Compile a mesh into a ReLU network file.
    Compile {
        mesh: PathBuf,
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pad the network to the architecture shared by all meshes with this many simplices.
        #[arg(long)]
        capacity: Option<usize>,
    },
    /// Evaluate a mesh, decomposition or network file at a point "x1,...,xd".
    Eval {
        artifact: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// Check mesh, decomposition and network agree on stratified samples.
    Verify {
        mesh: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, allow_hyphen_values = true)]
        cone_point: Option<String>,
        /// Negate the sign of term I before checking.
        #[arg(long, value_name = "I")]
        debug_flip_sign: Option<usize>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Generate a random valid mesh with exactly N simplices.
    Gen {
        dim: usize,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Report depth, width, size and implied constants.
    Stats(StatsArgs),
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Network file (omit with --sweep).
    #[arg(required_unless_present = "sweep")]
    network: Option<PathBuf>,
    /// Input dimension d used for the constants (defaults to the network's input size).
    #[arg(long)]
    dim: Option<usize>,
    /// Simplex count n used for the constants.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Compile generated meshes over a (d, n) grid and report the largest constants.
    #[arg(long, conflicts_with = "network")]
    sweep: bool,
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,5,10,20")]
    ns: Vec<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid point {text:?}: {source}")]
    Point { text: String, source: GeometryError },
    #[error("point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Format(FormatError::Io(_) | FormatError::Json(_) | FormatError::UnknownArtifact)
            | CliError::Write { .. }
            | CliError::Point { .. } => 2,
            _ => 1,
        }
    }
}

fn parse_point(text: &str) -> Result<Point, CliError> {
    text.split(',')
        .map(parse_scalar)
        .collect::<Result<Vec<_>, _>>()
        .map(Point::new)
        .map_err(|source| CliError::Point { text: text.to_string(), source })
}

fn emit(out: &Output, mut text: String) -> Result<(), CliError> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_dim(expected: usize, p: &Point) -> Result<(), CliError> {
    if p.dim() == expected {
        Ok(())
    } else {
        Err(CliError::PointDimension { expected, found: p.dim() })
    }
}

fn valid_mesh(path: &Path) -> Result<plnet_core::PLMesh, CliError> {
    Ok(io::read_mesh(path)?.into_validated()?)
}

fn stats_table(s: &NetworkStats) -> String {
    format!(
        "depth {}\nwidth {}\nsize  {}\nC0    {:.4}\nC1    {:.4}\nC2    {:.4}\n",
        s.depth, s.width, s.size, s.c0, s.c1, s.c2
    )
}

fn sweep(args: &StatsArgs) -> Result<String, CliError> {
    let mut out = String::from("d  n   depth width size   C0      C1      C2\n");
    let (mut c0, mut c1, mut c2) = (f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for &d in &args.dims {
        for &n in &args.ns {
            for seed in 0..args.seeds {
                let mesh = generate_random(d, n, seed)?;
                let s = stats(&compile_mesh(&mesh, seed, Some(n))?, d, n);
                c0 = c0.max(s.c0);
                c1 = c1.max(s.c1);
                c2 = c2.max(s.c2);
                if seed == 0 {
                    writeln!(
                        out,
                        "{d:<2} {n:<3} {:<5} {:<5} {:<6} {:<7.4} {:<7.4} {:.4}",
                        s.depth, s.width, s.size, s.c0, s.c1, s.c2
                    )
                    .unwrap();
                }
            }
        }
    }
    writeln!(out, "max over {} seeds: C0 {c0:.4}  C1 {c1:.4}  C2 {c2:.4}", args.seeds).unwrap();
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { mesh } => {
            let report = io::read_mesh(&mesh)?.validate();
            if report.is_valid() {
                println!("valid");
                Ok(())
            } else {
                Err(CliError::Failed(format!("invalid mesh\n{report}")))
            }
        }
        Command::Decompose { mesh, out, cone_point, seed, prune } => {
            let mesh = valid_mesh(&mesh)?;
            let cone_point = cone_point.as_deref().map(parse_point).transpose()?;
            let mut dec = decompose(&mesh, cone_point.as_ref(), seed)?;
            if prune {
                dec = dec.prune();
            }
            emit(&out, io::decomposition_to_string(&dec))
        }
        Command::Compile { mesh, out, seed, capacity } => {
            let net = compile_mesh(&valid_mesh(&mesh)?, seed, capacity)?;
            emit(&out, io::network_to_string(&net))
        }
        Command::Eval { artifact, x } => {
            let x = parse_point(&x)?;
            let value = match io::read_artifact(&artifact)? {
                Artifact::Mesh(mesh) => {
                    check_dim(mesh.dim(), &x)?;
                    format_scalar(&mesh.eval(&x).map_err(MeshError::from)?)
                }
                Artifact::Decomposition(dec) => {
                    check_dim(dec.dim(), &x)?;
                    format_scalar(&dec.eval(&x).map_err(MeshError::from)?)
                }
                Artifact::Network(net) => {
                    let coords: Vec<f64> = x.coords().iter().map(to_f64).collect();
                    format!("{:.10}", net.forward(&coords)?)
                }
            };
            println!("{value}");
            Ok(())
        }
        Command::Verify { mesh, samples, tol, seed, jobs, cone_point, debug_flip_sign, json } => {
            let mesh = io::read_mesh(&mesh)?;
            let options = VerifyOptions {
                samples,
                tolerance: tol,
                seed,
                cone_point: cone_point.as_deref().map(parse_point).transpose()?,
                flip_sign: debug_flip_sign,
                jobs,
            };
            let report = verify(&mesh, &options)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("{report}");
            }
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Failed("verification failed".into()))
            }
        }
        Command::Gen { dim, n, seed, out } => emit(&out, io::mesh_to_string(&generate_random(dim, n, seed)?)),
        Command::Stats(args) => {
            let text = match &args.network {
                Some(path) if !args.sweep => {
                    let net = io::read_network(path)?;
                    let d = args.dim.unwrap_or(net.input_dim);
                    stats_table(&stats(&net, d, args.n))
                }
                _ => sweep(&args)?,
            };
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
