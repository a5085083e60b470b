//! Command-line front end. [`run`] takes the arguments and output streams
//! explicitly so that tests can drive it in-process.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use klsparse::{
    bounded_orientation, brute_force_check, check_sparsity, forest_decomposition, generate,
    pebble_game_check, Certificate, Decomposition, GenKind, GenSpec, Graph, RecognitionResult,
    SparsityParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const EXIT_SPARSE: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "klsparse", version, about = "Check (k,l)-sparsity of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide (k,l)-sparsity; prints "sparse" or a certificate as JSON.
    Check {
        #[command(flatten)]
        params: ParamArgs,
        /// Edge-list file, or "-" for stdin.
        file: PathBuf,
    },
    /// Split the edges into kappa forests.
    Decompose {
        #[arg(long)]
        kappa: usize,
        file: PathBuf,
    },
    /// Orient the edges with every indegree at most kappa.
    Orient {
        #[arg(long)]
        kappa: usize,
        file: PathBuf,
    },
    /// Write a generated graph as an edge list.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exact edge count (random-edges only).
        #[arg(long)]
        edges: Option<usize>,
        /// Size of the dense subset (planted-violation only).
        #[arg(long)]
        planted_size: Option<usize>,
    },
    /// Run a reference checker.
    Oracle {
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        #[command(flatten)]
        params: ParamArgs,
        file: PathBuf,
    },
    /// Time recognizers on generated instances; CSV on stdout.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    reps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "main")]
    algorithms: Vec<Algorithm>,
    /// Instance family; tight-henneberg for (2,3), random-edges otherwise.
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Worker threads; rows keep their (size, seed) order.
    #[arg(long)]
    parallel: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    RandomEdges,
    TightHenneberg,
    PlantedViolation,
}

impl From<Kind> for GenKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::RandomEdges => GenKind::RandomEdges,
            Kind::TightHenneberg => GenKind::TightHenneberg,
            Kind::PlantedViolation => GenKind::PlantedViolation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Pebble,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Main,
    Pebble,
}

/// One timed run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub k: usize,
    pub l: usize,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub ns: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Sparse,
    NotSparse,
}

type Failure = (i32, String);

fn fail(e: impl std::fmt::Display) -> Failure {
    (EXIT_ERROR, e.to_string())
}

/// Runs the CLI and returns the process exit status. Errors are written to
/// `err`; clap's own help and version output go to `out` with status 0.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_SPARSE
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err((code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Check { params, file } => {
            let p = SparsityParams::new(params.k, params.l).map_err(fail)?;
            let g = read_graph(&file)?;
            let r = check_sparsity(&g, p.k(), p.l()).map_err(fail)?;
            print_result(out, p, &r)
        }
        Command::Decompose { kappa, file } => {
            let g = read_graph(&file)?;
            match forest_decomposition(&g, kappa).map_err(fail)? {
                Decomposition::Forests(fd) => {
                    for (i, class) in fd.classes().iter().enumerate() {
                        let ids: Vec<String> = class.iter().map(usize::to_string).collect();
                        writeln!(out, "forest {i}: {}", ids.join(" ")).map_err(fail)?;
                    }
                    Ok(EXIT_SPARSE)
                }
                Decomposition::Violated(c) => {
                    print_block(out, &c)?;
                    Ok(EXIT_VIOLATED)
                }
            }
        }
        Command::Orient { kappa, file } => {
            let g = read_graph(&file)?;
            match bounded_orientation(&g, kappa) {
                Ok(d) => {
                    for (e, (t, h)) in d.arcs().iter().enumerate() {
                        writeln!(out, "{e}: {t} -> {h}").map_err(fail)?;
                    }
                    Ok(EXIT_SPARSE)
                }
                Err(c) => {
                    print_block(out, &c)?;
                    Ok(EXIT_VIOLATED)
                }
            }
        }
        Command::Gen {
            kind,
            n,
            k,
            l,
            seed,
            edges,
            planted_size,
        } => {
            let spec = GenSpec {
                edges,
                planted_size,
                ..GenSpec::new(kind.into(), n, k, l, seed)
            };
            let g = generate(&spec).map_err(fail)?;
            out.write_all(g.to_edge_list().as_bytes()).map_err(fail)?;
            Ok(EXIT_SPARSE)
        }
        Command::Oracle {
            method,
            params,
            file,
        } => {
            let p = SparsityParams::new(params.k, params.l).map_err(fail)?;
            let g = read_graph(&file)?;
            let found = match method {
                Method::Brute => brute_force_check(&g, p),
                Method::Pebble => pebble_game_check(&g, p),
            }
            .map_err(fail)?;
            match found {
                None => {
                    writeln!(out, "sparse").map_err(fail)?;
                    Ok(EXIT_SPARSE)
                }
                Some(c) => {
                    writeln!(out, "not sparse").map_err(fail)?;
                    print_result(out, p, &RecognitionResult::violated(c))
                }
            }
        }
        Command::Bench(args) => {
            let records = bench(&args)?;
            write_csv(out, &records)?;
            Ok(EXIT_SPARSE)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map_err(fail)?;
    } else {
        text =
            std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    }
    Graph::parse_edge_list(&text).map_err(fail)
}

fn print_result(
    out: &mut dyn Write,
    p: SparsityParams,
    r: &RecognitionResult,
) -> Result<i32, Failure> {
    match r.report(p) {
        None => {
            writeln!(out, "sparse").map_err(fail)?;
            Ok(EXIT_SPARSE)
        }
        Some(report) => {
            let json = serde_json::to_string(&report).map_err(fail)?;
            writeln!(out, "{json}").map_err(fail)?;
            Ok(EXIT_VIOLATED)
        }
    }
}

fn print_block(out: &mut dyn Write, c: &Certificate) -> Result<(), Failure> {
    let ids: Vec<String> = c.vertices.iter().map(usize::to_string).collect();
    write!(
        out,
        "certificate\nviolating_set: {}\ninduced_edges: {}\nbound: {}\n",
        ids.join(" "),
        c.induced_edges,
        c.bound
    )
    .map_err(fail)
}

fn bench(args: &BenchArgs) -> Result<Vec<BenchRecord>, Failure> {
    let p = SparsityParams::new(args.params.k, args.params.l).map_err(fail)?;
    let kind = args
        .kind
        .map(GenKind::from)
        .unwrap_or(if (p.k(), p.l()) == (2, 3) {
            GenKind::TightHenneberg
        } else {
            GenKind::RandomEdges
        });
    let mut jobs = Vec::new();
    for &n in &args.sizes {
        for rep in 0..args.reps {
            jobs.push(GenSpec::new(kind, n, p.k(), p.l(), args.seed + rep));
        }
    }
    let run_job = |spec: &GenSpec| -> Result<Vec<BenchRecord>, Failure> {
        let g = generate(spec).map_err(fail)?;
        args.algorithms
            .iter()
            .map(|&algorithm| {
                let start = Instant::now();
                let sparse = match algorithm {
                    Algorithm::Main => check_sparsity(&g, p.k(), p.l()).map_err(fail)?.sparse,
                    Algorithm::Pebble => pebble_game_check(&g, p).map_err(fail)?.is_none(),
                };
                let ns = start.elapsed().as_nanos() as u64;
                log::info!("{algorithm:?} n={} seed={} {ns}ns", spec.n, spec.seed);
                Ok(BenchRecord {
                    algorithm,
                    k: p.k(),
                    l: p.l(),
                    n: g.num_vertices(),
                    m: g.num_edges(),
                    seed: spec.seed,
                    ns,
                    verdict: if sparse {
                        Verdict::Sparse
                    } else {
                        Verdict::NotSparse
                    },
                })
            })
            .collect()
    };
    let rows: Vec<Result<Vec<BenchRecord>, Failure>> = match args.parallel {
        Some(threads) if threads > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(fail)?
            .install(|| jobs.par_iter().map(run_job).collect()),
        _ => jobs.iter().map(run_job).collect(),
    };
    let mut records = Vec::new();
    for r in rows {
        records.extend(r?);
    }
    Ok(records)
}

pub fn write_csv(out: &mut dyn Write, records: &[BenchRecord]) -> Result<(), (i32, String)> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(fail)?;
    }
    if records.is_empty() {
        w.write_record(["algorithm", "k", "l", "n", "m", "seed", "ns", "verdict"])
            .map_err(fail)?;
    }
    w.flush().map_err(fail)
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv(text: &str) -> csv::Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect()
}
