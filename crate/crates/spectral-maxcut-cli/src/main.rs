//! Command-line front end: spectral Max Cut / CutGain solvers, exact
//! oracles, certificates, sparsification, degree reduction, and a
//! benchmark harness. All outputs are single-line JSON (TSV for `bench`)
//! and are byte-identical across runs for a fixed input, flags and seed.

use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spectral_maxcut::{
    bipartite, certify, gain, graph, maxcut, reduce, sparsify, Error as LibError, GraphFormat,
    WeightMode, WeightedGraph,
};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "spectral-maxcut", version, about = "Spectral Max Cut toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Dimacs,
    EdgeList,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dimacs => GraphFormat::Dimacs,
            FormatArg::EdgeList => GraphFormat::EdgeList,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StopRuleArg {
    Paper,
    Relaxed,
}

#[derive(Args)]
struct InputArgs {
    /// Graph file, or `-` for stdin.
    input: PathBuf,
    /// Input format.
    #[arg(long, value_enum, default_value = "dimacs")]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvector quality and the implied Max Cut upper bound.
    Eig {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Two-thresholds spectral sweep (eigensolver + rounding).
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Exact bipartiteness ratio with its spectral bounds (n ≤ 20).
    Beta {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Recursive spectral Max Cut with a dual certificate.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "paper")]
        stop_rule: StopRuleArg,
        /// Write the per-iteration trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Sparsify before solving (cut fractions move by at most
        /// 2·sparsify-delta; the certificate refers to the sparsified graph).
        #[arg(long)]
        sparsify_first: bool,
        #[arg(long, default_value_t = 0.05)]
        sparsify_delta: f64,
    },
    /// Feasibility of the diagonal dual solution / best certified bound.
    Certify {
        #[command(flatten)]
        input: InputArgs,
        /// Claimed eps; omitted means "find the best".
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Four-threshold CutGain rounding (signed weights allowed).
    Gain {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        ell_override: Option<f64>,
    },
    /// Weight-proportional edge sampling; emits the multigraph as DIMACS.
    Sparsify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.05)]
        sparsify_delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Bounded-degree reduction; emits the multigraph plus a copy map.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output path for the reduced graph (`-` for stdout).
        #[arg(long, default_value = "-")]
        out_graph: PathBuf,
        /// Output path for the JSON copy-map sidecar.
        #[arg(long)]
        out_map: PathBuf,
    },
    /// Map a cut of a reduced graph back to the original.
    Lift {
        /// The original graph.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "dimacs")]
        format: FormatArg,
        /// Copy-map sidecar produced by `reduce`.
        #[arg(long)]
        map: PathBuf,
        /// Cut of the reduced graph: whitespace-separated 0/1 per vertex.
        #[arg(long)]
        cut: PathBuf,
        /// The reduced graph itself.
        #[arg(long)]
        reduced: PathBuf,
    },
    /// Run the solver over every graph file in a directory; TSV output.
    Bench {
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "dimacs")]
        format: FormatArg,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct ErrorOut {
    schema: u32,
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
}

fn emit_error(err: &LibError) -> ExitCode {
    let line = match err {
        LibError::Parse { line, .. } | LibError::SelfLoop { line } | LibError::NegativeWeight { line } => {
            Some(*line)
        }
        _ => None,
    };
    let out = ErrorOut {
        schema: SCHEMA,
        error: err.to_string(),
        line,
    };
    eprintln!("{}", serde_json::to_string(&out).unwrap());
    match err {
        LibError::NoGainCertificate => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn load(input: &InputArgs, mode: WeightMode) -> Result<WeightedGraph, LibError> {
    load_path(&input.input, input.format.into(), mode)
}

fn load_path(path: &Path, format: GraphFormat, mode: WeightMode) -> Result<WeightedGraph, LibError> {
    if path == Path::new("-") {
        let stdin = io::stdin();
        graph::load_graph(stdin.lock(), format, mode)
    } else {
        let file = File::open(path).map_err(|e| LibError::Parse {
            line: 0,
            msg: format!("{}: {e}", path.display()),
        })?;
        graph::load_graph(BufReader::new(file), format, mode)
    }
}

fn print_json<T: Serialize>(value: &T) {
    emit_line(&serde_json::to_string(value).unwrap());
}

/// Write one line to stdout, exiting quietly if the reader hung up
/// (e.g. the output is piped into `head`).
fn emit_line(line: &str) {
    let mut out = io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SPECTRAL_MAXCUT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => emit_error(&e),
    }
}

fn run(command: Command) -> Result<ExitCode, LibError> {
    match command {
        Command::Eig { input, delta, seed } => {
            let g = load(&input, WeightMode::MaxCut)?;
            let v = spectral_maxcut::eigen::smallest_eigvec(&g, delta, seed)?;

            #[derive(Serialize)]
            struct EigOut {
                schema: u32,
                eps_x: f64,
                delta: f64,
                /// `1 - (eps_x - delta)/2`, clamped to [1/2, 1].
                implied_upper_bound: f64,
            }
            print_json(&EigOut {
                schema: SCHEMA,
                eps_x: v.eps_x(),
                delta,
                implied_upper_bound: (1.0 - (v.eps_x() - delta) / 2.0).clamp(0.5, 1.0),
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { input, delta, seed } => {
            let g = load(&input, WeightMode::MaxCut)?;
            let r = bipartite::spectral_partition(&g, delta, seed)?;

            #[derive(Serialize)]
            struct SweepOut {
                schema: u32,
                ratio: f64,
                bound: f64,
                support_size: usize,
                /// 1-based vertex ids.
                l: Vec<usize>,
                r: Vec<usize>,
            }
            print_json(&SweepOut {
                schema: SCHEMA,
                ratio: r.stats.ratio,
                bound: r.bound,
                support_size: r.y.support_size(),
                l: r.y.negatives().iter().map(|v| v + 1).collect(),
                r: r.y.positives().iter().map(|v| v + 1).collect(),
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Beta { input } => {
            let g = load(&input, WeightMode::MaxCut)?;
            let r = bipartite::beta_exact(&g)?;

            #[derive(Serialize)]
            struct BetaOut {
                schema: u32,
                beta: f64,
                lambda_n: f64,
                lower: f64,
                upper: f64,
            }
            print_json(&BetaOut {
                schema: SCHEMA,
                beta: r.beta,
                lambda_n: r.lambda_n,
                lower: r.lower,
                upper: r.upper,
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            input,
            delta,
            seed,
            stop_rule,
            trace,
            sparsify_first,
            sparsify_delta,
        } => {
            let g = load(&input, WeightMode::MaxCut)?;
            let rule = match stop_rule {
                StopRuleArg::Paper => maxcut::StopRule::Paper,
                StopRuleArg::Relaxed => maxcut::StopRule::Relaxed,
            };
            let solve_graph = if sparsify_first {
                sparsify::sparsify(&g, &sparsify::SparsifyParams::new(sparsify_delta, seed))?
            } else {
                g.clone()
            };
            let (cut, tr) = maxcut::recursive_spectral_cut(&solve_graph, delta, seed, rule)?;
            let report = certify::primal_dual_report(&tr, &solve_graph);
            // The side assignment is on the shared vertex set; report the
            // fraction on the input graph.
            let (_, fraction_on_input) = graph::evaluate_cut(&g, &cut.side);

            if let Some(path) = trace {
                write_trace(&path, &tr)?;
            }

            #[derive(Serialize)]
            struct SolveOut {
                schema: u32,
                cut_fraction: f64,
                sides: Vec<u8>,
                certified_upper_bound: f64,
                ratio_lower_bound: f64,
                depth: usize,
                stop_reason: &'static str,
            }
            print_json(&SolveOut {
                schema: SCHEMA,
                cut_fraction: fraction_on_input,
                sides: cut.side.clone(),
                certified_upper_bound: report.certified_upper_bound,
                ratio_lower_bound: report.ratio,
                depth: tr.depth,
                stop_reason: stop_reason_name(tr.stop_reason),
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { input, eps, tol } => {
            let g = load(&input, WeightMode::MaxCut)?;
            let cert = match eps {
                Some(e) => certify::certify_upper_bound(&g, e, tol)?,
                None => certify::best_certificate(&g, tol)?,
            };

            #[derive(Serialize)]
            struct CertifyOut {
                schema: u32,
                eps: f64,
                upper_bound: f64,
                feasible: bool,
                psd_margin: f64,
                method: &'static str,
            }
            print_json(&CertifyOut {
                schema: SCHEMA,
                eps: cert.eps,
                upper_bound: cert.upper_bound(),
                feasible: cert.feasible,
                psd_margin: cert.psd_margin,
                method: match cert.method {
                    certify::CertMethod::Dense => "dense",
                    certify::CertMethod::PowerIteration => "power_iteration",
                },
            });
            if eps.is_some() && !cert.feasible {
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gain {
            input,
            seed,
            ell_override,
        } => {
            let g = load(&input, WeightMode::Gain)?;
            let r = gain::four_threshold_spectral_cut_with(&g, seed, ell_override)?;
            // |λ_n| upper-bounds the gain ratio γ(G).
            let cert = certify::best_certificate(&g, 1e-7)?;
            let lambda_abs = 1.0 - 2.0 * cert.eps;

            #[derive(Serialize)]
            struct GainOut {
                schema: u32,
                gain: f64,
                support_size: usize,
                eps_spectral: f64,
                ell: f64,
                ell_clamped: bool,
                guarantee: f64,
                certificate: f64,
            }
            print_json(&GainOut {
                schema: SCHEMA,
                gain: r.gain,
                support_size: r.y.support_size(),
                eps_spectral: r.eps_spectral,
                ell: r.params.ell,
                ell_clamped: r.params.ell_clamped,
                guarantee: r.guarantee,
                certificate: lambda_abs,
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Sparsify {
            input,
            sparsify_delta,
            seed,
        } => {
            let g = load(&input, WeightMode::MaxCut)?;
            let h = sparsify::sparsify(&g, &sparsify::SparsifyParams::new(sparsify_delta, seed))?;
            let stdout = io::stdout();
            write_dimacs(&mut stdout.lock(), &h)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce {
            input,
            delta,
            seed,
            out_graph,
            out_map,
        } => {
            let g = load(&input, WeightMode::MaxCut)?;
            let art = reduce::reduce(&g, delta, seed)?;
            if out_graph == Path::new("-") {
                let stdout = io::stdout();
                write_dimacs(&mut stdout.lock(), &art.gprime)?;
            } else {
                let mut f = File::create(&out_graph).map_err(io_err)?;
                write_dimacs(&mut f, &art.gprime)?;
            }

            #[derive(Serialize)]
            struct MapOut {
                schema: u32,
                n: usize,
                n_hat: usize,
                sample_count: usize,
                seed: u64,
                copy_map: Vec<(usize, usize)>,
            }
            let map = MapOut {
                schema: SCHEMA,
                n: g.n(),
                n_hat: art.gprime.n(),
                sample_count: art.sample_count,
                seed: art.seed,
                copy_map: art.copy_map.clone(),
            };
            let mut f = File::create(&out_map).map_err(io_err)?;
            writeln!(f, "{}", serde_json::to_string(&map).unwrap()).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Lift {
            graph: graph_path,
            format,
            map,
            cut,
            reduced,
        } => {
            let g = load_path(&graph_path, format.into(), WeightMode::MaxCut)?;
            let gprime = load_path(&reduced, GraphFormat::Dimacs, WeightMode::MaxCut)?;
            let map_text = std::fs::read_to_string(&map).map_err(io_err)?;
            let map_json: serde_json::Value =
                serde_json::from_str(&map_text).map_err(|e| LibError::Parse {
                    line: 0,
                    msg: format!("copy map: {e}"),
                })?;
            let copy_map: Vec<(usize, usize)> =
                serde_json::from_value(map_json["copy_map"].clone()).map_err(|e| {
                    LibError::Parse {
                        line: 0,
                        msg: format!("copy map: {e}"),
                    }
                })?;
            let sides = read_cut_file(&cut, gprime.n())?;
            let art = reduce::ReductionArtifact {
                sample_count: gprime.m(),
                gprime,
                copy_map,
                seed: 0,
            };
            let cut_prime = graph::Cut::from_sides(&art.gprime, sides);
            let e0 = reduce::lift_expectation(&art, &g, &cut_prime);
            let lifted = reduce::lift_cut(&art, &g, &cut_prime);

            #[derive(Serialize)]
            struct LiftOut {
                schema: u32,
                cut_weight: f64,
                cut_fraction: f64,
                expected_start: f64,
                sides: Vec<u8>,
            }
            print_json(&LiftOut {
                schema: SCHEMA,
                cut_weight: lifted.cut_weight,
                cut_fraction: lifted.cut_fraction,
                expected_start: e0,
                sides: lifted.side,
            });
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            dir,
            format,
            delta,
            seed,
        } => {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(&dir)
                .map_err(io_err)?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            emit_line("file\tn\tm\tcut_fraction\tcertified_bound\tratio\twall_ms\tdepth");
            let mut min_ratio = f64::INFINITY;
            let mut failures = 0usize;
            for path in &entries {
                let name = path.file_name().unwrap().to_string_lossy();
                let started = std::time::Instant::now();
                let result = load_path(path, format.into(), WeightMode::MaxCut).and_then(|g| {
                    let (cut, tr) =
                        maxcut::recursive_spectral_cut(&g, delta, seed, maxcut::StopRule::Paper)?;
                    let report = certify::primal_dual_report(&tr, &g);
                    Ok((g, cut, tr, report))
                });
                match result {
                    Ok((g, cut, tr, report)) => {
                        min_ratio = min_ratio.min(report.ratio);
                        emit_line(&format!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            name,
                            g.n(),
                            g.m(),
                            cut.cut_fraction,
                            report.certified_upper_bound,
                            report.ratio,
                            started.elapsed().as_millis(),
                            tr.depth
                        ));
                    }
                    Err(e) => {
                        failures += 1;
                        emit_line(&format!("{name}\terror\t{e}"));
                    }
                }
            }
            if min_ratio.is_finite() {
                emit_line(&format!("# min_ratio\t{min_ratio}"));
            }
            if failures > 0 {
                emit_line(&format!("# failures\t{failures}"));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn stop_reason_name(r: maxcut::StopReason) -> &'static str {
    match r {
        maxcut::StopReason::WeakSpectralCut => "weak_spectral_cut",
        maxcut::StopReason::EmptyGraph => "empty_graph",
    }
}

fn io_err(e: io::Error) -> LibError {
    if e.kind() == io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    LibError::Parse {
        line: 0,
        msg: e.to_string(),
    }
}

fn write_trace(path: &Path, tr: &maxcut::SolveTrace) -> Result<(), LibError> {
    #[derive(Serialize)]
    struct IterOut {
        rho: f64,
        m: f64,
        u: f64,
        c: f64,
        x: f64,
        eps_x: f64,
        eps_t: f64,
        accepted: bool,
    }
    #[derive(Serialize)]
    struct TraceOut {
        schema: u32,
        delta: f64,
        stop_reason: &'static str,
        depth: usize,
        cut_fraction: f64,
        iterations: Vec<IterOut>,
    }
    let out = TraceOut {
        schema: SCHEMA,
        delta: tr.delta,
        stop_reason: stop_reason_name(tr.stop_reason),
        depth: tr.depth,
        cut_fraction: tr.final_cut.cut_fraction,
        iterations: tr
            .iterations
            .iter()
            .map(|r| IterOut {
                rho: r.rho,
                m: r.m,
                u: r.u,
                c: r.c,
                x: r.x,
                eps_x: r.eps_x,
                eps_t: r.eps_t,
                accepted: r.accepted,
            })
            .collect(),
    };
    let mut f = File::create(path).map_err(io_err)?;
    writeln!(f, "{}", serde_json::to_string(&out).unwrap()).map_err(io_err)
}

fn write_dimacs(w: &mut impl Write, g: &WeightedGraph) -> Result<(), LibError> {
    let mut buf = String::new();
    buf.push_str(&format!("p edge {} {}\n", g.n(), g.m()));
    for e in g.edges() {
        if e.w == 1.0 {
            buf.push_str(&format!("e {} {}\n", e.u + 1, e.v + 1));
        } else {
            buf.push_str(&format!("e {} {} {}\n", e.u + 1, e.v + 1, e.w));
        }
    }
    w.write_all(buf.as_bytes()).map_err(io_err)
}

fn read_cut_file(path: &Path, expect: usize) -> Result<Vec<u8>, LibError> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
    } else {
        File::open(path)
            .map_err(io_err)?
            .read_to_string(&mut text)
            .map_err(io_err)?;
    }
    let sides: Vec<u8> = text
        .split_whitespace()
        .map(|t| match t {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            other => Err(LibError::Parse {
                line: 0,
                msg: format!("cut entries must be 0 or 1, got '{other}'"),
            }),
        })
        .collect::<Result<_, _>>()?;
    if sides.len() != expect {
        return Err(LibError::Parse {
            line: 0,
            msg: format!("cut has {} entries, reduced graph has {expect}", sides.len()),
        });
    }
    Ok(sides)
}
