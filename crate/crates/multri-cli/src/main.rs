//! multri: triangle censuses, model fitting, bounds, and Monte Carlo
//! goodness-of-fit tests for multislice networks.
//!
//! Exit codes: 0 success, 1 usage error, 2 input/parse error,
//! 3 internal consistency failure (census engines disagree).

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use multri::census::{count_by_enumeration, count_by_trace, TriangleCounts};
use multri::error::Error;
use multri::gof::{run_gof, GofConfig, GofResult};
use multri::mnet::{default_labels, parse_str, serialize, LabeledNetwork};
use multri::model::{fit_mle, sample, MserParams, RngSeed};
use multri::moments::tv_bound_general;
use multri::report::{analyze, to_json, ReportOptions};
use multri::supra::supra_matrices;

#[derive(Parser)]
#[command(
    name = "multri",
    version,
    about = "Triangle statistics for multislice networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count 1D/2D/3D triangles by both engines and check they agree
    Count {
        /// Input .mnet file, or - for stdin
        input: String,
        /// Emit the counts as JSON
        #[arg(long)]
        json: bool,
    },
    /// Maximum-likelihood edge probabilities
    Fit {
        /// Input .mnet file, or - for stdin
        input: String,
        /// One pooled probability for all layers instead of per-layer fits
        #[arg(long)]
        pooled: bool,
    },
    /// Sample one network from the model
    Simulate {
        /// Basis node count
        #[arg(long)]
        n: usize,
        /// Layer count
        #[arg(long)]
        layers: usize,
        /// Edge probabilities: one per layer, or a single shared value
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// Inter-layer link probability
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Master seed
        #[arg(long)]
        seed: u64,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo goodness-of-fit test against the fitted model
    Gof(GofArgs),
    /// Total-variation bounds for the product-Poisson approximation
    Bound {
        /// Input .mnet file, or - for stdin (fit parameters from data)
        input: Option<String>,
        /// Pool layers when fitting from data
        #[arg(long)]
        pooled: bool,
        /// Node count (with --p, instead of an input file)
        #[arg(long, conflicts_with = "input", requires = "p")]
        n: Option<usize>,
        /// Explicit edge probabilities, comma separated
        #[arg(long, value_delimiter = ',', requires = "n")]
        p: Option<Vec<f64>>,
        /// Inter-layer link probability for explicit parameters
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    /// Full analysis report as JSON
    Report {
        /// Input .mnet file, or - for stdin
        input: String,
        /// Pool layers in the fit
        #[arg(long)]
        pooled: bool,
        /// Simulation replicates for the embedded test
        #[arg(long, default_value_t = 999)]
        reps: usize,
        /// Master seed for the embedded test
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Significance level
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Reference counts to flag mismatches against, as 1D,2D,3D
        #[arg(long, value_delimiter = ',')]
        expect: Option<Vec<u64>>,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GofArgs {
    /// Input .mnet file, or - for stdin
    input: String,
    /// Pool layers in the null fit
    #[arg(long)]
    pooled: bool,
    /// Number of simulated replicates
    #[arg(long)]
    reps: usize,
    /// Master seed
    #[arg(long)]
    seed: u64,
    /// Significance level for the two-sided interval
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Write plot-ready histogram data (CSV: statistic,value,count) here
    #[arg(long)]
    hist: Option<PathBuf>,
    /// Emit the full result (with simulated vectors) as JSON
    #[arg(long)]
    json: bool,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::Io(_) => 2,
        Error::TraceNotDivisible { .. } | Error::CensusMismatch { .. } => 3,
        _ => 1,
    }
}

fn read_input(path: &str) -> Result<LabeledNetwork, Error> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        parse_str(&text)
    } else {
        multri::mnet::load_network(path)
    }
}

fn counts_line(counts: &TriangleCounts) -> String {
    format!(
        "1D {}, 2D {}, 3D {}, total {}",
        counts.one_d,
        counts.two_d,
        counts.three_d,
        counts.total()
    )
}

fn run_count(input: &str, json: bool) -> Result<(), Error> {
    let labeled = read_input(input)?;
    let trace = count_by_trace(&supra_matrices(&labeled.network))?;
    let enumeration = count_by_enumeration(&labeled.network);
    if trace != enumeration {
        return Err(Error::CensusMismatch {
            trace: trace.as_tuple(),
            enumeration: enumeration.as_tuple(),
        });
    }
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "counts": enumeration,
                "methods_agree": true,
            }))
            .expect("serializable")
        );
    } else {
        println!("{}, methods agree", counts_line(&enumeration));
    }
    Ok(())
}

fn run_fit(input: &str, pooled: bool) -> Result<(), Error> {
    let labeled = read_input(input)?;
    let fit = fit_mle(&labeled.network, pooled)?;
    let rendered: Vec<String> = fit.p.iter().map(f64::to_string).collect();
    println!("p = [{}]", rendered.join(", "));
    println!("q = {}", fit.q);
    Ok(())
}

fn run_simulate(
    n: usize,
    layers: usize,
    p: Vec<f64>,
    q: f64,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let p = match p.len() {
        1 => vec![p[0]; layers],
        len if len == layers => p,
        len => {
            return Err(Error::ConfigMismatch {
                message: format!("{len} edge probabilities for {layers} layers"),
            })
        }
    };
    let params = MserParams::new(p, q)?;
    let net = sample(&params, n, RngSeed(seed));
    let text = serialize(&net, &default_labels(n));
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn histogram_csv(result: &GofResult) -> String {
    let mut out = String::from("statistic,value,count\n");
    for stat in &result.statistics {
        let mut value_counts: Vec<(u64, usize)> = Vec::new();
        for &v in &stat.simulated {
            match value_counts.last_mut() {
                Some((value, count)) if *value == v => *count += 1,
                _ => value_counts.push((v, 1)),
            }
        }
        for (value, count) in value_counts {
            out.push_str(&format!("{},{},{}\n", stat.statistic.label(), value, count));
        }
    }
    out
}

fn run_gof_cmd(args: GofArgs) -> Result<(), Error> {
    let labeled = read_input(&args.input)?;
    let net = &labeled.network;
    let fit = fit_mle(net, args.pooled)?;
    let mut cfg = GofConfig::new(fit, net.node_count(), args.reps, RngSeed(args.seed));
    cfg.alpha = args.alpha;
    let result = run_gof(net, &cfg)?;

    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&result).expect("serializable")
        );
    } else {
        println!(
            "monte carlo test: {} replicates, alpha {}",
            result.num_replicates, result.alpha
        );
        for stat in &result.statistics {
            println!(
                "{}: observed {}, interval [{}, {}], mid-p {}, {}",
                stat.statistic.label(),
                stat.observed,
                stat.q_low,
                stat.q_high,
                stat.p_value,
                if stat.reject { "reject" } else { "keep" }
            );
        }
    }
    if let Some(path) = args.hist {
        std::fs::write(path, histogram_csv(&result))?;
    }
    Ok(())
}

fn run_bound(
    input: Option<String>,
    pooled: bool,
    n: Option<usize>,
    p: Option<Vec<f64>>,
    q: f64,
) -> Result<(), Error> {
    let (params, nodes) = match (input, n, p) {
        (Some(path), _, _) => {
            let labeled = read_input(&path)?;
            (
                fit_mle(&labeled.network, pooled)?,
                labeled.network.node_count(),
            )
        }
        (None, Some(n), Some(p)) => (MserParams::new(p, q)?, n),
        _ => {
            return Err(Error::ConfigMismatch {
                message: "provide an input file or both --n and --p".into(),
            })
        }
    };
    let report = tv_bound_general(&params, nodes);
    println!("indicator term = {}", report.indicator_term);
    println!("covariance term = {}", report.covariance_term);
    println!("general bound = {}", report.general_bound);
    if let Some(uniform) = report.uniform_bound {
        println!("uniform-case bound = {uniform}");
    }
    if report.uninformative {
        println!("bound is uninformative (a total variation distance never exceeds 1)");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_report(
    input: &str,
    pooled: bool,
    reps: usize,
    seed: u64,
    alpha: f64,
    expect: Option<Vec<u64>>,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let reference = match expect {
        None => None,
        Some(e) if e.len() == 3 => Some(TriangleCounts {
            one_d: e[0],
            two_d: e[1],
            three_d: e[2],
        }),
        Some(e) => {
            return Err(Error::ConfigMismatch {
                message: format!("--expect needs three counts, got {}", e.len()),
            })
        }
    };
    let labeled = read_input(input)?;
    let opts = ReportOptions {
        pooled,
        params: None,
        replicates: reps,
        seed: RngSeed(seed),
        alpha,
        reference,
    };
    let report = analyze(&labeled, &opts)?;
    let json = to_json(&report);
    match out {
        Some(path) => std::fs::write(path, &json)?,
        None => print!("{json}"),
    }
    if !report.census.methods_agree {
        return Err(Error::CensusMismatch {
            trace: report.census.trace.as_tuple(),
            enumeration: report.census.enumeration.as_tuple(),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let outcome = match cli.command {
        Command::Count { input, json } => run_count(&input, json),
        Command::Fit { input, pooled } => run_fit(&input, pooled),
        Command::Simulate {
            n,
            layers,
            p,
            q,
            seed,
            out,
        } => run_simulate(n, layers, p, q, seed, out),
        Command::Gof(args) => run_gof_cmd(args),
        Command::Bound {
            input,
            pooled,
            n,
            p,
            q,
        } => run_bound(input, pooled, n, p, q),
        Command::Report {
            input,
            pooled,
            reps,
            seed,
            alpha,
            expect,
            out,
        } => run_report(&input, pooled, reps, seed, alpha, expect, out),
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
