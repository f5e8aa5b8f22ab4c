//! Command-line front end for the symspace engines.
//!
//! Exit codes: 0 pass, 1 negative verdict, 2 inconclusive, 64 usage or parse
//! error, 65 precondition failure, 66 depth or resource limit.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use symspace::cex::{CexFamily, DEFAULT_SEED};
use symspace::embed::{
    construct_rho, embedding_chain, series_test, verify_rho, witness_search, SeriesVerdict,
};
use symspace::gfun::{
    dilation_profile, parse_gfun, parse_positive, positive_ratio_index, vanishing_ratio,
    IndexConfig,
};
use symspace::norms::{lorentz_norm, marcinkiewicz_sup, orlicz_norm, quasi_norm, OrliczFunction};
use symspace::stepfn::StepFunction;
use symspace::trend::TrendConfig;
use symspace::Error;

use report::{Format, Output};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PRECONDITION: u8 = 65;
const EXIT_DEPTH: u8 = 66;

#[derive(Parser)]
#[command(
    name = "symspace",
    version,
    about = "Norms, dilation indices and embedding tests for rearrangement-invariant spaces on step functions"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dilation profile and index estimates of a weight function.
    Indices {
        /// Weight spec: pow:a | powlog:a:b | table:<path> | scaled:c:<spec>.
        spec: String,
        /// Dilation window: arguments 2^-j .. 2^j.
        #[arg(long, default_value_t = 60)]
        j: usize,
        /// Probe depth (at least 2j).
        #[arg(long, default_value_t = 120)]
        k: usize,
    },
    /// Increment-series and ratio-condition tests for a weight pair.
    Embed {
        phi: String,
        psi: String,
        #[arg(long, default_value_t = 60)]
        depth: usize,
        /// Also search for n disjoint witness measures.
        #[arg(long)]
        witness: Option<usize>,
        /// Also run the index-gap embedding chain.
        #[arg(long)]
        chain: bool,
    },
    /// Build and check the replacement weight for a pair.
    Rho {
        phi: String,
        psi: String,
        /// Decay budget; capped at half the headroom above phi's upper index.
        #[arg(long, default_value_t = 0.25)]
        u: f64,
        #[arg(long, default_value_t = 60)]
        depth: usize,
    },
    /// Build the disjoint equivalence family and verify every bound.
    VerifyCex {
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Evaluate one norm of a step function from a JSON file.
    Norm {
        /// Which norm engine to run.
        #[arg(value_enum)]
        space: Space,
        /// Weight spec; marc also accepts tilde:<spec> and const:c, orlicz
        /// takes pow:p or table:<path>. Use "-" for f.
        spec: String,
        /// Step-function JSON file.
        path: PathBuf,
        /// Family depth for the f norm.
        #[arg(long, default_value_t = 5)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Lorentz,
    Marc,
    Quasi,
    Orlicz,
    F,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let out = Output::new(cli.format, cli.out.clone());
    match run(cli, &out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Domain(_) | Error::NonConvex(_) => EXIT_USAGE,
        Error::PreconditionFailed(_)
        | Error::EmbedOrder(_)
        | Error::Overlap(_)
        | Error::Range(_) => EXIT_PRECONDITION,
        Error::Depth(_) => EXIT_DEPTH,
        Error::FitUnstable(_) => EXIT_INCONCLUSIVE,
    }
}

fn run(cli: Cli, out: &Output) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Indices { spec, j, k } => cmd_indices(&spec, j, k, out),
        Cmd::Embed { phi, psi, depth, witness, chain } => {
            cmd_embed(&phi, &psi, depth, witness, chain, out)
        }
        Cmd::Rho { phi, psi, u, depth } => cmd_rho(&phi, &psi, u, depth, out),
        Cmd::VerifyCex { m, samples, seed } => cmd_verify_cex(m, samples, seed, out),
        Cmd::Norm { space, spec, path, m } => cmd_norm(space, &spec, &path, m, out),
    }
}

fn cmd_indices(spec: &str, j: usize, k: usize, out: &Output) -> Result<u8, Error> {
    let f = parse_positive(spec)?;
    let cfg = IndexConfig { j_max: j, k_depth: k, ..IndexConfig::default() };
    let profile = dilation_profile(&f, &cfg)?;
    out.emit(&report::indices_report(spec, &profile))?;
    Ok(if profile.stable { 0 } else { EXIT_INCONCLUSIVE })
}

fn cmd_embed(
    phi_spec: &str,
    psi_spec: &str,
    depth: usize,
    witness: Option<usize>,
    chain: bool,
    out: &Output,
) -> Result<u8, Error> {
    let phi = parse_gfun(phi_spec)?;
    let psi = parse_gfun(psi_spec)?;
    let trend_cfg = TrendConfig { depth, ..TrendConfig::default() };
    let index_cfg = IndexConfig::default();

    let series = series_test(&phi, &psi, depth.max(32));
    let vanishing = vanishing_ratio(&phi, &psi, &trend_cfg)?;
    let gap = positive_ratio_index(&phi, &psi, &index_cfg)?;
    let witness_outcome = witness.map(|n| witness_search(&phi, &psi, n, depth.max(32)));
    let chain_report = if chain { Some(embedding_chain(&phi, &psi, &index_cfg)?) } else { None };

    out.emit(&report::embed_report(
        phi_spec,
        psi_spec,
        &series,
        &vanishing,
        &gap,
        witness_outcome.as_ref(),
        chain_report.as_ref(),
    ))?;
    Ok(match series.verdict {
        SeriesVerdict::Converges => 0,
        SeriesVerdict::Diverges => EXIT_NEGATIVE,
        SeriesVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn cmd_rho(phi_spec: &str, psi_spec: &str, u: f64, depth: usize, out: &Output) -> Result<u8, Error> {
    let phi = parse_gfun(phi_spec)?;
    let psi = parse_gfun(psi_spec)?;
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::PreconditionFailed(format!("decay budget u={u} outside (0,1)")));
    }
    let rc = construct_rho(&phi, &psi, u, depth)?;
    let rep = verify_rho(&rc, &phi, &psi, depth);
    out.emit(&report::rho_report(phi_spec, psi_spec, &rc, &rep))?;
    Ok(if rep.pass { 0 } else { EXIT_NEGATIVE })
}

fn cmd_verify_cex(m: usize, samples: u64, seed: u64, out: &Output) -> Result<u8, Error> {
    let family = CexFamily::build(m)?;
    let rep = family.verify(samples, seed);
    out.emit(&report::cex_report(&rep))?;
    Ok(if rep.pass { 0 } else { EXIT_NEGATIVE })
}

fn cmd_norm(space: Space, spec: &str, path: &PathBuf, m: usize, out: &Output) -> Result<u8, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let x = StepFunction::from_json_str(&text)?;
    let rep = match space {
        Space::Lorentz => {
            let phi = parse_gfun(spec)?;
            report::norm_report("lorentz", lorentz_norm(&x, &phi), None)
        }
        Space::Marc => {
            let theta = parse_positive(spec)?;
            let sup = marcinkiewicz_sup(&x, &theta, 64);
            report::norm_report("marc", sup.value, Some(report::NormDetail::Sup(sup)))
        }
        Space::Quasi => {
            let psi = parse_gfun(spec)?;
            report::norm_report("quasi", quasi_norm(&x, &psi), None)
        }
        Space::Orlicz => {
            let n = parse_orlicz(spec)?;
            report::norm_report("orlicz", orlicz_norm(&x, &n), None)
        }
        Space::F => {
            let family = CexFamily::build(m)?;
            let f = family.f_norm(&x, 1e-9);
            let value = f.value;
            report::norm_report("f", value, Some(report::NormDetail::F(f)))
        }
    };
    out.emit(&rep)?;
    Ok(0)
}

fn parse_orlicz(spec: &str) -> Result<OrliczFunction, Error> {
    match spec.split_once(':') {
        Some(("pow", p)) => {
            let p: f64 = p.parse().map_err(|_| Error::Parse(format!("bad exponent '{spec}'")))?;
            OrliczFunction::power(p)
        }
        Some(("table", path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("table file {path}: {e}")))?;
            let pts: Vec<(f64, f64)> = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("table file {path}: {e}")))?;
            OrliczFunction::table_convex(pts)
        }
        _ => Err(Error::Parse(format!("unknown modular spec '{spec}'"))),
    }
}
