use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kneser_sandpile_cli::{
    group_report, profile_report, render_group, render_profile, render_snf, render_verify,
    snf_report, verify_range, CliResult, Format, Status, VerifyOptions,
};

/// Critical groups of Kneser graphs KG(n, 2), computed exactly and checked
/// against their closed forms.
#[derive(Parser)]
#[command(name = "kneser-sandpile", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads for `verify` (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Extra depth of the congruence filtration beyond the largest exponent.
    #[arg(long, global = true, default_value_t = 1)]
    i_max_extra: usize,
    /// Include per-stage wall-clock milliseconds in `verify` reports.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare computed and predicted critical groups for n_min..=n_max.
    Verify { n_min: u64, n_max: u64 },
    /// Critical group of KG(n, 2).
    Group { n: u64 },
    /// Smith normal form of a Matrix Market file.
    Snf {
        path: PathBuf,
        /// Write U and V and certify U M V = S.
        #[arg(long)]
        transforms: bool,
        /// Directory for U and V (default: next to the input).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Computed and predicted elementary divisors of KG(n, 2) at p.
    Profile { n: u64, p: u64 },
}

fn run(cli: Cli) -> CliResult<(String, bool)> {
    match cli.command {
        Command::Verify { n_min, n_max } => {
            let opts = VerifyOptions {
                i_max_extra: cli.i_max_extra,
                timings: cli.timings,
            };
            let reports = verify_range(n_min, n_max, cli.jobs, opts)?;
            let pass = reports.iter().all(|r| r.status == Status::Pass);
            Ok((render_verify(&reports, cli.format)?, pass))
        }
        Command::Group { n } => Ok((render_group(&group_report(n)?, cli.format)?, true)),
        Command::Snf {
            path,
            transforms,
            out_dir,
        } => {
            let dir = transforms.then(|| {
                out_dir.unwrap_or_else(|| {
                    path.parent()
                        .filter(|p| !p.as_os_str().is_empty())
                        .map_or_else(|| PathBuf::from("."), PathBuf::from)
                })
            });
            Ok((
                render_snf(&snf_report(&path, dir.as_deref())?, cli.format)?,
                true,
            ))
        }
        Command::Profile { n, p } => {
            let r = profile_report(n, p, cli.i_max_extra)?;
            Ok((render_profile(&r, cli.format)?, r.passed()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, pass)) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
