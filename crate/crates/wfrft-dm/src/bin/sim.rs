//! Experiment runner CLI.
//!
//! ```text
//! sim <experiment> [--config <path>] --seed <u64> --out <csv> \
//!     [--scheme wfrft_coop|wfrft_inde|an_dm] [--probe with_key|without_key] \
//!     [--threads N]
//! ```
//!
//! Exit codes: 0 success, 2 configuration error, 3 at least one BER point
//! did not reach its error floor (output is still written).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wfrft_dm::sim::{self, config, csv};

#[derive(Parser, Debug)]
#[command(
    name = "sim",
    about = "Link-level directional-modulation simulator over a frequency diverse array"
)]
struct Cli {
    /// Experiment: ber_vs_snr | ber_vs_angle | ber_vs_range | secrecy_vs_snr
    /// | secrecy_map | robustness_location | robustness_alpha | property_suite
    experiment: String,

    /// Key-value config file; omitted means the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed for every random stream in the run.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,

    /// Restrict the run to one scheme (default: all three).
    #[arg(long)]
    scheme: Option<String>,

    /// Probe processing for the map experiments.
    #[arg(long)]
    probe: Option<String>,

    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
}

fn run(cli: &Cli) -> Result<Vec<sim::ResultRow>, wfrft_dm::Error> {
    let kind: sim::ExperimentKind = cli.experiment.parse()?;
    let scheme = cli.scheme.as_deref().map(str::parse).transpose()?;
    let probe = cli.probe.as_deref().map(str::parse).transpose()?;
    let spec = config::load_experiment(cli.config.as_deref(), kind, cli.seed, scheme, probe)?;
    sim::run_experiment(&spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("sim: cannot size thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let rows = match run(&cli) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("sim: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = csv::write_csv(&cli.out, &rows) {
        eprintln!("sim: cannot write {}: {e}", cli.out.display());
        return ExitCode::from(2);
    }
    let unconverged = sim::any_unconverged(&rows);
    eprintln!(
        "sim: wrote {} rows to {}{}",
        rows.len(),
        cli.out.display(),
        if unconverged {
            " (some BER points below the error floor)"
        } else {
            ""
        }
    );
    if unconverged {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
