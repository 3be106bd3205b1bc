//! `l0-affine`: checks and certifies self-maps of `(L⁰)ⁿ` from JSON inputs.
//!
//! Exit codes: 0 when every requested check passes, 1 when a property is
//! violated (the witness is printed), 2 on malformed input or bad usage.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use l0_affine::fuzz::Profile;
use l0_affine::probes::ProbeBudget;

#[derive(Debug, Parser)]
#[command(
    name = "l0-affine",
    version,
    about = "Exact affine geometry in (L0)^n over finite probability spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Probability space file: {"atoms": [{"id": "a1", "prob": "1/2"}, ...]}
    #[arg(long, global = true, value_name = "FILE")]
    space: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trial count: campaign trials for `fuzz`, sampled lines elsewhere
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Random probes of each kind (vectors, scalars, line trials, lambda samples)
    #[arg(long, global = true, value_name = "N")]
    budget: Option<usize>,
    /// Write the report here instead of standard output
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl Common {
    /// The probe budget from `--budget` alone.
    fn base_budget(&self) -> ProbeBudget {
        self.budget
            .map_or_else(ProbeBudget::default, ProbeBudget::uniform)
    }

    /// The probe budget, with `--trials` setting the sampled line count.
    fn budget(&self) -> ProbeBudget {
        let mut b = self.base_budget();
        if let Some(t) = self.trials {
            b.line_trials = t;
        }
        b
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split the space into the atoms where a pair of vectors is independent and where it is not
    Decompose {
        /// {"x": VECTOR, "y": VECTOR}
        pair: PathBuf,
    },
    /// Locality, stability, injectivity, and line preservation of a map
    CheckMap {
        map: PathBuf,
        /// Re-evaluate a printed witness against the map instead
        #[arg(long, value_name = "WITNESS")]
        replay: Option<PathBuf>,
    },
    /// Recover x -> A x + b or report the first violated hypothesis
    Certify {
        map: PathBuf,
        /// Run the segment-to-line harness before certifying
        #[arg(long)]
        from_segments: bool,
    },
    /// Seeded campaign over generated maps
    Fuzz {
        #[arg(long, value_parser = parse_profile)]
        profile: Profile,
        /// Run only this trial index, as recorded in a report
        #[arg(long, value_name = "INDEX")]
        trial: Option<usize>,
    },
    /// Check whether a scalar self-map is a local unital ring endomorphism, hence the identity
    Endo { phi: PathBuf },
    /// The swap-type semilinear map: preserves lines but is not local
    #[command(name = "example-34")]
    SwapMap {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    s.parse::<Profile>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("L0_LOG")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decompose { pair } => commands::decompose(&cli.common, pair),
        Command::CheckMap { map, replay } => {
            commands::check_map(&cli.common, map, replay.as_deref())
        }
        Command::Certify { map, from_segments } => {
            commands::certify(&cli.common, map, *from_segments)
        }
        Command::Fuzz { profile, trial } => commands::fuzz(&cli.common, *profile, *trial),
        Command::Endo { phi } => commands::endo(&cli.common, phi),
        Command::SwapMap { dim } => commands::swap_map(&cli.common, *dim),
    };
    match result.and_then(|report| commands::emit(&cli.common, report)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
