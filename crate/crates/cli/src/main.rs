//! `selgame`: run, verify, analyze and batch selection games.

mod analyze;
mod interactive;
mod tournament;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context as _};
use clap::{Args, Parser, Subcommand};

use selgame_core::game::{verify_transcript, Certificate};
use selgame_core::scenario::{preset_named, Scenario};
use selgame_core::transcript::{from_jsonl, to_jsonl};
use selgame_core::Error;

const EXIT_MISMATCH: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_CONFIG: u8 = 64;
const EXIT_SCHEMA: u8 = 65;

#[derive(Parser)]
#[command(name = "selgame", version, about = "Selection games on [0,1] with exact certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct Overrides {
    /// Rounds to play after P_0.
    #[arg(long)]
    pub horizon: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Refinement depth cap for searches.
    #[arg(long)]
    pub depth_cap: Option<u32>,
}

impl Overrides {
    fn apply(&self, s: &mut Scenario) {
        if let Some(h) = self.horizon {
            s.horizon = h;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(d) = self.depth_cap {
            s.depth_cap = Some(d);
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Play a scenario file or a built-in preset and write its JSONL transcript.
    Play {
        scenario: String,
        #[command(flatten)]
        overrides: Overrides,
        /// Transcript path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the certificate of a transcript and compare it with the stored one.
    Verify {
        transcript: PathBuf,
    },
    /// Report the HSOP probe and the predicted winner for a function and family.
    Analyze {
        function: String,
        family: String,
        #[arg(long)]
        depth_cap: Option<u32>,
    },
    /// Play every scenario matching a glob for several seeds and print a CSV summary.
    Tournament {
        pattern: String,
        #[arg(long, default_value_t = 1)]
        repetitions: u64,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play as Player I from the terminal.
    Interactive {
        scenario: String,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit status.
pub struct Failure {
    pub code: u8,
    pub err: anyhow::Error,
}

impl Failure {
    pub fn config(err: impl Into<anyhow::Error>) -> Self {
        Failure { code: EXIT_CONFIG, err: err.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure { code: EXIT_MISMATCH, err }
    }
}

pub fn load_scenario(arg: &str) -> Result<Scenario, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(Failure::config)?;
        let mut s: Scenario = toml::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))
            .map_err(Failure::config)?;
        if s.name.is_empty() {
            s.name = path.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(s)
    } else {
        preset_named(arg).ok_or_else(|| Failure::config(anyhow!("no scenario file or preset named `{arg}`")))
    }
}

pub fn write_out(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn summary(cert: &Certificate) -> String {
    match cert {
        Certificate::Convergence { facts } => {
            let last = facts.last().expect("non-empty facts");
            format!("convergence after {} rounds; P_{} within {} of {}", facts.len(), last.round, last.radius, last.anchor)
        }
        Certificate::Divergence { alpha, gaps } => {
            let min = gaps.iter().min().expect("non-empty gaps");
            format!("divergence with alpha {alpha}; {} gaps, smallest {min}", gaps.len())
        }
        Certificate::Undecided { rounds, tail_max_gap, tail_min_gap } => {
            let show = |g: &Option<_>| g.as_ref().map_or("-".to_string(), |g: &selgame_core::Rat| g.to_string());
            format!("undecided after {rounds} rounds; tail gaps in [{}, {}]", show(tail_min_gap), show(tail_max_gap))
        }
        Certificate::Forfeit { player, index, rule } => format!("forfeit by {player:?} at move {index}: {rule}"),
    }
}

fn cmd_play(scenario: &str, overrides: &Overrides, out: Option<&Path>) -> Result<u8, Failure> {
    let mut s = load_scenario(scenario)?;
    overrides.apply(&mut s);
    s.prepare().map_err(Failure::config)?;
    let (t, cert) = s.run().map_err(Failure::config)?;
    write_out(out, &to_jsonl(&t, &cert))?;
    eprintln!("{}: {}", s.name, summary(&cert));
    Ok(match &cert {
        Certificate::Undecided { .. } => EXIT_UNDECIDED,
        Certificate::Forfeit { .. } => EXIT_MISMATCH,
        c if s.matches(c) => 0,
        c => {
            eprintln!("expected {}, got {}", s.expect.as_deref().unwrap_or("-"), c.kind());
            EXIT_MISMATCH
        }
    })
}

fn cmd_verify(path: &Path) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::config)?;
    let (t, stored) = match from_jsonl(&text) {
        Ok(v) => v,
        Err(e @ Error::Schema(_)) => return Err(Failure { code: EXIT_SCHEMA, err: e.into() }),
        Err(e) => return Err(Failure::config(e)),
    };
    let cert = verify_transcript(&t);
    println!("{}", serde_json::to_string(&cert).context("serializing certificate")?);
    println!("{}", summary(&cert));
    match stored {
        Some(s) if s == cert => Ok(0),
        Some(s) => {
            println!("mismatch: stored certificate is {}", s.kind());
            Ok(EXIT_MISMATCH)
        }
        None => {
            println!("mismatch: transcript has no stored certificate");
            Ok(EXIT_MISMATCH)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Play { scenario, overrides, out } => cmd_play(&scenario, &overrides, out.as_deref()),
        Command::Verify { transcript } => cmd_verify(&transcript),
        Command::Analyze { function, family, depth_cap } => analyze::run(&function, &family, depth_cap),
        Command::Tournament { pattern, repetitions, parallelism, overrides, out } => {
            tournament::run(&pattern, repetitions, parallelism, &overrides, out.as_deref())
        }
        Command::Interactive { scenario, overrides, out } => {
            interactive::run(&scenario, &overrides, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
