//! Command-line front end. The `ntru-ke` binary is a thin wrapper over
//! [`run`], which tests drive in-process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::channel::{Channel, ChannelMode};
use super::experiment::{run_experiment, trial_seeds, ExperimentConfig};
use super::transcript::{parse_transcript, serialize_transcript};
use super::verify::{verify, Oracle};
use crate::adversary::{run_mitm, AttackReport, MitmOptions};
use crate::error::{Error, Result};
use crate::protocol::{keygen, run_session, HonestExchange};
use crate::ring::Params;
use crate::sampling::{parse_seed, SeededRng};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ntru-ke",
    version,
    about = "NTRU key exchange and man-in-the-middle key recovery simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate one key pair and print its public and secret halves.
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "0", value_parser = seed_arg)]
        seed: u64,
    },
    /// Run one honest session and report whether both keys agree.
    Exchange {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "0", value_parser = seed_arg)]
        seed: u64,
        /// Directory for transcript.json and oracle.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one attacked session and print the attack report.
    Attack {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "0", value_parser = seed_arg)]
        seed: u64,
        /// Eve also completes a working session with each victim.
        #[arg(long)]
        continuation: bool,
        /// Directory for transcript.json, report.json and oracle.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run many independent sessions and print aggregate counts.
    Experiment {
        #[command(flatten)]
        params: ParamArgs,
        /// Base seed; trial i uses base+3i, base+3i+1, base+3i+2.
        #[arg(long, default_value = "0", value_parser = seed_arg)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, value_enum, default_value = "mitm")]
        mode: ModeArg,
        #[arg(long)]
        continuation: bool,
        /// Where to write the full JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Read the whole configuration from a JSON file instead of flags.
        #[arg(long, conflicts_with_all = ["trials", "mode", "continuation", "seed"])]
        config: Option<PathBuf>,
    },
    /// Re-derive a session's outcome from its transcript and oracle keys.
    Verify {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        oracle: PathBuf,
        /// Attack report whose claims should also be checked.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Preset {
    Guarantee,
    Lossy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Honest,
    Mitm,
}

impl From<ModeArg> for ChannelMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Honest => ChannelMode::Honest,
            ModeArg::Mitm => ChannelMode::Mitm,
        }
    }
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Starting parameter set; --n/--p/--q/--d override individual values.
    #[arg(long, value_enum, default_value = "guarantee")]
    preset: Preset,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<i64>,
    #[arg(long)]
    q: Option<i64>,
    /// Weight used for f, g and r alike.
    #[arg(long)]
    d: Option<usize>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<Params> {
        let base = match self.preset {
            Preset::Guarantee => Params::guarantee(),
            Preset::Lossy => Params::lossy(),
        };
        if self.n.is_none() && self.p.is_none() && self.q.is_none() && self.d.is_none() {
            return Ok(base);
        }
        Params::new(
            self.n.unwrap_or(base.n()),
            self.p.unwrap_or(base.p()),
            self.q.unwrap_or(base.q()),
            self.d.unwrap_or(base.d_f()),
            self.d.unwrap_or(base.d_g()),
            self.d.unwrap_or(base.d_r()),
        )
    }
}

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct KeygenOutput {
    params: Params,
    public: PublicHalf,
    secret: SecretHalf,
}

#[derive(Serialize)]
struct PublicHalf {
    h: crate::ring::Poly,
}

#[derive(Serialize)]
struct SecretHalf {
    f: crate::ring::Poly,
    g: crate::ring::Poly,
}

#[derive(Serialize)]
struct ExchangeOutput {
    transcript: serde_json::Value,
    key_a: crate::protocol::SessionKey,
    key_b: crate::protocol::SessionKey,
    keys_agree: bool,
}

/// Parses `args` (program name first) and executes the command, writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    fs::write(dir.join(name), bytes)?;
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Keygen { params, seed } => {
            let params = params.resolve()?;
            let kp = keygen(&params, &mut SeededRng::new(seed), false)?;
            print_json(
                out,
                &KeygenOutput {
                    params,
                    public: PublicHalf { h: kp.h().clone() },
                    secret: SecretHalf {
                        f: kp.f().clone(),
                        g: kp.g().clone(),
                    },
                },
            )?;
        }
        Command::Exchange {
            params,
            seed,
            out: dir,
        } => {
            let params = params.resolve()?;
            let [a, b, _] = trial_seeds(seed, 0).map(SeededRng::new);
            let mut channel = Channel::honest();
            let (alice, bob) = run_session(&params, a, b, &mut channel)?;
            let (log, _) = channel.finish();
            let messages = log.iter().map(|e| e.message.clone()).collect();
            let run = HonestExchange::from_roles(messages, alice, bob)?;
            let transcript = serialize_transcript(&log);
            if let Some(dir) = dir {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join("transcript.json"), &transcript)?;
                write_json(&dir, "oracle.json", &Oracle::from_honest(&params, &run))?;
            }
            print_json(
                out,
                &ExchangeOutput {
                    transcript: serde_json::from_slice(&transcript)?,
                    keys_agree: run.keys_agree(),
                    key_a: run.key_a,
                    key_b: run.key_b,
                },
            )?;
        }
        Command::Attack {
            params,
            seed,
            continuation,
            out: dir,
        } => {
            let params = params.resolve()?;
            let [a, b, e] = trial_seeds(seed, 0).map(SeededRng::new);
            let options = MitmOptions {
                substitute: true,
                continuation,
            };
            let run = run_mitm(&params, a, b, e, options)?;
            if let Some(dir) = dir {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join("transcript.json"), serialize_transcript(&run.log))?;
                write_json(&dir, "report.json", &run.report)?;
                write_json(&dir, "oracle.json", &Oracle::from_mitm(&params, &run))?;
            }
            print_json(out, &run.report)?;
        }
        Command::Experiment {
            params,
            seed,
            trials,
            mode,
            continuation,
            out: path,
            config,
        } => {
            let cfg = match config {
                Some(file) => {
                    let mut cfg: ExperimentConfig = serde_json::from_slice(&fs::read(file)?)?;
                    if path.is_some() {
                        cfg.output_path = path;
                    }
                    cfg
                }
                None => ExperimentConfig {
                    params: params.resolve()?,
                    trials,
                    base_seed: seed,
                    mode: mode.into(),
                    continuation,
                    output_path: path,
                },
            };
            let report = run_experiment(&cfg)?;
            print_json(out, &report.summary)?;
        }
        Command::Verify {
            transcript,
            oracle,
            report,
        } => {
            let log = parse_transcript(&fs::read(transcript)?)?;
            let oracle: Oracle = serde_json::from_slice(&fs::read(oracle)?)?;
            let claimed: Option<AttackReport> = match report {
                Some(path) => Some(serde_json::from_slice(&fs::read(path)?)?),
                None => None,
            };
            let verdict = match verify(&log, &oracle, claimed.as_ref()) {
                Ok(v) => v,
                // A transcript missing required events cannot verify.
                Err(Error::Protocol(msg)) => {
                    writeln!(out, "verification failed: {msg}")?;
                    return Ok(EXIT_VERIFY_FAILED);
                }
                Err(e) => return Err(e),
            };
            print_json(out, &verdict)?;
            if !verdict.passed() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}
