//! Batch runner over many independent seeded sessions.

use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::ChannelMode;
use crate::adversary::{run_mitm, MitmOptions};
use crate::error::{Error, Result};
use crate::protocol::run_honest_exchange;
use crate::ring::Params;
use crate::sampling::SeededRng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub params: Params,
    pub trials: usize,
    pub base_seed: u64,
    pub mode: ChannelMode,
    #[serde(default)]
    pub continuation: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

/// Seeds for Alice, Bob and Eve in trial `index`: `base + 3i`, `+1`, `+2`.
pub fn trial_seeds(base_seed: u64, index: usize) -> [u64; 3] {
    let start = base_seed.wrapping_add(3 * index as u64);
    [start, start.wrapping_add(1), start.wrapping_add(2)]
}

/// Per-trial outcome. Only the fields relevant to the mode are set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seeds: [u64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keys_agree: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin_ok: Option<bool>,
    #[serde(rename = "f_A_match", default, skip_serializing_if = "Option::is_none")]
    pub f_a_match: Option<bool>,
    #[serde(rename = "f_B_match", default, skip_serializing_if = "Option::is_none")]
    pub f_b_match: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transparent: Option<bool>,
}

impl TrialRecord {
    /// A trial worth a human look: honest keys disagreed, or the attack did
    /// not fully succeed.
    pub fn is_flagged(&self) -> bool {
        self.keys_agree == Some(false)
            || self.f_a_match == Some(false)
            || self.f_b_match == Some(false)
    }
}

/// Aggregate counts. Key-agreement counts apply to honest mode; attack
/// counts to mitm mode; the rest stay zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub trials: usize,
    pub key_agreement_successes: usize,
    pub key_agreement_failures: usize,
    pub margin_violations: usize,
    pub attacks_attempted: usize,
    #[serde(rename = "f_A_recoveries")]
    pub f_a_recoveries: usize,
    #[serde(rename = "f_B_recoveries")]
    pub f_b_recoveries: usize,
    pub transparent_sessions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub summary: ExperimentSummary,
    /// Every trial with a disagreement or failed recovery, in trial order.
    pub flagged: Vec<TrialRecord>,
}

pub fn run_trial(cfg: &ExperimentConfig, index: usize) -> Result<TrialRecord> {
    let seeds = trial_seeds(cfg.base_seed, index);
    let [a, b, e] = seeds.map(SeededRng::new);
    let mut record = TrialRecord {
        trial: index,
        seeds,
        keys_agree: None,
        margin_ok: None,
        f_a_match: None,
        f_b_match: None,
        transparent: None,
    };
    match cfg.mode {
        ChannelMode::Honest => {
            let run = run_honest_exchange(&cfg.params, a, b)?;
            record.keys_agree = Some(run.keys_agree());
            record.margin_ok = Some(run.margin_ok(&cfg.params)?);
        }
        ChannelMode::Mitm => {
            let options = MitmOptions {
                substitute: true,
                continuation: cfg.continuation,
            };
            let run = run_mitm(&cfg.params, a, b, e, options)?;
            record.f_a_match = Some(run.report.f_a_match);
            record.f_b_match = Some(run.report.f_b_match);
            record.transparent = Some(run.report.sessions_transparent);
        }
    }
    Ok(record)
}

fn summarize(records: &[TrialRecord]) -> ExperimentSummary {
    let count = |pred: &dyn Fn(&TrialRecord) -> bool| records.iter().filter(|r| pred(r)).count();
    ExperimentSummary {
        trials: records.len(),
        key_agreement_successes: count(&|r| r.keys_agree == Some(true)),
        key_agreement_failures: count(&|r| r.keys_agree == Some(false)),
        margin_violations: count(&|r| r.margin_ok == Some(false)),
        attacks_attempted: count(&|r| r.f_a_match.is_some()),
        f_a_recoveries: count(&|r| r.f_a_match == Some(true)),
        f_b_recoveries: count(&|r| r.f_b_match == Some(true)),
        transparent_sessions: count(&|r| r.transparent == Some(true)),
    }
}

/// Runs every trial (in parallel), aggregates, and writes the JSON report
/// to `output_path` when one is configured.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let report = ExperimentReport {
        config: cfg.clone(),
        summary: summarize(&records),
        flagged: records
            .into_iter()
            .filter(TrialRecord::is_flagged)
            .collect(),
    };
    if let Some(path) = &cfg.output_path {
        fs::write(path, serde_json::to_vec_pretty(&report)?)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: ChannelMode, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            params: Params::with_weight(11, 3, 64, 2).unwrap(),
            trials,
            base_seed: 100,
            mode,
            continuation: true,
            output_path: None,
        }
    }

    #[test]
    fn seed_derivation() {
        assert_eq!(trial_seeds(10, 0), [10, 11, 12]);
        assert_eq!(trial_seeds(10, 4), [22, 23, 24]);
        assert_eq!(trial_seeds(u64::MAX, 0), [u64::MAX, 0, 1]);
    }

    #[test]
    fn zero_trials_is_config_error() {
        assert!(matches!(
            run_experiment(&cfg(ChannelMode::Honest, 0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn small_batches() {
        let honest = run_experiment(&cfg(ChannelMode::Honest, 20))
            .unwrap()
            .summary;
        assert_eq!(honest.trials, 20);
        assert_eq!(
            honest.key_agreement_successes + honest.key_agreement_failures,
            20
        );
        assert_eq!(honest.attacks_attempted, 0);

        let mitm = run_experiment(&cfg(ChannelMode::Mitm, 20)).unwrap().summary;
        assert_eq!(mitm.attacks_attempted, 20);
        assert!(mitm.f_a_recoveries <= mitm.attacks_attempted);
        assert_eq!(mitm.key_agreement_successes, 0);
    }

    #[test]
    fn writes_report() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg(ChannelMode::Honest, 3);
        c.output_path = Some(dir.path().join("report.json"));
        let report = run_experiment(&c).unwrap();
        let back: ExperimentReport =
            serde_json::from_slice(&std::fs::read(c.output_path.as_ref().unwrap()).unwrap())
                .unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn config_file_shape() {
        let json = r#"{"params":{"n":167,"p":3,"q":128,"d_f":7,"d_g":7,"d_r":7},
                       "trials":5,"base_seed":1,"mode":"mitm"}"#;
        let c: ExperimentConfig = serde_json::from_str(json).unwrap();
        assert_eq!(c.mode, ChannelMode::Mitm);
        assert!(!c.continuation);
        assert_eq!(c.params, Params::guarantee());
    }
}
