//! Simulation plumbing: the in-memory channel, transcripts, batch
//! experiments, offline verification and the CLI.

pub mod channel;
pub mod cli;
pub mod experiment;
pub mod transcript;
pub mod verify;

pub use channel::{Channel, ChannelMode, Direction, LogEntry};
pub use experiment::{
    run_experiment, trial_seeds, ExperimentConfig, ExperimentReport, ExperimentSummary, TrialRecord,
};
pub use transcript::{parse_transcript, serialize_transcript};
pub use verify::{verify, EveKeys, Oracle, PartyKeys, Verification};
