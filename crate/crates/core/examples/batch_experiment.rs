//! Batch runs: attack success and key agreement over many seeded sessions,
//! on the guarantee preset and on the lossy one.
//!
//! ```bash
//! cargo run --release -p ntru-ke --example batch_experiment
//! ```

use ntru_ke::harness::{run_experiment, ChannelMode, ExperimentConfig};
use ntru_ke::ring::Params;

fn main() -> ntru_ke::Result<()> {
    let runs = [
        (
            "guarantee / mitm",
            Params::guarantee(),
            ChannelMode::Mitm,
            500,
        ),
        (
            "guarantee / honest",
            Params::guarantee(),
            ChannelMode::Honest,
            500,
        ),
        ("lossy / honest", Params::lossy(), ChannelMode::Honest, 2000),
    ];
    for (label, params, mode, trials) in runs {
        let cfg = ExperimentConfig {
            params,
            trials,
            base_seed: 0,
            mode,
            continuation: true,
            output_path: None,
        };
        let report = run_experiment(&cfg)?;
        println!("{label}: {}", serde_json::to_string(&report.summary)?);
        for t in report.flagged.iter().take(5) {
            println!(
                "  flagged trial {} seeds {:?} margin_ok {:?}",
                t.trial, t.seeds, t.margin_ok
            );
        }
    }
    Ok(())
}
