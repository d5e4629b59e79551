//! Record an attacked session to disk, verify it offline against the
//! oracle keys, then flip one coefficient and watch verification fail.
//!
//! ```bash
//! cargo run -p ntru-ke --example verify_transcript
//! ```

use ntru_ke::adversary::{run_mitm, MitmOptions};
use ntru_ke::harness::{parse_transcript, serialize_transcript, verify, Direction, Oracle};
use ntru_ke::protocol::MessageKind;
use ntru_ke::ring::{centered, Params, Poly};
use ntru_ke::sampling::SeededRng;

fn main() -> ntru_ke::Result<()> {
    let params = Params::guarantee();
    let run = run_mitm(
        &params,
        SeededRng::new(5),
        SeededRng::new(6),
        SeededRng::new(7),
        MitmOptions::default(),
    )?;

    let dir = std::env::temp_dir().join("ntru-ke-verify-example");
    std::fs::create_dir_all(&dir)?;
    let transcript_path = dir.join("transcript.json");
    std::fs::write(&transcript_path, serialize_transcript(&run.log))?;
    std::fs::write(
        dir.join("oracle.json"),
        serde_json::to_vec_pretty(&Oracle::from_mitm(&params, &run))?,
    )?;
    println!("wrote {}", dir.display());

    let oracle: Oracle = serde_json::from_slice(&std::fs::read(dir.join("oracle.json"))?)?;
    let mut log = parse_transcript(&std::fs::read(&transcript_path)?)?;
    let verdict = verify(&log, &oracle, Some(&run.report))?;
    println!("genuine transcript passes: {}", verdict.passed());

    let captured = log
        .iter_mut()
        .find(|e| e.direction == Direction::Captured && e.message.kind == MessageKind::M3)
        .expect("captured M3");
    let e = captured.message.e.as_mut().expect("M3 carries e");
    let mut coeffs = e.coeffs().to_vec();
    coeffs[0] = centered(coeffs[0] + 1, params.q());
    *e = Poly::from_coeffs(coeffs);
    let verdict = verify(&log, &oracle, None)?;
    println!(
        "tampered transcript passes: {}  problems: {:?}",
        verdict.passed(),
        verdict.problems
    );
    Ok(())
}
