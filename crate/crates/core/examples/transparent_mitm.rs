//! Eve keeps both victims talking: each completes a session whose key she
//! can recompute, so neither side sees anything unusual.
//!
//! ```bash
//! cargo run -p ntru-ke --example transparent_mitm
//! ```

use ntru_ke::adversary::{run_mitm, MitmOptions};
use ntru_ke::ring::Params;
use ntru_ke::sampling::SeededRng;

fn main() -> ntru_ke::Result<()> {
    let params = Params::guarantee();
    let run = run_mitm(
        &params,
        SeededRng::new(7),
        SeededRng::new(8),
        SeededRng::new(9),
        MitmOptions::default(),
    )?;

    let alice = run.alice.session_key().expect("alice finished");
    let bob = run.bob.session_key().expect("bob finished");
    let eve_a = run
        .report
        .session_key_with_alice
        .as_ref()
        .expect("continuation on");
    let eve_b = run
        .report
        .session_key_with_bob
        .as_ref()
        .expect("continuation on");

    println!("alice's key == eve's key with alice: {}", alice == eve_a);
    println!("bob's key   == eve's key with bob:   {}", bob == eve_b);
    println!("alice's key == bob's key:            {}", alice == bob);
    let valid = run.log.iter().all(|e| e.message.validate(&params).is_ok());
    println!("every message on the wire is well formed: {valid}");
    Ok(())
}
