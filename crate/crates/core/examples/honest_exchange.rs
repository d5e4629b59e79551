//! One unattacked key exchange: three messages, two derived keys, and the
//! margin that guarantees they agree.
//!
//! ```bash
//! cargo run -p ntru-ke --example honest_exchange
//! ```

use ntru_ke::protocol::{expected_key, run_honest_exchange};
use ntru_ke::ring::Params;
use ntru_ke::sampling::SeededRng;

fn main() -> ntru_ke::Result<()> {
    let params = Params::guarantee();
    let run = run_honest_exchange(&params, SeededRng::new(1), SeededRng::new(2))?;

    for msg in &run.transcript {
        println!(
            "{:?} {} -> {}  h: {}  e: {}",
            msg.kind,
            msg.sender,
            msg.receiver,
            msg.h.is_some(),
            msg.e.is_some()
        );
    }
    let want = expected_key(run.alice.keys().f(), run.bob.keys().f(), &params)?;
    println!("K_A == K_B:           {}", run.keys_agree());
    println!("K_A == f_A*f_B mod p: {}", run.key_a == want);
    println!("margin held:          {}", run.margin_ok(&params)?);
    println!("key bytes (first 16): {:02x?}", &run.key_a.to_bytes()[..16]);
    Ok(())
}
