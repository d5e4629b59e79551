//! Eve swaps both public keys, captures each victim's ephemeral, and
//! recovers both private keys exactly.
//!
//! ```bash
//! cargo run -p ntru-ke --example mitm_attack
//! ```

use ntru_ke::adversary::{run_mitm, MitmOptions};
use ntru_ke::ring::{Params, Poly};
use ntru_ke::sampling::SeededRng;

fn main() -> ntru_ke::Result<()> {
    let params = Params::guarantee();
    let options = MitmOptions {
        substitute: true,
        continuation: false,
    };
    let run = run_mitm(
        &params,
        SeededRng::new(42),
        SeededRng::new(43),
        SeededRng::new(44),
        options,
    )?;

    for entry in &run.log {
        println!(
            "#{} {:<10} {:?} {} -> {}",
            entry.seq,
            format!("{:?}", entry.direction),
            entry.message.kind,
            entry.message.sender,
            entry.message.receiver
        );
    }
    let r = &run.report;
    println!("recovered f_A support = {:?}", support(&r.recovered_f_a));
    println!("true      f_A support = {:?}", support(&r.true_f_a));
    println!("f_A match: {}   f_B match: {}", r.f_a_match, r.f_b_match);
    Ok(())
}

/// `(index, coefficient)` for every nonzero coefficient.
fn support(f: &Poly) -> Vec<(usize, i64)> {
    f.coeffs()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .collect()
}
