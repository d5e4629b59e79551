//! Fixed-weight ternary sampling from seeded streams, and drawing keys that
//! are invertible mod q (and mod p).
//!
//! ```bash
//! cargo run -p ntru-ke --example ternary_sampling
//! ```

use ntru_ke::ring::Params;
use ntru_ke::sampling::{sample_invertible, sample_ternary, SeededRng, TernarySpec};

fn main() -> ntru_ke::Result<()> {
    let params = Params::with_weight(11, 3, 32, 3)?;
    let spec = TernarySpec::new(3, 2);

    let mut a = SeededRng::new(42);
    let mut b = SeededRng::new(42);
    for _ in 0..3 {
        let pa = sample_ternary(spec, &params, &mut a)?;
        let pb = sample_ternary(spec, &params, &mut b)?;
        println!("{:?}  same as twin stream: {}", pa.coeffs(), pa == pb);
    }

    let mut rng = SeededRng::new(7);
    let s = sample_invertible(params.f_spec(), &params, &mut rng, true)?;
    println!("f       = {:?}", s.f.coeffs());
    println!("f^-1 q  = {:?}", s.inv_q.coeffs());
    println!("f^-1 p  = {:?}", s.inv_p.unwrap().coeffs());

    // Every coefficient equal to 1 is a zero divisor; the retry budget runs out.
    let err = sample_invertible(TernarySpec::new(11, 0), &params, &mut rng, false).unwrap_err();
    println!("all-ones spec: {err}");
    Ok(())
}
