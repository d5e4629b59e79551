//! Convolution, centered reduction, inverses and the centered norm in
//! `Z_q[x]/(x^N - 1)`.
//!
//! ```bash
//! cargo run -p ntru-ke --example ring_arithmetic
//! ```

use ntru_ke::ring::{
    centered_norm, conv_mul, inverse_mod, inverse_mod_prime, reduce_centered, Poly,
};

fn main() -> ntru_ke::Result<()> {
    let n = 7;
    let f = Poly::from_coeffs(vec![1, 0, -1, 1, 0, 1, -1]);
    let x = Poly::monomial(n, 1);

    println!("f               = {:?}", f.coeffs());
    println!(
        "x * x^6         = {:?}",
        conv_mul(&x, &Poly::monomial(n, 6), 32)?.coeffs()
    );
    println!("f * f mod 32    = {:?}", conv_mul(&f, &f, 32)?.coeffs());
    println!(
        "[17, 16, -16] mod 32 centered = {:?}",
        reduce_centered(&Poly::from_coeffs(vec![17, 16, -16]), 32).coeffs()
    );

    for m in [3, 32, 128] {
        match inverse_mod(&f, m)? {
            Some(inv) => {
                let check = conv_mul(&f, &inv, m)?;
                println!(
                    "f^-1 mod {m:<3}    = {:?}  (f * f^-1 = {:?})",
                    inv.coeffs(),
                    check.coeffs()
                );
            }
            None => println!("f is not invertible mod {m}"),
        }
    }

    let ones = Poly::from_coeffs(vec![1; n]);
    println!(
        "all-ones invertible mod 3? {}",
        inverse_mod_prime(&ones, 3).is_some()
    );
    println!("centered norm of f = {:.4}", centered_norm(&f));
    Ok(())
}
