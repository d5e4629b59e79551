//! The margin condition behind key agreement: its worst-case bound per
//! preset, observed peaks, and a hand-built violation.
//!
//! ```bash
//! cargo run -p ntru-ke --example margin_analysis
//! ```

use ntru_ke::protocol::{check_margin, margin_poly};
use ntru_ke::ring::{Params, Poly};
use ntru_ke::sampling::{sample_ternary, SeededRng};

fn main() -> ntru_ke::Result<()> {
    for (label, params) in [
        ("guarantee", Params::guarantee()),
        ("lossy", Params::lossy()),
    ] {
        let mut rng = SeededRng::new(1);
        let mut peak = 0;
        let mut violations = 0;
        for _ in 0..1000 {
            let fa = sample_ternary(params.f_spec(), &params, &mut rng)?;
            let fb = sample_ternary(params.f_spec(), &params, &mut rng)?;
            let r = sample_ternary(params.r_spec(), &params, &mut rng)?;
            let g = sample_ternary(params.g_spec(), &params, &mut rng)?;
            peak = peak.max(margin_poly(&fa, &fb, &r, &g, &params)?.max_abs());
            violations += usize::from(!check_margin(&fa, &fb, &r, &g, &params)?);
        }
        println!(
            "{label:<9} worst case {:>3}  q/2 = {}  observed peak {peak:>3}  violations {violations}/1000",
            params.worst_case_margin(),
            params.q() / 2
        );
    }

    // Line up every product on coefficient 0.
    let params = Params::with_weight(31, 3, 32, 3)?;
    let n = 31;
    let (mut r, mut g) = (vec![0; n], vec![0; n]);
    for k in 1..=3 {
        r[k] = 1;
        g[n - k] = 1;
        r[k + 3] = -1;
        g[n - k - 3] = -1;
    }
    let one = Poly::one(n);
    let (r, g) = (Poly::from_coeffs(r), Poly::from_coeffs(g));
    let m = margin_poly(&one, &one, &r, &g, &params)?;
    println!(
        "aligned supports: coefficient 0 = {} vs q/2 = 16, margin holds: {}",
        m.coeffs()[0],
        check_margin(&one, &one, &r, &g, &params)?
    );
    Ok(())
}
