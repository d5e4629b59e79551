use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::TernarySpec;

/// Largest ring dimension accepted; keeps convolution sums well inside `i64`.
pub const MAX_N: usize = 1024;
/// Largest modulus accepted for either `p` or `q`.
pub const MAX_MODULUS: i64 = 1 << 16;

/// Domain parameters `(N, p, q)` plus the ternary sampling weights.
///
/// Construct through [`Params::new`] or one of the presets; deserialization
/// runs the same validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    n: usize,
    p: i64,
    q: i64,
    d_f: usize,
    d_g: usize,
    d_r: usize,
}

#[derive(Deserialize)]
struct RawParams {
    n: usize,
    p: i64,
    q: i64,
    d_f: usize,
    d_g: usize,
    d_r: usize,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.n, raw.p, raw.q, raw.d_f, raw.d_g, raw.d_r)
    }
}

impl Params {
    pub fn new(n: usize, p: i64, q: i64, d_f: usize, d_g: usize, d_r: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(2..=MAX_N).contains(&n) || !is_prime(n as i64) {
            return bad(format!("N = {n} must be a prime no larger than {MAX_N}"));
        }
        if p < 2 || q > MAX_MODULUS {
            return bad(format!("moduli out of range: p = {p}, q = {q}"));
        }
        if q <= p {
            return bad(format!("q = {q} must exceed p = {p}"));
        }
        if gcd(p, q) != 1 {
            return bad(format!("p = {p} and q = {q} are not coprime"));
        }
        if d_f == 0 {
            return bad("d_f must be at least 1".into());
        }
        for (name, d) in [("d_f", d_f), ("d_g", d_g), ("d_r", d_r)] {
            if 2 * d >= n {
                return bad(format!("{name} = {d} violates 2*{name} < N = {n}"));
            }
        }
        Ok(Params {
            n,
            p,
            q,
            d_f,
            d_g,
            d_r,
        })
    }

    /// Same weight `d` for f, g and r.
    pub fn with_weight(n: usize, p: i64, q: i64, d: usize) -> Result<Self> {
        Self::new(n, p, q, d, d, d)
    }

    /// N = 167, p = 3, q = 128, d = 7.
    ///
    /// The largest possible coefficient of `p*(r*g) + f_a*f_b` is
    /// `3*14 + 13 = 55`, below `q/2 = 64`, so key agreement and key recovery
    /// never fail. Demo scale only: nowhere near secure.
    pub fn guarantee() -> Self {
        Self::with_weight(167, 3, 128, 7).expect("guarantee preset is valid")
    }

    /// N = 251, p = 3, q = 128, d = 36: decryption failures are possible and
    /// show up in roughly one honest session in two hundred. Demo scale only.
    pub fn lossy() -> Self {
        Self::with_weight(251, 3, 128, 36).expect("lossy preset is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn d_f(&self) -> usize {
        self.d_f
    }

    pub fn d_g(&self) -> usize {
        self.d_g
    }

    pub fn d_r(&self) -> usize {
        self.d_r
    }

    /// Private key space: `d_f` coefficients equal to +1, `d_f - 1` equal to -1.
    ///
    /// The imbalance gives `f(1) = 1`; a balanced f has `f(1) = 0` and is
    /// therefore divisible by `x - 1`, hence never invertible.
    pub fn f_spec(&self) -> TernarySpec {
        TernarySpec::new(self.d_f, self.d_f - 1)
    }

    pub fn g_spec(&self) -> TernarySpec {
        TernarySpec::new(self.d_g, self.d_g)
    }

    pub fn r_spec(&self) -> TernarySpec {
        TernarySpec::new(self.d_r, self.d_r)
    }

    /// Worst-case magnitude of a coefficient of `p*(r*g) + f_a*f_b` given
    /// the sampling weights.
    pub fn worst_case_margin(&self) -> i64 {
        let f_weight = self.f_spec().weight().min(self.n) as i64;
        let rg = self.r_spec().weight().min(self.g_spec().weight()) as i64;
        self.p * rg + f_weight
    }
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn is_prime(m: i64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `m = prime^exponent` if possible.
pub(crate) fn prime_power(m: i64) -> Option<(i64, u32)> {
    if m < 2 {
        return None;
    }
    let mut prime = 2;
    while prime * prime <= m && m % prime != 0 {
        prime += 1;
    }
    if m % prime != 0 {
        prime = m;
    }
    let mut rest = m;
    let mut exponent = 0;
    while rest % prime == 0 {
        rest /= prime;
        exponent += 1;
    }
    (rest == 1).then_some((prime, exponent))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        let g = Params::guarantee();
        assert_eq!((g.n(), g.p(), g.q()), (167, 3, 128));
        assert_eq!(g.worst_case_margin(), 55);
        assert!(g.worst_case_margin() < g.q() / 2);
        let l = Params::lossy();
        assert!(l.worst_case_margin() >= l.q() / 2);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(Params::with_weight(8, 3, 128, 2).is_err()); // N composite
        assert!(Params::with_weight(7, 3, 126, 2).is_err()); // gcd = 3
        assert!(Params::with_weight(7, 5, 5, 2).is_err()); // q <= p
        assert!(Params::with_weight(7, 3, 32, 4).is_err()); // 2d >= N
        assert!(Params::new(7, 3, 32, 0, 1, 1).is_err());
        assert!(Params::with_weight(7, 3, 32, 2).is_ok());
    }

    #[test]
    fn deserialization_validates() {
        let ok = r#"{"n":7,"p":3,"q":32,"d_f":2,"d_g":2,"d_r":2}"#;
        assert!(serde_json::from_str::<Params>(ok).is_ok());
        let bad = r#"{"n":9,"p":3,"q":32,"d_f":2,"d_g":2,"d_r":2}"#;
        assert!(serde_json::from_str::<Params>(bad).is_err());
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(prime_power(128), Some((2, 7)));
        assert_eq!(prime_power(3), Some((3, 1)));
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
