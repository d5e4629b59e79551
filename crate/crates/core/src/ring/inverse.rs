//! Inverses in `Z_m[x]/(x^N - 1)` for prime and prime-power `m`.
//!
//! Mod a prime, the extended Euclidean algorithm runs on `(x^N - 1, f)` over
//! the field `Z_prime`. Mod `prime^k`, that inverse is lifted with the
//! Newton step `a <- a * (2 - f * a)`, which doubles the p-adic precision
//! each round.

use super::{conv_mul, is_prime, prime_power, reduce_centered, sub, Poly};
use crate::error::{Error, Result};

/// Inverse of `f` modulo `prime`, or `None` when `gcd(f, x^N - 1) != 1`.
///
/// # Panics
///
/// If `prime` is not prime.
pub fn inverse_mod_prime(f: &Poly, prime: i64) -> Option<Poly> {
    assert!(is_prime(prime), "{prime} is not prime");
    let n = f.len();
    if n == 0 {
        return None;
    }
    let field = Field(prime);

    // x^N - 1
    let mut modulus = vec![0; n + 1];
    modulus[0] = field.norm(-1);
    modulus[n] = 1;
    let f_dense = trim(f.coeffs().iter().map(|&c| field.norm(c)).collect());

    // Invariant: s_i * f = r_i (mod x^N - 1).
    let (mut r0, mut r1) = (modulus, f_dense);
    let (mut s0, mut s1) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quot, rem) = field.div_rem(&r0, &r1);
        let next_s = field.sub(&s0, &field.mul(&quot, &s1));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, next_s);
    }

    // r0 is gcd(f, x^N - 1) up to a unit.
    if r0.len() != 1 {
        return None;
    }
    let scale = field.inv(r0[0]);
    let mut out = vec![0i64; n];
    for (k, &c) in s0.iter().enumerate() {
        out[k % n] = field.norm(out[k % n] + c * scale);
    }
    Some(reduce_centered(&Poly::from_coeffs(out), prime))
}

/// Inverse of `f` modulo `prime^exponent`; `None` exactly when `f` has no
/// inverse modulo `prime`.
pub fn inverse_mod_prime_power(f: &Poly, prime: i64, exponent: u32) -> Option<Poly> {
    assert!(exponent >= 1, "exponent must be positive");
    let modulus = prime.pow(exponent);
    let mut inv = inverse_mod_prime(f, prime)?;
    let two = {
        let mut t = Poly::zero(f.len());
        t.coeffs[0] = 2;
        t
    };
    let mut precision = prime;
    while precision < modulus {
        precision = precision.saturating_mul(precision);
        let fa = conv_mul(f, &inv, modulus).ok()?;
        let correction = sub(&two, &fa, modulus).ok()?;
        inv = conv_mul(&inv, &correction, modulus).ok()?;
    }
    Some(inv)
}

/// Inverse modulo any prime or prime-power `m`.
///
/// `Ok(None)` means "not invertible"; an error means the modulus itself is
/// outside what this module supports.
pub fn inverse_mod(f: &Poly, m: i64) -> Result<Option<Poly>> {
    let (prime, exponent) = prime_power(m).ok_or(Error::UnsupportedModulus(m))?;
    Ok(inverse_mod_prime_power(f, prime, exponent))
}

/// Dense polynomial arithmetic over `Z_prime`, coefficients in `[0, prime)`,
/// lowest degree first, no trailing zeros (the zero polynomial is empty).
struct Field(i64);

impl Field {
    fn norm(&self, c: i64) -> i64 {
        c.rem_euclid(self.0)
    }

    fn inv(&self, a: i64) -> i64 {
        // a^(p-2) by square and multiply
        let mut base = self.norm(a);
        let mut exp = self.0 - 2;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc
    }

    fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let len = a.len().max(b.len());
        trim(
            (0..len)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    self.norm(x - y)
                })
                .collect(),
        )
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.0;
            }
        }
        trim(out)
    }

    fn div_rem(&self, num: &[i64], den: &[i64]) -> (Vec<i64>, Vec<i64>) {
        debug_assert!(!den.is_empty());
        let mut rem = num.to_vec();
        if rem.len() < den.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = self.inv(*den.last().unwrap());
        let mut quot = vec![0; rem.len() - den.len() + 1];
        for shift in (0..quot.len()).rev() {
            let top = rem[shift + den.len() - 1];
            if top == 0 {
                continue;
            }
            let factor = top * lead_inv % self.0;
            quot[shift] = factor;
            for (k, &d) in den.iter().enumerate() {
                rem[shift + k] = self.norm(rem[shift + k] - factor * d);
            }
        }
        (trim(quot), trim(rem))
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}
