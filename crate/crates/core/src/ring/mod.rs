//! Arithmetic in the truncated polynomial ring `Z_m[x]/(x^N - 1)`.
//!
//! Every operation that takes a modulus returns coefficients in the centered
//! interval `(-m/2, m/2]`. The centered lift is what lets a value computed
//! mod q be reduced again mod p and still recover a small integer
//! combination, so it is applied eagerly after every ring operation.

mod inverse;
mod params;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use inverse::{inverse_mod, inverse_mod_prime, inverse_mod_prime_power};
pub(crate) use params::{is_prime, prime_power};
pub use params::{Params, MAX_MODULUS, MAX_N};

use crate::error::{Error, Result};

/// Element of `Z[x]/(x^N - 1)`, lowest degree first.
///
/// Serializes as a bare JSON integer array.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<i64>,
}

impl Poly {
    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        Poly { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Poly { coeffs: vec![0; n] }
    }

    /// The multiplicative identity `[1, 0, ..., 0]`.
    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0)
    }

    /// `x^k` reduced modulo `x^N - 1`.
    pub fn monomial(n: usize, k: usize) -> Self {
        let mut p = Self::zero(n);
        p.coeffs[k % n] = 1;
        p
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn negate(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| -c).collect())
    }

    /// Multiplies every coefficient by `k` without any reduction.
    pub fn scale(&self, k: i64) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// True when every coefficient lies in `(-m/2, m/2]`.
    pub fn is_centered(&self, m: i64) -> bool {
        self.coeffs.iter().all(|&c| centered(c, m) == c)
    }

    pub fn is_ternary(&self) -> bool {
        self.coeffs.iter().all(|c| (-1..=1).contains(c))
    }

    /// Ternary weight: count of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Canonical byte encoding: one two's-complement byte per coefficient.
    ///
    /// Only meaningful when every coefficient fits in an `i8`, which holds for
    /// anything reduced modulo a p no larger than 256.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.coeffs.iter().map(|&c| c as i8 as u8).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl From<Vec<i64>> for Poly {
    fn from(coeffs: Vec<i64>) -> Self {
        Poly::from_coeffs(coeffs)
    }
}

/// Representative of `c mod m` in `(-m/2, m/2]`.
#[inline]
pub fn centered(c: i64, m: i64) -> i64 {
    let r = c.rem_euclid(m);
    if r > m / 2 {
        r - m
    } else {
        r
    }
}

fn check_modulus(m: i64) {
    assert!(m >= 2, "modulus must be at least 2, got {m}");
}

fn check_dims(a: &Poly, b: &Poly) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Maps every coefficient to its centered representative modulo `m`.
pub fn reduce_centered(a: &Poly, m: i64) -> Poly {
    check_modulus(m);
    Poly::from_coeffs(a.coeffs.iter().map(|&c| centered(c, m)).collect())
}

pub fn add(a: &Poly, b: &Poly, m: i64) -> Result<Poly> {
    check_dims(a, b)?;
    check_modulus(m);
    Ok(Poly::from_coeffs(
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| centered(centered(x, m) + centered(y, m), m))
            .collect(),
    ))
}

pub fn sub(a: &Poly, b: &Poly, m: i64) -> Result<Poly> {
    add(a, &b.negate(), m)
}

/// Cyclic convolution `(a*b)_k = sum_{i+j = k mod N} a_i b_j`, reduced mod `m`.
///
/// Inputs are reduced first, so any integer coefficients are accepted.
pub fn conv_mul(a: &Poly, b: &Poly, m: i64) -> Result<Poly> {
    check_dims(a, b)?;
    check_modulus(m);
    let a = reduce_centered(a, m);
    let b = reduce_centered(b, m);
    let mut out = convolve(&a.coeffs, &b.coeffs);
    for c in &mut out {
        *c = centered(*c, m);
    }
    Ok(Poly::from_coeffs(out))
}

/// Cyclic convolution over the integers, no reduction at all.
///
/// Callers must keep coefficients small; this is meant for short
/// (ternary-sized) operands where the exact integer result matters.
pub fn conv_mul_integer(a: &Poly, b: &Poly) -> Result<Poly> {
    check_dims(a, b)?;
    Ok(Poly::from_coeffs(convolve(&a.coeffs, &b.coeffs)))
}

fn convolve(a: &[i64], b: &[i64]) -> Vec<i64> {
    // Walk the operand with fewer nonzeros; ternary keys are mostly zero.
    let nonzeros = |v: &[i64]| v.iter().filter(|&&c| c != 0).count();
    let (sparse, dense) = if nonzeros(a) <= nonzeros(b) {
        (a, b)
    } else {
        (b, a)
    };
    let n = a.len();
    let mut out = vec![0i64; n];
    for (i, &s) in sparse.iter().enumerate() {
        if s == 0 {
            continue;
        }
        // x^i * dense: dense[..n-i] lands at i.., dense[n-i..] wraps to 0..i
        let (head, tail) = dense.split_at(n - i);
        for (o, &d) in out[i..].iter_mut().zip(head) {
            *o += s * d;
        }
        for (o, &d) in out[..i].iter_mut().zip(tail) {
            *o += s * d;
        }
    }
    out
}

/// Centered ℓ2 norm: `sqrt(sum_i (f_i - mean)^2)`.
pub fn centered_norm(f: &Poly) -> f64 {
    if f.is_empty() {
        return 0.0;
    }
    let n = f.len() as f64;
    let mean = f.coeffs.iter().map(|&c| c as f64).sum::<f64>() / n;
    f.coeffs
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Poly {
        Poly::from_coeffs(v.to_vec())
    }

    #[test]
    fn add_examples() {
        assert_eq!(
            add(&p(&[1, 2, 3]), &p(&[0, 0, 0]), 7).unwrap(),
            p(&[1, 2, 3])
        );
        assert_eq!(
            add(&p(&[3, 3, 0]), &p(&[3, 3, 0]), 7).unwrap(),
            p(&[-1, -1, 0])
        );
        let a = p(&[5, -9, 16, 31, 0]);
        assert!(add(&a, &a.negate(), 32).unwrap().is_zero());
    }

    #[test]
    fn add_length_mismatch() {
        let err = add(&p(&[1, 2]), &p(&[1, 2, 3]), 7).unwrap_err();
        assert!(matches!(err, Error::Dimension { left: 2, right: 3 }));
        assert!(conv_mul(&p(&[1]), &p(&[1, 2]), 7).is_err());
    }

    #[test]
    fn conv_mul_examples() {
        let f = p(&[3, -1, 0, 2, 1]);
        assert_eq!(conv_mul(&f, &Poly::one(5), 7).unwrap(), f);
        assert_eq!(
            conv_mul(&p(&[0, 1, 0]), &p(&[0, 0, 1]), 7).unwrap(),
            p(&[1, 0, 0])
        );
        // (1 + x)^2 = 1 + 2x + x^2
        assert_eq!(
            conv_mul(&p(&[1, 1, 0]), &p(&[1, 1, 0]), 5).unwrap(),
            p(&[1, 2, 1])
        );
    }

    #[test]
    fn conv_mul_wraps_degree() {
        // x^2 * x^2 = x^4 = x in N = 3
        assert_eq!(
            conv_mul(&p(&[0, 0, 1]), &p(&[0, 0, 1]), 11).unwrap(),
            p(&[0, 1, 0])
        );
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_centered(&p(&[17]), 32), p(&[-15]));
        assert_eq!(reduce_centered(&p(&[16]), 32), p(&[16]));
        assert_eq!(reduce_centered(&p(&[-16]), 32), p(&[16]));
        assert_eq!(reduce_centered(&p(&[4, -5]), 3), p(&[1, 1]));
        assert_eq!(reduce_centered(&p(&[2, -2, 3]), 3), p(&[-1, 1, 0]));
    }

    #[test]
    fn centered_interval_bounds() {
        for m in [2, 3, 4, 7, 32, 128] {
            let vals: Vec<i64> = (-3 * m..3 * m).map(|c| centered(c, m)).collect();
            let lo = *vals.iter().min().unwrap();
            let hi = *vals.iter().max().unwrap();
            assert_eq!(hi, m / 2);
            assert_eq!(lo, m / 2 - m + 1);
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(centered_norm(&p(&[4, 4, 4, 4, 4])), 0.0);
        assert!((centered_norm(&p(&[1, -1, 0])) - 2f64.sqrt()).abs() < 1e-12);
        assert!((centered_norm(&p(&[3, 0, 0, 0])) - 6.75f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn byte_encoding() {
        assert_eq!(p(&[1, -1, 0]).to_bytes(), vec![0x01, 0xff, 0x00]);
    }
}
