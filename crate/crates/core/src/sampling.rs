//! Fixed-weight ternary sampling from a seeded deterministic stream.
//!
//! [`SeededRng`] is ChaCha8 keyed by a 64-bit seed through
//! `SeedableRng::seed_from_u64`. It is reproducible across platforms and
//! runs, which is all a simulation needs; nothing here is meant to produce
//! real key material.

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ring::{conv_mul, inverse_mod, Params, Poly};

/// Draw budget for [`sample_invertible`].
pub const MAX_INVERTIBILITY_ATTEMPTS: usize = 100;

/// Deterministic random stream owned by a single party.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Parses a seed written in decimal or as `0x`-prefixed hex.
pub fn parse_seed(text: &str) -> Result<u64> {
    let text = text.trim();
    let parsed = match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => text.parse(),
    };
    parsed.map_err(|_| Error::Config(format!("invalid seed {text:?}")))
}

/// Shape of a ternary sample space: exact counts of +1 and -1 coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TernarySpec {
    pub num_plus: usize,
    pub num_minus: usize,
}

impl TernarySpec {
    pub fn new(num_plus: usize, num_minus: usize) -> Self {
        TernarySpec {
            num_plus,
            num_minus,
        }
    }

    pub fn weight(&self) -> usize {
        self.num_plus + self.num_minus
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.weight() > n {
            return Err(Error::InvalidSpec {
                num_plus: self.num_plus,
                num_minus: self.num_minus,
                n,
            });
        }
        Ok(())
    }
}

/// Uniformly random placement of `num_plus` ones and `num_minus` minus ones
/// among `N` coefficients.
pub fn sample_ternary(spec: TernarySpec, params: &Params, rng: &mut SeededRng) -> Result<Poly> {
    let n = params.n();
    spec.check(n)?;
    let mut coeffs = vec![0i64; n];
    coeffs[..spec.num_plus].fill(1);
    coeffs[spec.num_plus..spec.weight()].fill(-1);
    coeffs.shuffle(rng);
    Ok(Poly::from_coeffs(coeffs))
}

/// A ternary polynomial together with its verified inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleSample {
    pub f: Poly,
    pub inv_q: Poly,
    pub inv_p: Option<Poly>,
}

/// Draws from `spec` until the result is invertible mod q (and mod p when
/// `require_mod_p` is set), giving up after
/// [`MAX_INVERTIBILITY_ATTEMPTS`] draws.
pub fn sample_invertible(
    spec: TernarySpec,
    params: &Params,
    rng: &mut SeededRng,
    require_mod_p: bool,
) -> Result<InvertibleSample> {
    let one = Poly::one(params.n());
    for _ in 0..MAX_INVERTIBILITY_ATTEMPTS {
        let f = sample_ternary(spec, params, rng)?;
        let Some(inv_q) = inverse_mod(&f, params.q())? else {
            continue;
        };
        debug_assert_eq!(conv_mul(&f, &inv_q, params.q())?, one);
        let inv_p = if require_mod_p {
            match inverse_mod(&f, params.p())? {
                Some(inv) => Some(inv),
                None => continue,
            }
        } else {
            None
        };
        return Ok(InvertibleSample { f, inv_q, inv_p });
    }
    Err(Error::SamplingFailure {
        attempts: MAX_INVERTIBILITY_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Params {
        Params::with_weight(7, 3, 32, 2).unwrap()
    }

    #[test]
    fn empty_spec_gives_zero() {
        let mut rng = SeededRng::new(1);
        let f = sample_ternary(TernarySpec::new(0, 0), &small(), &mut rng).unwrap();
        assert_eq!(f, Poly::zero(7));
    }

    #[test]
    fn counts_hold_on_every_draw() {
        let mut rng = SeededRng::new(5);
        for _ in 0..200 {
            let f = sample_ternary(TernarySpec::new(2, 2), &small(), &mut rng).unwrap();
            assert_eq!(f.coeffs().iter().map(|c| c.abs()).sum::<i64>(), 4);
            assert_eq!(f.coeffs().iter().sum::<i64>(), 0);
            assert!(f.is_ternary());
        }
    }

    #[test]
    fn oversized_spec_rejected() {
        let mut rng = SeededRng::new(5);
        let err = sample_ternary(TernarySpec::new(5, 3), &small(), &mut rng).unwrap_err();
        assert!(matches!(err, Error::InvalidSpec { n: 7, .. }));
    }

    #[test]
    fn same_seed_same_stream() {
        let spec = TernarySpec::new(3, 2);
        let (mut a, mut b) = (SeededRng::new(42), SeededRng::new(42));
        for _ in 0..20 {
            assert_eq!(
                sample_ternary(spec, &small(), &mut a).unwrap(),
                sample_ternary(spec, &small(), &mut b).unwrap()
            );
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let params = Params::guarantee();
        let spec = params.f_spec();
        let (mut a, mut b) = (SeededRng::new(42), SeededRng::new(43));
        let diverged = (0..10).any(|_| {
            sample_ternary(spec, &params, &mut a).unwrap()
                != sample_ternary(spec, &params, &mut b).unwrap()
        });
        assert!(diverged);
    }

    #[test]
    fn invertible_mod_q() {
        let params = small();
        let mut rng = SeededRng::new(11);
        let s = sample_invertible(params.f_spec(), &params, &mut rng, false).unwrap();
        assert_eq!(conv_mul(&s.f, &s.inv_q, 32).unwrap(), Poly::one(7));
        assert!(s.inv_p.is_none());
    }

    #[test]
    fn invertible_mod_p_and_q() {
        let params = small();
        let mut rng = SeededRng::new(12);
        for _ in 0..20 {
            let s = sample_invertible(params.f_spec(), &params, &mut rng, true).unwrap();
            assert_eq!(conv_mul(&s.f, &s.inv_q, 32).unwrap(), Poly::one(7));
            assert_eq!(
                conv_mul(&s.f, s.inv_p.as_ref().unwrap(), 3).unwrap(),
                Poly::one(7)
            );
        }
    }

    #[test]
    fn all_ones_spec_exhausts_budget() {
        let params = small();
        let mut rng = SeededRng::new(3);
        let err = sample_invertible(TernarySpec::new(7, 0), &params, &mut rng, false).unwrap_err();
        assert!(matches!(err, Error::SamplingFailure { attempts: 100 }));
    }

    #[test]
    fn seed_parsing() {
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert_eq!(parse_seed("0x2a").unwrap(), 42);
        assert_eq!(parse_seed("0XFF").unwrap(), 255);
        assert!(parse_seed("forty-two").is_err());
        assert!(parse_seed("-1").is_err());
    }
}
