//! NTRU-based key exchange over `Z_q[x]/(x^N - 1)` and a simulator for the
//! man-in-the-middle attack that recovers both parties' private keys.
//!
//! * [`ring`]: convolution arithmetic, centered reduction, inverses.
//! * [`sampling`]: fixed-weight ternary polynomials from a seeded stream.
//! * [`protocol`]: key pairs, messages, and the initiator/responder roles.
//! * [`adversary`]: Eve's key substitution and private-key recovery.
//! * [`harness`]: channel, transcripts, batch experiments, verification, CLI.
//!
//! ```
//! use ntru_ke::adversary::{run_mitm, MitmOptions};
//! use ntru_ke::ring::Params;
//! use ntru_ke::sampling::SeededRng;
//!
//! let params = Params::guarantee();
//! let run = run_mitm(
//!     &params,
//!     SeededRng::new(1),
//!     SeededRng::new(2),
//!     SeededRng::new(3),
//!     MitmOptions::default(),
//! )?;
//! assert!(run.report.f_a_match && run.report.f_b_match);
//! # Ok::<(), ntru_ke::Error>(())
//! ```
//!
//! The parameter presets are demonstration sized and offer no security.

pub mod adversary;
mod error;
pub mod harness;
pub mod protocol;
pub mod ring;
pub mod sampling;

pub use error::{Error, Result};
