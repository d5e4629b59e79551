//! Offline adjudication of a recorded session.
//!
//! An [`Oracle`] file holds every party's private keys, which only the
//! simulator knows. Given a transcript and the oracle, [`verify`] redoes
//! Eve's recovery (or both honest key derivations) from the logged messages
//! and checks the result against ground truth, so a transcript that was
//! edited after the fact no longer verifies.

use serde::{Deserialize, Serialize};

use super::channel::{ChannelMode, Direction, LogEntry};
use crate::adversary::{recover_key, AttackReport, MitmRun};
use crate::error::{Error, Result};
use crate::protocol::{derive_key, HonestExchange, KeyPair, Message, MessageKind};
use crate::ring::{reduce_centered, Params, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyKeys {
    pub f: Poly,
    pub g: Poly,
    pub h: Poly,
}

impl From<&KeyPair> for PartyKeys {
    fn from(kp: &KeyPair) -> Self {
        PartyKeys {
            f: kp.f().clone(),
            g: kp.g().clone(),
            h: kp.h().clone(),
        }
    }
}

impl PartyKeys {
    fn key_pair(&self, params: &Params, with_p_inverse: bool) -> Result<KeyPair> {
        KeyPair::from_private(self.f.clone(), self.g.clone(), params, with_p_inverse)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveKeys {
    pub toward_alice: PartyKeys,
    pub toward_bob: PartyKeys,
}

/// Ground truth for one simulated session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Oracle {
    pub params: Params,
    pub mode: ChannelMode,
    pub alice: PartyKeys,
    pub bob: PartyKeys,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eve: Option<EveKeys>,
}

impl Oracle {
    pub fn from_honest(params: &Params, run: &HonestExchange) -> Self {
        Oracle {
            params: *params,
            mode: ChannelMode::Honest,
            alice: run.alice.keys().into(),
            bob: run.bob.keys().into(),
            eve: None,
        }
    }

    pub fn from_mitm(params: &Params, run: &MitmRun) -> Self {
        Oracle {
            params: *params,
            mode: ChannelMode::Mitm,
            alice: run.alice.keys().into(),
            bob: run.bob.keys().into(),
            eve: Some(EveKeys {
                toward_alice: (&run.eve.kp_prime).into(),
                toward_bob: (&run.eve.kp_dprime).into(),
            }),
        }
    }
}

/// Outcome of [`verify`]. `problems` is empty exactly when the transcript is
/// consistent with the oracle and the session achieved what it claims.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub mode: ChannelMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<AttackReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keys_agree: Option<bool>,
    pub problems: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn find(log: &[LogEntry], direction: Direction, kind: MessageKind) -> Result<&Message> {
    log.iter()
        .find(|e| e.direction == direction && e.message.kind == kind)
        .map(|e| &e.message)
        .ok_or_else(|| Error::Protocol(format!("transcript has no {direction:?} {kind:?}")))
}

fn field<'a>(poly: &'a Option<Poly>, what: &str) -> Result<&'a Poly> {
    poly.as_ref()
        .ok_or_else(|| Error::Protocol(format!("transcript message lacks {what}")))
}

/// Recomputes the session outcome from `log` using the oracle's keys.
///
/// When `claimed` is given, its recovered keys and match flags must agree
/// with the recomputation too.
pub fn verify(
    log: &[LogEntry],
    oracle: &Oracle,
    claimed: Option<&AttackReport>,
) -> Result<Verification> {
    let params = &oracle.params;
    let mut problems = Vec::new();
    for entry in log {
        if let Err(err) = entry.message.validate(params) {
            problems.push(format!("event {}: {err}", entry.seq));
        }
    }
    let alice = oracle.alice.key_pair(params, false)?;
    let bob = oracle.bob.key_pair(params, false)?;
    let mut expect = |what: &str, got: &Poly, want: &Poly| {
        if got != want {
            problems.push(format!("{what} does not match the oracle"));
        }
    };

    match oracle.mode {
        ChannelMode::Honest => {
            let m1 = find(log, Direction::AToB, MessageKind::M1)?;
            let m2 = find(log, Direction::BToA, MessageKind::M2)?;
            let m3 = find(log, Direction::AToB, MessageKind::M3)?;
            expect("h_A in M1", field(&m1.h, "h")?, alice.h());
            expect("h_B in M2", field(&m2.h, "h")?, bob.h());
            let key_a = derive_key(alice.f(), field(&m2.e, "e")?, params)?;
            let key_b = derive_key(bob.f(), field(&m3.e, "e")?, params)?;
            let agree = key_a == key_b;
            if !agree {
                problems.push("K_A and K_B differ".into());
            }
            Ok(Verification {
                mode: oracle.mode,
                report: None,
                keys_agree: Some(agree),
                problems,
            })
        }
        ChannelMode::Mitm => {
            let eve = oracle
                .eve
                .as_ref()
                .ok_or_else(|| Error::Config("mitm oracle lacks eve's keys".into()))?;
            let prime = eve.toward_alice.key_pair(params, true)?;
            let dprime = eve.toward_bob.key_pair(params, true)?;

            let orig_m1 = find(log, Direction::Captured, MessageKind::M1)?;
            let sub_m1 = find(log, Direction::Forwarded, MessageKind::M1)?;
            let orig_m2 = find(log, Direction::Captured, MessageKind::M2)?;
            let sub_m2 = find(log, Direction::Forwarded, MessageKind::M2)?;
            let orig_m3 = find(log, Direction::Captured, MessageKind::M3)?;
            expect("captured h_A", field(&orig_m1.h, "h")?, alice.h());
            expect("captured h_B", field(&orig_m2.h, "h")?, bob.h());
            expect(
                "substituted h toward bob",
                field(&sub_m1.h, "h")?,
                dprime.h(),
            );
            expect(
                "substituted h toward alice",
                field(&sub_m2.h, "h")?,
                prime.h(),
            );

            let inv = |kp: &KeyPair| kp.f_inv_p().cloned().expect("built with p inverse");
            let recovered_f_b =
                recover_key(field(&orig_m2.e, "e")?, dprime.f(), &inv(&dprime), params)?;
            let recovered_f_a =
                recover_key(field(&orig_m3.e, "e")?, prime.f(), &inv(&prime), params)?;
            let true_f_a = reduce_centered(alice.f(), params.p());
            let true_f_b = reduce_centered(bob.f(), params.p());
            let report = AttackReport {
                f_a_match: recovered_f_a == true_f_a,
                f_b_match: recovered_f_b == true_f_b,
                recovered_f_a,
                recovered_f_b,
                true_f_a,
                true_f_b,
                session_key_with_alice: None,
                session_key_with_bob: None,
                sessions_transparent: false,
            };
            if !report.f_a_match {
                problems.push("recovered f_A differs from Alice's private key".into());
            }
            if !report.f_b_match {
                problems.push("recovered f_B differs from Bob's private key".into());
            }
            if let Some(claimed) = claimed {
                let same = claimed.recovered_f_a == report.recovered_f_a
                    && claimed.recovered_f_b == report.recovered_f_b
                    && claimed.true_f_a == report.true_f_a
                    && claimed.true_f_b == report.true_f_b
                    && claimed.f_a_match == report.f_a_match
                    && claimed.f_b_match == report.f_b_match;
                if !same {
                    problems.push("claimed report disagrees with the recomputation".into());
                }
            }
            Ok(Verification {
                mode: oracle.mode,
                report: Some(report),
                keys_agree: None,
                problems,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{run_mitm, MitmOptions};
    use crate::harness::transcript::{parse_transcript, serialize_transcript};
    use crate::protocol::run_honest_exchange;
    use crate::sampling::SeededRng;

    fn mitm() -> (Params, MitmRun) {
        let params = Params::guarantee();
        let run = run_mitm(
            &params,
            SeededRng::new(7),
            SeededRng::new(8),
            SeededRng::new(9),
            MitmOptions::default(),
        )
        .unwrap();
        (params, run)
    }

    #[test]
    fn genuine_mitm_transcript_verifies() {
        let (params, run) = mitm();
        let oracle = Oracle::from_mitm(&params, &run);
        let v = verify(&run.log, &oracle, Some(&run.report)).unwrap();
        assert!(v.passed(), "{:?}", v.problems);
        assert!(v.report.unwrap().full_recovery());
    }

    #[test]
    fn tampered_ephemeral_fails() {
        let (params, run) = mitm();
        let oracle = Oracle::from_mitm(&params, &run);
        let mut log = run.log.clone();
        let entry = log
            .iter_mut()
            .find(|e| e.direction == Direction::Captured && e.message.kind == MessageKind::M3)
            .unwrap();
        let e = entry.message.e.as_mut().unwrap();
        let mut coeffs = e.coeffs().to_vec();
        coeffs[10] = crate::ring::centered(coeffs[10] + 1, params.q());
        *e = Poly::from_coeffs(coeffs);
        let v = verify(&log, &oracle, None).unwrap();
        assert!(!v.passed());
    }

    #[test]
    fn tampered_claim_fails() {
        let (params, run) = mitm();
        let oracle = Oracle::from_mitm(&params, &run);
        let mut claim = run.report.clone();
        claim.f_b_match = false;
        assert!(!verify(&run.log, &oracle, Some(&claim)).unwrap().passed());
    }

    #[test]
    fn honest_transcript_verifies_and_detects_edits() {
        let params = Params::guarantee();
        let run = run_honest_exchange(&params, SeededRng::new(1), SeededRng::new(2)).unwrap();
        let mut ch = crate::harness::channel::Channel::honest();
        crate::protocol::run_session(&params, SeededRng::new(1), SeededRng::new(2), &mut ch)
            .unwrap();
        let oracle = Oracle::from_honest(&params, &run);
        let log = parse_transcript(&serialize_transcript(ch.log())).unwrap();
        let v = verify(&log, &oracle, None).unwrap();
        assert!(v.passed(), "{:?}", v.problems);
        assert_eq!(v.keys_agree, Some(true));

        let mut bad = log.clone();
        let h = bad[0].message.h.as_mut().unwrap();
        let mut coeffs = h.coeffs().to_vec();
        coeffs[0] = crate::ring::centered(coeffs[0] - 1, params.q());
        *h = Poly::from_coeffs(coeffs);
        assert!(!verify(&bad, &oracle, None).unwrap().passed());
    }

    #[test]
    fn oracle_json_round_trip() {
        let (params, run) = mitm();
        let oracle = Oracle::from_mitm(&params, &run);
        let text = serde_json::to_string(&oracle).unwrap();
        assert_eq!(serde_json::from_str::<Oracle>(&text).unwrap(), oracle);
    }
}
