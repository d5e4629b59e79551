//! Man-in-the-middle key recovery against the unauthenticated exchange.
//!
//! Eve holds two key pairs of her own, `(f', g', h')` facing Alice and
//! `(f'', g'', h'')` facing Bob, with `f'` and `f''` invertible both mod q
//! and mod p. She swaps every public key in flight, so each victim blinds
//! its private `f` under one of Eve's keys:
//!
//! ```text
//! e'' = p r_B * h'' + f_B              (Bob's M2, captured)
//! w_B = e'' * f'' mod q = p r_B * g'' + f_B * f''
//! w_B * f''^-1 mod p    = f_B mod p    = f_B   (ternary f, p = 3)
//! ```
//!
//! and symmetrically for Alice's M3 under `h'`. With continuation enabled
//! Eve also hands each victim an ephemeral of her own, so both sessions
//! complete and each victim holds a key Eve can recompute.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::channel::{Channel, LogEntry};
use crate::protocol::{
    blind, derive_key, keygen, run_session, Ephemeral, Initiator, KeyPair, Message, MessageKind,
    Responder, SessionKey,
};
use crate::ring::{conv_mul, reduce_centered, Params, Poly};
use crate::sampling::{sample_ternary, SeededRng};

/// Everything Eve knows: her own keys plus what she captured and derived.
#[derive(Debug, Clone)]
pub struct EveState {
    pub kp_prime: KeyPair,
    pub kp_dprime: KeyPair,
    pub captured_h_a: Option<Poly>,
    pub captured_h_b: Option<Poly>,
    pub captured_e_a: Option<Poly>,
    pub captured_e_b: Option<Poly>,
    pub recovered_f_a: Option<Poly>,
    pub recovered_f_b: Option<Poly>,
    pub toward_alice: Option<Ephemeral>,
    pub toward_bob: Option<Ephemeral>,
    pub key_with_alice: Option<SessionKey>,
    pub key_with_bob: Option<SessionKey>,
}

/// Both of Eve's key pairs, each invertible mod p and mod q.
pub fn eve_keygen(params: &Params, rng: &mut SeededRng) -> Result<EveState> {
    let kp_prime = keygen(params, rng, true)?;
    let kp_dprime = keygen(params, rng, true)?;
    Ok(EveState {
        kp_prime,
        kp_dprime,
        captured_h_a: None,
        captured_h_b: None,
        captured_e_a: None,
        captured_e_b: None,
        recovered_f_a: None,
        recovered_f_b: None,
        toward_alice: None,
        toward_bob: None,
        key_with_alice: None,
        key_with_bob: None,
    })
}

/// `w = e * f_eve mod q`, then `w * f_eve^-1 mod p`.
///
/// When `e = p*r*h_eve + f_victim` and the margin condition holds for
/// `(f_eve, f_victim, r, g_eve)`, the result is `f_victim mod p`.
pub fn recover_key(
    e_victim: &Poly,
    f_eve: &Poly,
    f_eve_inv_p: &Poly,
    params: &Params,
) -> Result<Poly> {
    let w = conv_mul(e_victim, f_eve, params.q())?;
    conv_mul(&w, f_eve_inv_p, params.p())
}

fn inv_p(kp: &KeyPair) -> Result<&Poly> {
    kp.f_inv_p()
        .ok_or_else(|| Error::State("eve key pair lacks its mod-p inverse".into()))
}

impl EveState {
    /// Captures `h_A`; Bob gets `h''` in its place.
    pub fn substitute_m1(&mut self, m1: &Message) -> Result<Message> {
        m1.expect_kind(MessageKind::M1)?;
        self.captured_h_a = Some(m1.h_or_err()?.clone());
        Ok(Message::m1(
            self.kp_dprime.h().clone(),
            &m1.sender,
            &m1.receiver,
        ))
    }

    /// Captures `h_B` and Bob's `e''`, recovers `f_B`, and answers Alice with
    /// `h'` plus Eve's own ephemeral `p r_E * h_A + f'` under Alice's real key.
    pub fn substitute_m2(
        &mut self,
        m2: &Message,
        rng: &mut SeededRng,
        params: &Params,
    ) -> Result<Message> {
        m2.expect_kind(MessageKind::M2)?;
        let h_a = self
            .captured_h_a
            .clone()
            .ok_or_else(|| Error::State("M2 intercepted before M1".into()))?;
        let e_b = m2.e_or_err()?.clone();
        self.captured_h_b = Some(m2.h_or_err()?.clone());
        self.recovered_f_b = Some(recover_key(
            &e_b,
            self.kp_dprime.f(),
            inv_p(&self.kp_dprime)?,
            params,
        )?);
        self.captured_e_b = Some(e_b);

        let r = sample_ternary(params.r_spec(), params, rng)?;
        let e = blind(self.kp_prime.f(), &h_a, &r, params)?;
        let out = Message::m2(
            self.kp_prime.h().clone(),
            e.clone(),
            &m2.sender,
            &m2.receiver,
        );
        self.toward_alice = Some(Ephemeral { e, r });
        Ok(out)
    }

    /// Captures Alice's `e'` and recovers `f_A`. With `continuation`, Bob is
    /// sent Eve's ephemeral `p r_E * h_B + f''` and Eve derives both session
    /// keys; otherwise Alice's message is passed through.
    pub fn substitute_m3(
        &mut self,
        m3: &Message,
        rng: &mut SeededRng,
        params: &Params,
        continuation: bool,
    ) -> Result<Message> {
        m3.expect_kind(MessageKind::M3)?;
        let toward_alice = self
            .toward_alice
            .as_ref()
            .ok_or_else(|| Error::State("M3 intercepted before M2".into()))?;
        let e_a = m3.e_or_err()?.clone();
        let f_a = recover_key(&e_a, self.kp_prime.f(), inv_p(&self.kp_prime)?, params)?;
        self.captured_e_a = Some(e_a);

        if !continuation {
            self.recovered_f_a = Some(f_a);
            return Ok(m3.clone());
        }
        let key_with_alice = derive_key(&f_a, &toward_alice.e, params)?;
        self.recovered_f_a = Some(f_a);

        let h_b = self
            .captured_h_b
            .clone()
            .ok_or_else(|| Error::State("M3 intercepted without Bob's public key".into()))?;
        let f_b = self
            .recovered_f_b
            .clone()
            .ok_or_else(|| Error::State("f_B not recovered".into()))?;
        let r = sample_ternary(params.r_spec(), params, rng)?;
        let e = blind(self.kp_dprime.f(), &h_b, &r, params)?;
        self.key_with_bob = Some(derive_key(&f_b, &e, params)?);
        self.key_with_alice = Some(key_with_alice);
        let out = Message::m3(e.clone(), &m3.sender, &m3.receiver);
        self.toward_bob = Some(Ephemeral { e, r });
        Ok(out)
    }

    /// Passive observation: records what goes by and attempts recovery with
    /// Eve's keys anyway (which fails, since nobody encrypted under them).
    fn observe(&mut self, msg: &Message, params: &Params) -> Result<()> {
        match msg.kind {
            MessageKind::M1 => self.captured_h_a = msg.h.clone(),
            MessageKind::M2 => {
                self.captured_h_b = msg.h.clone();
                let e = msg.e_or_err()?;
                self.recovered_f_b = Some(recover_key(
                    e,
                    self.kp_dprime.f(),
                    inv_p(&self.kp_dprime)?,
                    params,
                )?);
                self.captured_e_b = Some(e.clone());
            }
            MessageKind::M3 => {
                let e = msg.e_or_err()?;
                self.recovered_f_a = Some(recover_key(
                    e,
                    self.kp_prime.f(),
                    inv_p(&self.kp_prime)?,
                    params,
                )?);
                self.captured_e_a = Some(e.clone());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MitmOptions {
    /// When false Eve only listens; the session is then an honest one.
    pub substitute: bool,
    /// Eve completes a working session with each victim.
    pub continuation: bool,
}

impl Default for MitmOptions {
    fn default() -> Self {
        MitmOptions {
            substitute: true,
            continuation: true,
        }
    }
}

/// Eve sitting on the channel: her state, her own randomness, and policy.
#[derive(Debug, Clone)]
pub struct Interceptor {
    pub state: EveState,
    rng: SeededRng,
    params: Params,
    options: MitmOptions,
}

impl Interceptor {
    pub fn new(state: EveState, rng: SeededRng, params: Params, options: MitmOptions) -> Self {
        Interceptor {
            state,
            rng,
            params,
            options,
        }
    }

    pub fn options(&self) -> MitmOptions {
        self.options
    }

    /// Returns the replacement message, or `None` when the original passes
    /// through untouched.
    pub fn intercept(&mut self, msg: &Message) -> Result<Option<Message>> {
        if !self.options.substitute {
            self.state.observe(msg, &self.params)?;
            return Ok(None);
        }
        let out = match msg.kind {
            MessageKind::M1 => self.state.substitute_m1(msg)?,
            MessageKind::M2 => self.state.substitute_m2(msg, &mut self.rng, &self.params)?,
            MessageKind::M3 => self.state.substitute_m3(
                msg,
                &mut self.rng,
                &self.params,
                self.options.continuation,
            )?,
        };
        Ok(Some(out))
    }
}

/// Outcome of an attacked session.
///
/// `recovered_*` and the session keys are Eve's view; `true_*` come from
/// the simulation oracle, which Eve never sees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackReport {
    #[serde(rename = "recovered_f_A")]
    pub recovered_f_a: Poly,
    #[serde(rename = "recovered_f_B")]
    pub recovered_f_b: Poly,
    #[serde(rename = "true_f_A")]
    pub true_f_a: Poly,
    #[serde(rename = "true_f_B")]
    pub true_f_b: Poly,
    #[serde(rename = "f_A_match")]
    pub f_a_match: bool,
    #[serde(rename = "f_B_match")]
    pub f_b_match: bool,
    #[serde(skip)]
    pub session_key_with_alice: Option<SessionKey>,
    #[serde(skip)]
    pub session_key_with_bob: Option<SessionKey>,
    #[serde(rename = "transparent")]
    pub sessions_transparent: bool,
}

impl AttackReport {
    pub fn full_recovery(&self) -> bool {
        self.f_a_match && self.f_b_match
    }
}

/// Everything produced by [`run_mitm`], oracle data included.
#[derive(Debug, Clone)]
pub struct MitmRun {
    pub report: AttackReport,
    pub log: Vec<LogEntry>,
    pub alice: Initiator,
    pub bob: Responder,
    pub eve: EveState,
    pub options: MitmOptions,
}

/// Runs Alice and Bob's honest role logic through a channel Eve controls.
pub fn run_mitm(
    params: &Params,
    rng_a: SeededRng,
    rng_b: SeededRng,
    mut rng_e: SeededRng,
    options: MitmOptions,
) -> Result<MitmRun> {
    let state = eve_keygen(params, &mut rng_e)?;
    let mut channel = Channel::mitm(Interceptor::new(state, rng_e, *params, options));
    let (alice, bob) = run_session(params, rng_a, rng_b, &mut channel)?;
    let (log, interceptor) = channel.finish();
    let eve = interceptor
        .expect("mitm channel keeps its interceptor")
        .state;

    let missing = || Error::State("session ended without recovery".into());
    let recovered_f_a = eve.recovered_f_a.clone().ok_or_else(missing)?;
    let recovered_f_b = eve.recovered_f_b.clone().ok_or_else(missing)?;
    let true_f_a = reduce_centered(alice.keys().f(), params.p());
    let true_f_b = reduce_centered(bob.keys().f(), params.p());
    let sessions_transparent = options.substitute
        && options.continuation
        && eve.key_with_alice.is_some()
        && eve.key_with_alice.as_ref() == alice.session_key()
        && eve.key_with_bob.as_ref() == bob.session_key();
    let report = AttackReport {
        f_a_match: recovered_f_a == true_f_a,
        f_b_match: recovered_f_b == true_f_b,
        recovered_f_a,
        recovered_f_b,
        true_f_a,
        true_f_b,
        session_key_with_alice: eve.key_with_alice.clone(),
        session_key_with_bob: eve.key_with_bob.clone(),
        sessions_transparent,
    };
    Ok(MitmRun {
        report,
        log,
        alice,
        bob,
        eve,
        options,
    })
}
