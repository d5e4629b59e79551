//! The two honest roles of the NTRU key exchange and its three-message flow.
//!
//! ```text
//!   initiator (alice)                          responder (bob)
//!   f_A, g_A, h_A = f_A^-1 * g_A
//!                      M1: h_A  ------->
//!                                             f_B, g_B, h_B, r_B
//!                                             e_B = p r_B * h_A + f_B
//!                      <------- M2: h_B, e_B
//!   r_A, e_A = p r_A * h_B + f_A
//!   K_A = (f_A * e_B mod q) mod p
//!                      M3: e_A  ------->
//!                                             K_B = (f_B * e_A mod q) mod p
//! ```
//!
//! Both keys equal `f_A * f_B mod p` as long as no coefficient of
//! `p*(r*g) + f_A*f_B` leaves the centered interval for q; see
//! [`check_margin`]. Nothing in the flow authenticates a public key.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{add, conv_mul, conv_mul_integer, reduce_centered, Params, Poly};
use crate::sampling::{sample_invertible, sample_ternary, SeededRng};

pub const ALICE: &str = "alice";
pub const BOB: &str = "bob";

/// Private `(f, g)` with cached inverses of `f`, and public `h = f^-1 * g mod q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    f: Poly,
    g: Poly,
    f_inv_q: Poly,
    f_inv_p: Option<Poly>,
    h: Poly,
}

impl KeyPair {
    /// Builds a key pair from chosen private polynomials.
    pub fn from_private(f: Poly, g: Poly, params: &Params, with_p_inverse: bool) -> Result<Self> {
        check_len(&f, params)?;
        check_len(&g, params)?;
        let f_inv_q =
            crate::ring::inverse_mod(&f, params.q())?.ok_or(Error::NotInvertible(params.q()))?;
        let f_inv_p = if with_p_inverse {
            Some(
                crate::ring::inverse_mod(&f, params.p())?
                    .ok_or(Error::NotInvertible(params.p()))?,
            )
        } else {
            None
        };
        Self::assemble(f, g, f_inv_q, f_inv_p, params)
    }

    fn assemble(
        f: Poly,
        g: Poly,
        f_inv_q: Poly,
        f_inv_p: Option<Poly>,
        params: &Params,
    ) -> Result<Self> {
        let h = conv_mul(&f_inv_q, &g, params.q())?;
        Ok(KeyPair {
            f,
            g,
            f_inv_q,
            f_inv_p,
            h,
        })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn f_inv_q(&self) -> &Poly {
        &self.f_inv_q
    }

    pub fn f_inv_p(&self) -> Option<&Poly> {
        self.f_inv_p.as_ref()
    }

    /// Public key.
    pub fn h(&self) -> &Poly {
        &self.h
    }
}

/// Draws `f` from the private key space (invertible mod q, and mod p when
/// requested) and `g` from its own ternary space.
pub fn keygen(params: &Params, rng: &mut SeededRng, with_p_inverse: bool) -> Result<KeyPair> {
    let sample = sample_invertible(params.f_spec(), params, rng, with_p_inverse)?;
    let g = sample_ternary(params.g_spec(), params, rng)?;
    KeyPair::assemble(sample.f, g, sample.inv_q, sample.inv_p, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MessageKind {
    M1,
    M2,
    M3,
}

/// One protocol message as it appears on the wire.
///
/// M1 carries `h` only, M2 carries `h` and `e`, M3 carries `e` only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub kind: MessageKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Poly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Poly>,
    pub sender: String,
    pub receiver: String,
}

impl Message {
    pub fn m1(h: Poly, sender: &str, receiver: &str) -> Self {
        Self::build(MessageKind::M1, Some(h), None, sender, receiver)
    }

    pub fn m2(h: Poly, e: Poly, sender: &str, receiver: &str) -> Self {
        Self::build(MessageKind::M2, Some(h), Some(e), sender, receiver)
    }

    pub fn m3(e: Poly, sender: &str, receiver: &str) -> Self {
        Self::build(MessageKind::M3, None, Some(e), sender, receiver)
    }

    fn build(
        kind: MessageKind,
        h: Option<Poly>,
        e: Option<Poly>,
        sender: &str,
        receiver: &str,
    ) -> Self {
        Message {
            kind,
            h,
            e,
            sender: sender.to_owned(),
            receiver: receiver.to_owned(),
        }
    }

    /// Checks the per-kind shape and that every carried polynomial is a
    /// centered element of `R_q`.
    pub fn validate(&self, params: &Params) -> Result<()> {
        let (want_h, want_e) = match self.kind {
            MessageKind::M1 => (true, false),
            MessageKind::M2 => (true, true),
            MessageKind::M3 => (false, true),
        };
        if self.h.is_some() != want_h || self.e.is_some() != want_e {
            return Err(Error::Protocol(format!(
                "{:?} must carry h: {want_h}, e: {want_e}",
                self.kind
            )));
        }
        for poly in self.h.iter().chain(self.e.iter()) {
            check_len(poly, params)?;
            if !poly.is_centered(params.q()) {
                return Err(Error::Protocol(format!(
                    "{:?} carries coefficients outside the centered range mod {}",
                    self.kind,
                    params.q()
                )));
            }
        }
        Ok(())
    }

    /// Canonical wire encoding (compact JSON, fixed field order).
    pub fn to_wire(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("message serialization cannot fail")
    }

    pub fn from_wire(bytes: &[u8]) -> Result<Self> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub(crate) fn expect_kind(&self, kind: MessageKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Protocol(format!(
                "expected {kind:?}, got {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    pub(crate) fn h_or_err(&self) -> Result<&Poly> {
        self.h
            .as_ref()
            .ok_or_else(|| Error::Protocol(format!("{:?} is missing h", self.kind)))
    }

    pub(crate) fn e_or_err(&self) -> Result<&Poly> {
        self.e
            .as_ref()
            .ok_or_else(|| Error::Protocol(format!("{:?} is missing e", self.kind)))
    }
}

/// Shared key with coefficients centered mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SessionKey(Poly);

impl SessionKey {
    pub fn poly(&self) -> &Poly {
        &self.0
    }

    /// Lowest degree first, one two's-complement byte per coefficient.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.to_bytes()
    }
}

/// Blinded ephemeral `e = p*r*h + f mod q`, with the blinding `r` kept for
/// inspection. `r` never goes on the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ephemeral {
    pub e: Poly,
    pub r: Poly,
}

/// Computes `p * r * peer_h + own_f mod q` for a given `r`.
pub fn blind(own_f: &Poly, peer_h: &Poly, r: &Poly, params: &Params) -> Result<Poly> {
    let q = params.q();
    let rh = conv_mul(r, peer_h, q)?;
    add(&reduce_centered(&rh.scale(params.p()), q), own_f, q)
}

/// Draws `r` from its ternary space and blinds `own_f` under `peer_h`.
pub fn make_ephemeral(
    own_f: &Poly,
    peer_h: &Poly,
    params: &Params,
    rng: &mut SeededRng,
) -> Result<Ephemeral> {
    let r = sample_ternary(params.r_spec(), params, rng)?;
    let e = blind(own_f, peer_h, &r, params)?;
    Ok(Ephemeral { e, r })
}

/// `i = own_f * peer_e mod q` lifted to the centered interval, then reduced
/// mod p. Total: a decryption failure shows up as a wrong key, not an error.
pub fn derive_key(own_f: &Poly, peer_e: &Poly, params: &Params) -> Result<SessionKey> {
    let i = conv_mul(own_f, peer_e, params.q())?;
    Ok(SessionKey(reduce_centered(&i, params.p())))
}

/// Exact integer value of `p*(r*g) + f_a*f_b`, the quantity that must stay
/// inside the centered interval for q.
pub fn margin_poly(f_a: &Poly, f_b: &Poly, r: &Poly, g: &Poly, params: &Params) -> Result<Poly> {
    let rg = conv_mul_integer(r, g)?.scale(params.p());
    let ff = conv_mul_integer(f_a, f_b)?;
    Ok(Poly::from_coeffs(
        rg.coeffs()
            .iter()
            .zip(ff.coeffs())
            .map(|(x, y)| x + y)
            .collect(),
    ))
}

/// True iff every coefficient of `p*(r*g) + f_a*f_b`, computed over the
/// integers, already lies in the centered interval for q. When it does,
/// `derive_key` returns exactly `f_a * f_b mod p`.
pub fn check_margin(f_a: &Poly, f_b: &Poly, r: &Poly, g: &Poly, params: &Params) -> Result<bool> {
    Ok(margin_poly(f_a, f_b, r, g, params)?.is_centered(params.q()))
}

/// The key both parties should reach: integer convolution, then mod p.
pub fn expected_key(f_a: &Poly, f_b: &Poly, params: &Params) -> Result<SessionKey> {
    Ok(SessionKey(reduce_centered(
        &conv_mul_integer(f_a, f_b)?,
        params.p(),
    )))
}

fn check_len(poly: &Poly, params: &Params) -> Result<()> {
    if poly.len() != params.n() {
        return Err(Error::Dimension {
            left: poly.len(),
            right: params.n(),
        });
    }
    Ok(())
}

/// Moves a message from one party to the other and returns what the
/// receiver actually gets.
pub trait Transport {
    fn deliver(&mut self, msg: Message) -> Result<Message>;
}

/// A wire that hands every message over unchanged and keeps a copy.
#[derive(Debug, Default)]
pub struct DirectLink {
    pub transcript: Vec<Message>,
}

impl Transport for DirectLink {
    fn deliver(&mut self, msg: Message) -> Result<Message> {
        self.transcript.push(msg.clone());
        Ok(msg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Stage {
    Fresh,
    Awaiting(MessageKind),
    Done,
}

/// Alice: sends M1, answers M2 with M3.
#[derive(Debug, Clone)]
pub struct Initiator {
    params: Params,
    rng: SeededRng,
    keys: KeyPair,
    stage: Stage,
    peer_h: Option<Poly>,
    ephemeral: Option<Ephemeral>,
    key: Option<SessionKey>,
}

impl Initiator {
    pub fn new(params: Params, mut rng: SeededRng) -> Result<Self> {
        let keys = keygen(&params, &mut rng, false)?;
        Ok(Initiator {
            params,
            rng,
            keys,
            stage: Stage::Fresh,
            peer_h: None,
            ephemeral: None,
            key: None,
        })
    }

    pub fn start(&mut self) -> Result<Message> {
        if self.stage != Stage::Fresh {
            return Err(Error::State("initiator already started".into()));
        }
        self.stage = Stage::Awaiting(MessageKind::M2);
        Ok(Message::m1(self.keys.h.clone(), ALICE, BOB))
    }

    /// Consumes `(h_B, e_B)`, derives `K_A`, and returns M3 carrying `e_A`.
    pub fn handle_m2(&mut self, m2: &Message) -> Result<Message> {
        if self.stage != Stage::Awaiting(MessageKind::M2) {
            return Err(Error::State(format!(
                "initiator not expecting M2 in {:?}",
                self.stage
            )));
        }
        m2.expect_kind(MessageKind::M2)?;
        m2.validate(&self.params)?;
        let peer_h = m2.h_or_err()?.clone();
        let peer_e = m2.e_or_err()?;
        let eph = make_ephemeral(&self.keys.f, &peer_h, &self.params, &mut self.rng)?;
        self.key = Some(derive_key(&self.keys.f, peer_e, &self.params)?);
        let m3 = Message::m3(eph.e.clone(), ALICE, BOB);
        self.peer_h = Some(peer_h);
        self.ephemeral = Some(eph);
        self.stage = Stage::Done;
        Ok(m3)
    }

    pub fn keys(&self) -> &KeyPair {
        &self.keys
    }

    pub fn peer_h(&self) -> Option<&Poly> {
        self.peer_h.as_ref()
    }

    pub fn ephemeral(&self) -> Option<&Ephemeral> {
        self.ephemeral.as_ref()
    }

    pub fn session_key(&self) -> Option<&SessionKey> {
        self.key.as_ref()
    }
}

/// Bob: answers M1 with M2, finishes on M3.
#[derive(Debug, Clone)]
pub struct Responder {
    params: Params,
    rng: SeededRng,
    keys: KeyPair,
    stage: Stage,
    peer_h: Option<Poly>,
    ephemeral: Option<Ephemeral>,
    key: Option<SessionKey>,
}

impl Responder {
    pub fn new(params: Params, mut rng: SeededRng) -> Result<Self> {
        let keys = keygen(&params, &mut rng, false)?;
        Ok(Responder {
            params,
            rng,
            keys,
            stage: Stage::Awaiting(MessageKind::M1),
            peer_h: None,
            ephemeral: None,
            key: None,
        })
    }

    /// Consumes `h_A` and returns M2 carrying `(h_B, e_B)`.
    pub fn handle_m1(&mut self, m1: &Message) -> Result<Message> {
        if self.stage != Stage::Awaiting(MessageKind::M1) {
            return Err(Error::State(format!(
                "responder not expecting M1 in {:?}",
                self.stage
            )));
        }
        m1.expect_kind(MessageKind::M1)?;
        m1.validate(&self.params)?;
        let peer_h = m1.h_or_err()?.clone();
        let eph = make_ephemeral(&self.keys.f, &peer_h, &self.params, &mut self.rng)?;
        let m2 = Message::m2(self.keys.h.clone(), eph.e.clone(), BOB, ALICE);
        self.peer_h = Some(peer_h);
        self.ephemeral = Some(eph);
        self.stage = Stage::Awaiting(MessageKind::M3);
        Ok(m2)
    }

    /// Consumes `e_A` and derives `K_B`.
    pub fn handle_m3(&mut self, m3: &Message) -> Result<&SessionKey> {
        if self.stage != Stage::Awaiting(MessageKind::M3) {
            return Err(Error::State(format!(
                "responder not expecting M3 in {:?}",
                self.stage
            )));
        }
        m3.expect_kind(MessageKind::M3)?;
        m3.validate(&self.params)?;
        let key = derive_key(&self.keys.f, m3.e_or_err()?, &self.params)?;
        self.stage = Stage::Done;
        Ok(self.key.insert(key))
    }

    pub fn keys(&self) -> &KeyPair {
        &self.keys
    }

    pub fn peer_h(&self) -> Option<&Poly> {
        self.peer_h.as_ref()
    }

    pub fn ephemeral(&self) -> Option<&Ephemeral> {
        self.ephemeral.as_ref()
    }

    pub fn session_key(&self) -> Option<&SessionKey> {
        self.key.as_ref()
    }
}

/// Drives one complete session over `link`, returning both finished roles.
pub fn run_session<T: Transport>(
    params: &Params,
    rng_a: SeededRng,
    rng_b: SeededRng,
    link: &mut T,
) -> Result<(Initiator, Responder)> {
    let mut alice = Initiator::new(*params, rng_a)?;
    let mut bob = Responder::new(*params, rng_b)?;
    let m1 = link.deliver(alice.start()?)?;
    let m2 = link.deliver(bob.handle_m1(&m1)?)?;
    let m3 = link.deliver(alice.handle_m2(&m2)?)?;
    bob.handle_m3(&m3)?;
    Ok((alice, bob))
}

/// Result of an unattacked session, including ground truth for checking.
#[derive(Debug, Clone)]
pub struct HonestExchange {
    pub transcript: Vec<Message>,
    pub key_a: SessionKey,
    pub key_b: SessionKey,
    pub alice: Initiator,
    pub bob: Responder,
}

impl HonestExchange {
    /// Collects the outcome of finished roles.
    pub fn from_roles(transcript: Vec<Message>, alice: Initiator, bob: Responder) -> Result<Self> {
        let unfinished = || Error::State("session did not complete".into());
        Ok(HonestExchange {
            transcript,
            key_a: alice.session_key().cloned().ok_or_else(unfinished)?,
            key_b: bob.session_key().cloned().ok_or_else(unfinished)?,
            alice,
            bob,
        })
    }

    pub fn keys_agree(&self) -> bool {
        self.key_a == self.key_b
    }

    /// Whether the margin condition held in both directions, i.e. whether
    /// agreement was guaranteed.
    pub fn margin_ok(&self, params: &Params) -> Result<bool> {
        let (fa, fb) = (self.alice.keys().f(), self.bob.keys().f());
        let r_b = &self.bob.ephemeral().expect("finished session").r;
        let r_a = &self.alice.ephemeral().expect("finished session").r;
        Ok(check_margin(fa, fb, r_b, self.alice.keys().g(), params)?
            && check_margin(fb, fa, r_a, self.bob.keys().g(), params)?)
    }
}

pub fn run_honest_exchange(
    params: &Params,
    rng_a: SeededRng,
    rng_b: SeededRng,
) -> Result<HonestExchange> {
    let mut link = DirectLink::default();
    let (alice, bob) = run_session(params, rng_a, rng_b, &mut link)?;
    HonestExchange::from_roles(link.transcript, alice, bob)
}
