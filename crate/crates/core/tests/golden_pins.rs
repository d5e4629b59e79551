//! Fixed-seed outputs pinned to `tests/golden/pins.json`.
//!
//! Regenerate deliberately with `UPDATE_GOLDEN=1 cargo test --test golden_pins`.

mod common;

use std::path::PathBuf;

use ntru_ke::adversary::eve_keygen;
use ntru_ke::protocol::{keygen, make_ephemeral, run_honest_exchange};
use ntru_ke::ring::{Params, Poly};
use ntru_ke::sampling::SeededRng;
use serde_json::{json, Value};

fn small() -> Params {
    Params::with_weight(7, 3, 32, 2).unwrap()
}

fn compute() -> Value {
    let kp = keygen(&small(), &mut SeededRng::new(7), false).unwrap();

    let mut rng = SeededRng::new(9);
    let own = keygen(&small(), &mut rng, false).unwrap();
    let peer = keygen(&small(), &mut rng, false).unwrap();
    let eph = make_ephemeral(own.f(), peer.h(), &small(), &mut rng).unwrap();

    let g = Params::guarantee();
    let honest = run_honest_exchange(&g, SeededRng::new(1), SeededRng::new(2)).unwrap();
    let eve = eve_keygen(&g, &mut SeededRng::new(99)).unwrap();

    json!({
        "keygen_seed7": { "f": kp.f(), "g": kp.g(), "h": kp.h(), "f_inv_q": kp.f_inv_q() },
        "ephemeral_seed9": { "r": eph.r, "e": eph.e },
        "honest_seeds_1_2": { "key": honest.key_a },
        "eve_seed99": {
            "f_prime": eve.kp_prime.f(), "h_prime": eve.kp_prime.h(),
            "f_dprime": eve.kp_dprime.f(), "h_dprime": eve.kp_dprime.h(),
        },
    })
}

fn path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/pins.json")
}

#[test]
fn pins_match() {
    let got = compute();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(path(), serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
    }
    let want: Value =
        serde_json::from_slice(&std::fs::read(path()).expect("golden pins missing")).unwrap();
    assert_eq!(got, want);
}

#[test]
fn runs_are_repeatable() {
    assert_eq!(compute(), compute());
}

#[test]
fn pinned_ephemeral_matches_schoolbook() {
    let mut rng = SeededRng::new(9);
    let own = keygen(&small(), &mut rng, false).unwrap();
    let peer = keygen(&small(), &mut rng, false).unwrap();
    let eph = make_ephemeral(own.f(), peer.h(), &small(), &mut rng).unwrap();

    // e = p * (r * h) + f, reduced once at the end
    let rh = common::schoolbook_integer(eph.r.coeffs(), peer.h().coeffs());
    let e: Vec<i64> = rh
        .iter()
        .zip(own.f().coeffs())
        .map(|(x, f)| common::lift((3 * x + f) as i128, 32))
        .collect();
    assert_eq!(eph.e, Poly::from_coeffs(e));
}

#[test]
fn pinned_keypair_is_consistent() {
    let kp = keygen(&small(), &mut SeededRng::new(7), false).unwrap();
    assert_eq!(
        common::schoolbook_mod(kp.f().coeffs(), kp.f_inv_q().coeffs(), 32),
        Poly::one(7).into_coeffs()
    );
    let fh = common::schoolbook_mod(kp.f().coeffs(), kp.h().coeffs(), 32);
    assert_eq!(fh, kp.g().coeffs());
}
