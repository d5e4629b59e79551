mod common;

use ntru_ke::adversary::{run_mitm, MitmOptions};
use ntru_ke::harness::{Channel, Direction};
use ntru_ke::protocol::{
    blind, check_margin, derive_key, expected_key, keygen, make_ephemeral, run_honest_exchange,
    run_session, MessageKind,
};
use ntru_ke::ring::{conv_mul, reduce_centered, Params, Poly};
use ntru_ke::sampling::{sample_ternary, SeededRng};

#[test]
fn public_key_consistency() {
    let params = Params::guarantee();
    let mut rng = SeededRng::new(500);
    for _ in 0..50 {
        let kp = keygen(&params, &mut rng, false).unwrap();
        assert_eq!(
            conv_mul(kp.f(), kp.h(), params.q()).unwrap(),
            reduce_centered(kp.g(), params.q())
        );
    }
}

#[test]
fn agreement_and_symmetry_under_margin() {
    let params = Params::guarantee();
    for seed in 0..100u64 {
        let run = run_honest_exchange(
            &params,
            SeededRng::new(2 * seed),
            SeededRng::new(2 * seed + 1),
        )
        .unwrap();
        assert!(run.margin_ok(&params).unwrap());
        let fa = run.alice.keys().f();
        let fb = run.bob.keys().f();
        let ab = expected_key(fa, fb, &params).unwrap();
        let ba = expected_key(fb, fa, &params).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(run.key_a, ab);
        assert_eq!(run.key_b, ab);
        let reference: Vec<i64> = common::schoolbook_integer(fa.coeffs(), fb.coeffs())
            .into_iter()
            .map(|c| common::lift(c as i128, 3))
            .collect();
        assert_eq!(run.key_a.poly().coeffs(), &reference[..]);
    }
}

#[test]
fn ephemeral_congruent_to_f_without_wraparound() {
    // A tiny "public key" keeps p*(r*h) + f inside (-q/2, q/2].
    let params = Params::guarantee();
    let mut rng = SeededRng::new(77);
    for _ in 0..20 {
        let own = keygen(&params, &mut rng, false).unwrap();
        let small_h =
            sample_ternary(ntru_ke::sampling::TernarySpec::new(1, 1), &params, &mut rng).unwrap();
        let eph = make_ephemeral(own.f(), &small_h, &params, &mut rng).unwrap();
        assert!(eph.e.max_abs() < params.q() / 2);
        assert_eq!(reduce_centered(&eph.e, 3), reduce_centered(own.f(), 3));
    }
}

#[test]
fn zero_blinding_gives_f_back() {
    let params = Params::guarantee();
    let mut rng = SeededRng::new(8);
    let a = keygen(&params, &mut rng, false).unwrap();
    let b = keygen(&params, &mut rng, false).unwrap();
    let e = blind(b.f(), a.h(), &Poly::zero(params.n()), &params).unwrap();
    assert_eq!(&e, b.f());
    // f_A * f_B directly
    assert_eq!(
        derive_key(a.f(), &e, &params).unwrap(),
        expected_key(a.f(), b.f(), &params).unwrap()
    );
}

#[test]
fn margin_holds_for_guarantee_draws() {
    let params = Params::guarantee();
    let mut rng = SeededRng::new(3);
    for _ in 0..200 {
        let fa = sample_ternary(params.f_spec(), &params, &mut rng).unwrap();
        let fb = sample_ternary(params.f_spec(), &params, &mut rng).unwrap();
        let r = sample_ternary(params.r_spec(), &params, &mut rng).unwrap();
        let g = sample_ternary(params.g_spec(), &params, &mut rng).unwrap();
        assert!(check_margin(&fa, &fb, &r, &g, &params).unwrap());
    }
}

#[test]
fn eve_does_not_perturb_what_victims_send() {
    let params = Params::guarantee();
    let mut ch = Channel::honest();
    run_session(&params, SeededRng::new(10), SeededRng::new(11), &mut ch).unwrap();
    let honest_m1 = &ch.log()[0];
    assert_eq!(honest_m1.direction, Direction::AToB);

    let run = run_mitm(
        &params,
        SeededRng::new(10),
        SeededRng::new(11),
        SeededRng::new(12),
        MitmOptions::default(),
    )
    .unwrap();
    let captured_m1 = run
        .log
        .iter()
        .find(|e| e.direction == Direction::Captured && e.message.kind == MessageKind::M1)
        .unwrap();
    assert_eq!(captured_m1.message, honest_m1.message);
    assert_eq!(captured_m1.wire, honest_m1.wire);
}

#[test]
fn passive_eve_reduces_to_honest_run() {
    let params = Params::guarantee();
    let honest = run_honest_exchange(&params, SeededRng::new(20), SeededRng::new(21)).unwrap();
    let passive = MitmOptions {
        substitute: false,
        continuation: false,
    };
    let run = run_mitm(
        &params,
        SeededRng::new(20),
        SeededRng::new(21),
        SeededRng::new(22),
        passive,
    )
    .unwrap();
    assert_eq!(run.alice.session_key(), Some(&honest.key_a));
    assert_eq!(run.bob.session_key(), Some(&honest.key_b));
    let sent: Vec<_> = run.log.iter().map(|e| e.message.clone()).collect();
    assert_eq!(sent, honest.transcript);
    assert!(run
        .log
        .iter()
        .all(|e| matches!(e.direction, Direction::AToB | Direction::BToA)));
    // Listening alone recovers nothing.
    assert!(!run.report.f_a_match && !run.report.f_b_match);
    assert!(!run.report.sessions_transparent);
}

#[test]
fn mitm_log_shape() {
    let params = Params::guarantee();
    let run = run_mitm(
        &params,
        SeededRng::new(1),
        SeededRng::new(2),
        SeededRng::new(3),
        MitmOptions::default(),
    )
    .unwrap();
    let shape: Vec<_> = run
        .log
        .iter()
        .map(|e| (e.direction, e.message.kind))
        .collect();
    use Direction::*;
    use MessageKind::*;
    assert_eq!(
        shape,
        [
            (Captured, M1),
            (Forwarded, M1),
            (Captured, M2),
            (Forwarded, M2),
            (Captured, M3),
            (Forwarded, M3)
        ]
    );
    for (i, e) in run.log.iter().enumerate() {
        assert_eq!(e.seq, i as u64);
        e.message.validate(&params).unwrap();
        assert_eq!(e.wire, e.message.to_wire());
    }
    // Labels are untouched: Bob still believes M1 came from Alice.
    assert_eq!(run.log[1].message.sender, "alice");
    assert_eq!(run.log[3].message.sender, "bob");
}
