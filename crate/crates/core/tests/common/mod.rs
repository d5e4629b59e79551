//! Reference arithmetic written independently of `ntru_ke::ring`.
#![allow(dead_code)]

/// Plain polynomial product (length 2N - 1), then fold `x^k -> x^(k mod N)`,
/// all over the integers.
pub fn schoolbook_fold(a: &[i64], b: &[i64]) -> Vec<i128> {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut full = vec![0i128; 2 * n - 1];
    for i in 0..n {
        for j in 0..n {
            full[i + j] += a[i] as i128 * b[j] as i128;
        }
    }
    let mut folded = vec![0i128; n];
    for (k, c) in full.into_iter().enumerate() {
        folded[k % n] += c;
    }
    folded
}

/// Smallest-magnitude representative with ties going to +m/2.
pub fn lift(c: i128, m: i64) -> i64 {
    let m = m as i128;
    let mut r = c % m;
    if r < 0 {
        r += m;
    }
    if 2 * r > m {
        r -= m;
    }
    r as i64
}

pub fn schoolbook_mod(a: &[i64], b: &[i64], m: i64) -> Vec<i64> {
    schoolbook_fold(a, b)
        .into_iter()
        .map(|c| lift(c, m))
        .collect()
}

pub fn schoolbook_integer(a: &[i64], b: &[i64]) -> Vec<i64> {
    schoolbook_fold(a, b)
        .into_iter()
        .map(|c| c as i64)
        .collect()
}
