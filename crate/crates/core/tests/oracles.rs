//! Values checked against computations that share no code with the solver.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_mzv::frobenius::{compute_associator, compute_associator_with, pmzv_index, SolverOptions};
use padic_mzv::kz::polylog_value;
use padic_mzv::shuffle::words_of_weight;
use padic_mzv::{Alphabet, Error, PadicNumber, Word};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            // binom = C(m+1, j)
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `p^k/(p^k - 1) L_p(k, ω^(1-k))` from the Washington series
/// `L_p(s, χ) = 1/(s-1) 1/F sum_a χ(a) <a>^(1-s) sum_j C(1-s, j) (F/a)^j B_j`
/// with conductor `F = p`; truncated at `terms` Bernoulli numbers.
fn kubota_leopoldt_zeta(p: u64, k: i64, terms: usize) -> BigRational {
    let b = bernoulli(terms);
    let mut s = BigRational::zero();
    for a in 1..p as i64 {
        let mut binom = BigRational::one();
        let mut ratio = BigRational::one();
        let a_pow = BigRational::one() / BigRational::from_integer(BigInt::from(a).pow((k - 1) as u32));
        for (j, bj) in b.iter().enumerate() {
            s += &a_pow * &binom * &ratio * bj;
            binom *= q(1 - k - j as i64, j as i64 + 1);
            ratio *= q(p as i64, a);
        }
    }
    let pk = BigInt::from(p).pow(k as u32);
    let l = s / q(k - 1, 1) / q(p as i64, 1);
    l * BigRational::new(pk.clone(), pk - 1)
}

#[test]
fn zeta3_matches_kubota_leopoldt() {
    for p in [5u64, 7, 11] {
        let n = 10;
        let assoc = compute_associator(p, n, 3, None).unwrap();
        let got = pmzv_index(&[3], &assoc).unwrap();
        let expected = PadicNumber::from_rational(p, &kubota_leopoldt_zeta(p, 3, 40), n + 4)
            .unwrap()
            .reduce_abs(n as i64);
        assert_eq!(got, expected, "p = {p}");
        assert_eq!(got.valuation(), Some(3));
    }
}

#[test]
fn euler_relation_and_duality() {
    let assoc = compute_associator(11, 10, 3, None).unwrap();
    let z3 = pmzv_index(&[3], &assoc).unwrap();
    assert_eq!(pmzv_index(&[2, 1], &assoc).unwrap(), z3);
    assert_eq!(assoc.series().coeff(&Word::from("100")).unwrap(), &z3);
    // regularized: ζ(1,2) = -2 ζ(3) from ζ(1) ш ζ(2) = 0
    let z12 = pmzv_index(&[1, 2], &assoc).unwrap();
    let two = PadicNumber::from_i64(11, 2, 10).unwrap();
    assert!((&z12 + &(&two * &z3)).is_zero());
}

#[test]
fn weight_four_vanishes() {
    for p in [5u64, 7] {
        let assoc = compute_associator(p, 10, 4, None).unwrap();
        for w in words_of_weight(&Alphabet::binary(), 4) {
            assert!(assoc.series().coeff(&w).unwrap().is_zero(), "p = {p}, {w}");
        }
    }
}

#[test]
fn depth_two_polylog_by_hand_summation() {
    // Li_(2,1)(z) = sum_{n > m >= 1} z^n / (n^2 m), summed over rationals
    let p = 7u64;
    let z = q(7, 1);
    let mut total = BigRational::zero();
    let mut harmonic = BigRational::zero();
    for n in 1..=40i64 {
        let zn = BigRational::from_integer(BigInt::from(7).pow(n as u32));
        total += zn * &harmonic / q(n * n, 1);
        harmonic += q(1, n);
    }
    let expected = PadicNumber::from_rational(p, &total, 20).unwrap().reduce_abs(8);
    let got = polylog_value(p, &Word::from("011"), &z, 8).unwrap();
    assert_eq!(got, expected);
}

#[test]
fn reordered_work_is_bit_identical() {
    let a = compute_associator(7, 10, 4, None).unwrap();
    let b = compute_associator_with(
        7,
        10,
        4,
        &SolverOptions {
            reverse_word_order: true,
            ..SolverOptions::default()
        },
    )
    .unwrap();
    assert_eq!(a.series().to_json(), b.series().to_json());
    assert_eq!(a.manifest(), b.manifest());
}

#[test]
fn explicit_degree_agrees_with_auto() {
    let auto = compute_associator(5, 8, 4, None).unwrap();
    let wide = compute_associator(5, 8, 4, Some(auto.degree() + 40)).unwrap();
    assert_eq!(auto.series(), wide.series());
    assert_eq!(wide.manifest().d, auto.degree() + 40);
}

#[test]
fn configuration_errors() {
    assert_eq!(compute_associator(4, 10, 3, None).unwrap_err(), Error::InvalidPrime(4));
    assert_eq!(compute_associator(2, 10, 3, None).unwrap_err(), Error::InvalidPrime(2));
    assert!(matches!(compute_associator(7, 10, 1, None), Err(Error::Config(_))));
    assert!(matches!(compute_associator(7, 10, 3, Some(3)), Err(Error::Config(_))));
    assert_eq!(compute_associator(7, 0, 3, None).unwrap_err(), Error::InvalidPrecision);
}

#[test]
fn too_short_truncation_is_a_hard_error() {
    // 12 terms cannot pin weight-3 values mod 7^10
    let err = compute_associator(7, 10, 3, Some(12)).unwrap_err();
    assert!(matches!(err, Error::SolverFailure { .. }), "{err:?}");
}
