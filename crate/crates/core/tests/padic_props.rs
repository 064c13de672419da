use num_bigint::BigInt;
use num_rational::BigRational;
use padic_mzv::PadicNumber;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5), Just(7), Just(11)]
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-1_000_000i64..-1, 1i64..1_000_000]
}

fn int(p: u64, n: i64, prec: u32) -> PadicNumber {
    PadicNumber::from_i64(p, n, prec).unwrap()
}

fn rat(p: u64, n: i64, d: i64, prec: u32) -> PadicNumber {
    PadicNumber::from_rational(p, &BigRational::new(n.into(), d.into()), prec).unwrap()
}

/// Equal as far as both are known.
fn same(a: &PadicNumber, b: &PadicNumber) -> bool {
    (a - b).is_zero()
}

/// `v_p(n)` by repeated division.
fn val(p: u64, mut n: i64) -> i64 {
    let mut v = 0;
    while n % p as i64 == 0 {
        n /= p as i64;
        v += 1;
    }
    v
}

proptest! {
    #[test]
    fn integers_embed_as_a_ring(p in prime(), a in nonzero(), b in nonzero(), prec in 3u32..12) {
        let (x, y) = (int(p, a, prec), int(p, b, prec));
        if a + b != 0 {
            prop_assert!(same(&(&x + &y), &int(p, a + b, prec)));
        }
        prop_assert!(same(&(&x * &y), &int(p, a * b, 2 * prec)));
        prop_assert!(same(&(&x - &y), &(&x + &y.neg())));
    }

    #[test]
    fn rational_round_trip(p in prime(), n in nonzero(), d in 1i64..100_000, prec in 2u32..16) {
        let x = rat(p, n, d, prec);
        let back = x.to_rational();
        let diff = back - BigRational::new(n.into(), d.into());
        let v_diff = if diff == BigRational::from_integer(0.into()) {
            i64::MAX
        } else {
            val_rational(p, &diff)
        };
        prop_assert!(v_diff >= x.absolute_precision());
        prop_assert_eq!(x.valuation(), Some(val(p, n) - val(p, d)));
    }

    #[test]
    fn doubled_precision_truncates_to_same_digits(
        p in prime(), a in nonzero(), b in nonzero(), c in 1i64..1000, prec in 2u32..10,
    ) {
        let lo = [int(p, a, prec), int(p, b, prec), rat(p, 1, c, prec)];
        let hi = [int(p, a, 2 * prec), int(p, b, 2 * prec), rat(p, 1, c, 2 * prec)];
        let ops: [fn(&PadicNumber, &PadicNumber) -> PadicNumber; 3] =
            [|x, y| x + y, |x, y| x * y, |x, y| x / y];
        for op in ops {
            let r = op(&lo[0], &op(&lo[1], &lo[2]));
            let s = op(&hi[0], &op(&hi[1], &hi[2])).reduce_abs(r.absolute_precision());
            prop_assert_eq!(r, s);
        }
    }

    #[test]
    fn field_axioms(p in prime(), a in nonzero(), b in nonzero(), c in nonzero(), d in 1i64..500, prec in 2u32..12) {
        let x = rat(p, a, d, prec);
        let y = int(p, b, prec);
        let z = rat(p, c, d + 1, prec);
        prop_assert!(same(&(&(&x + &y) + &z), &(&x + &(&y + &z))));
        prop_assert!(same(&(&(&x * &y) * &z), &(&x * &(&y * &z))));
        prop_assert!(same(&(&x * &(&y + &z)), &(&(&x * &y) + &(&x * &z))));
        prop_assert!(same(&(&(&x / &y) * &y), &x));
    }

    #[test]
    fn log_is_a_homomorphism(p in prime(), a in nonzero(), b in nonzero(), prec in 4u32..12) {
        let (x, y) = (int(p, a, prec), int(p, b, prec));
        let lhs = (&x * &y).iwasawa_log().unwrap();
        let rhs = &x.iwasawa_log().unwrap() + &y.iwasawa_log().unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn exp_and_log_invert(p in prime(), k in -10_000i64..10_000, prec in 4u32..12) {
        prop_assume!(k != 0);
        // 1 + p k is a 1-unit, p k has positive valuation
        let t = int(p, p as i64 * k, prec);
        let one_unit = &PadicNumber::one(p, prec) + &t;
        prop_assert!(same(&one_unit.iwasawa_log().unwrap().padic_exp().unwrap(), &one_unit));
        prop_assert!(same(&t.padic_exp().unwrap().iwasawa_log().unwrap(), &t));
    }

    #[test]
    fn exp_of_sum(p in prime(), j in 1i64..1000, k in 1i64..1000, prec in 4u32..10) {
        let (x, y) = (int(p, p as i64 * j, prec), int(p, p as i64 * k, prec));
        let lhs = (&x + &y).padic_exp().unwrap();
        let rhs = &x.padic_exp().unwrap() * &y.padic_exp().unwrap();
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn teichmuller_is_a_root_of_unity(p in prime(), a in nonzero(), prec in 2u32..12) {
        prop_assume!(a % p as i64 != 0);
        let x = int(p, a, prec);
        let w = x.teichmuller().unwrap();
        prop_assert!(same(&w.pow(p - 1), &PadicNumber::one(p, prec)));
        let ratio = &x / &w;
        prop_assert!((&ratio - &PadicNumber::one(p, prec)).is_zero_mod(1));
        prop_assert!(same(&w.iwasawa_log().unwrap(), &PadicNumber::zero(p, prec as i64)));
    }

    #[test]
    fn json_round_trip(p in prime(), n in nonzero(), d in 1i64..1000, prec in 1u32..20) {
        let x = rat(p, n, d, prec);
        prop_assert_eq!(PadicNumber::from_json(&x.to_json()).unwrap(), x);
    }
}

fn val_rational(p: u64, q: &BigRational) -> i64 {
    let pb = BigInt::from(p);
    let (mut n, mut d) = (q.numer().clone(), q.denom().clone());
    let mut v = 0;
    while (&n % &pb) == BigInt::from(0) {
        n /= &pb;
        v += 1;
    }
    while (&d % &pb) == BigInt::from(0) {
        d /= &pb;
        v -= 1;
    }
    v
}

#[test]
fn log_matches_direct_series() {
    // log(1 + 5) = sum (-1)^(n+1) 5^n / n, with v(5^n/n) >= n - log_5 n
    let p = 5;
    let prec = 6;
    let mut acc = BigRational::from_integer(0.into());
    for n in 1..40i64 {
        let term = BigRational::new(BigInt::from(5).pow(n as u32), n.into());
        acc = if n % 2 == 1 { acc + term } else { acc - term };
    }
    let expected = PadicNumber::from_rational(p, &acc, prec + 4).unwrap();
    let got = int(p, 6, prec + 1).iwasawa_log().unwrap();
    assert!(same(&got, &expected), "{got} vs {expected}");
    assert!(got.absolute_precision() >= prec as i64);
}
