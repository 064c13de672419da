use num_rational::BigRational;
use padic_mzv::frobenius::{
    coleman_iterint, per_af, per_cl, pmzv_index, Basepoint, FormalPeriod, PeriodContext, Route,
};
use padic_mzv::{Error, PadicNumber, ShuffleElement, Word};

fn ctx() -> PeriodContext {
    PeriodContext::build(5, 8, 3, None).unwrap()
}

fn point(c: &PeriodContext, n: i64, d: i64) -> Basepoint {
    let z = PadicNumber::from_rational(5, &BigRational::new(n.into(), d.into()), c.point_precision()).unwrap();
    Basepoint::Point(z)
}

#[test]
fn empty_word_integrates_to_one() {
    let c = ctx();
    let pairs = [
        (Basepoint::TangentZero, Basepoint::TangentOne),
        (Basepoint::TangentZero, point(&c, 10, 1)),
        (Basepoint::TangentZero, point(&c, 6, 1)),
        (point(&c, 5, 3), point(&c, 25, 1)),
        (point(&c, 6, 1), Basepoint::TangentOne),
    ];
    for (b, e) in pairs {
        let (v, _) = coleman_iterint(&b, &e, &Word::empty(), &c).unwrap();
        assert_eq!(v, PadicNumber::one(5, 8), "{b} -> {e}");
    }
}

#[test]
fn routes_are_labelled() {
    let c = ctx();
    let w = Word::from("01");
    let route = |b: Basepoint, e: Basepoint| coleman_iterint(&b, &e, &w, &c).unwrap().1;
    assert_eq!(route(Basepoint::TangentZero, Basepoint::TangentOne), Route::Af);
    assert_eq!(route(Basepoint::TangentZero, point(&c, 5, 1)), Route::Disc0);
    assert_eq!(route(Basepoint::TangentZero, point(&c, 6, 1)), Route::Disc1);
    assert_eq!(route(point(&c, 6, 1), point(&c, 11, 1)), Route::SameDisc);
}

#[test]
fn unsupported_geometry_is_an_error() {
    let c = ctx();
    let w = Word::from("1");
    let err = coleman_iterint(&Basepoint::TangentZero, &point(&c, 2, 1), &w, &c).unwrap_err();
    assert!(matches!(err, Error::UnsupportedGeometry(_)));
    let err = coleman_iterint(&point(&c, 5, 1), &point(&c, 6, 1), &w, &c).unwrap_err();
    assert!(matches!(err, Error::UnsupportedGeometry(_)));
    let err = coleman_iterint(&Basepoint::TangentOne, &Basepoint::TangentZero, &w, &c).unwrap_err();
    assert!(matches!(err, Error::UnsupportedGeometry(_)));
}

#[test]
fn paths_compose_across_routes() {
    // (1_0 -> b) then (b -> e) equals (1_0 -> e), for b, e near 1
    let c = ctx();
    let (b, e) = (point(&c, 6, 1), point(&c, -4, 1));
    let (first, _) = c.path_series(&Basepoint::TangentZero, &b).unwrap();
    let (second, r) = c.path_series(&b, &e).unwrap();
    let (direct, _) = c.path_series(&Basepoint::TangentZero, &e).unwrap();
    assert_eq!(r, Route::SameDisc);
    let composed = second.nc_mul(&first).unwrap();
    for (i, x) in direct.coeffs().iter().enumerate() {
        let d = x - composed.coeff_at(i);
        assert!(d.is_zero_mod(8), "{}: {d}", direct.word_at(i));
    }
}

#[test]
fn period_maps() {
    let c = ctx();
    let sym = FormalPeriod::word(Basepoint::TangentZero, Basepoint::TangentOne, Word::from("01"));
    assert_eq!(sym.name(), "I_{1_0}^{-1_1}([01])");
    let (af, route) = per_af(&sym, &c).unwrap();
    assert_eq!(route, Route::Af);
    assert_eq!(af, pmzv_index(&[2], &c.assoc).unwrap());
    assert_eq!(af, per_cl(&Word::from("01"), &c).unwrap());
    assert!(per_cl(&Word::from("0"), &c).unwrap().is_zero());
    assert_eq!(per_cl(&Word::empty(), &c).unwrap(), PadicNumber::one(5, 8));
    let empty = FormalPeriod::new(Basepoint::TangentZero, Basepoint::TangentOne, ShuffleElement::from_word(Word::empty()));
    assert_eq!(per_af(&empty, &c).unwrap().0, PadicNumber::one(5, 8));
    let near_zero = FormalPeriod::word(Basepoint::TangentZero, point(&c, 5, 1), Word::from("1"));
    let expected = PadicNumber::from_i64(5, -4, 20).unwrap().iwasawa_log().unwrap().neg();
    let (v, _) = per_af(&near_zero, &c).unwrap();
    assert!((&v - &expected).is_zero_mod(8));
}

#[test]
fn weight_overflow() {
    let c = ctx();
    let err = coleman_iterint(&Basepoint::TangentZero, &Basepoint::TangentOne, &Word::from("0101"), &c).unwrap_err();
    assert!(matches!(err, Error::WeightOverflow { .. }));
}
