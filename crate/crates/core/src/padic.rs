//! Capped relative-precision arithmetic in the p-adic field.
//!
//! A nonzero [`PadicNumber`] stores `p^v * u + O(p^(v+N))` with `u` a unit
//! reduced mod `p^N`. A number that is indistinguishable from zero is stored
//! as `O(p^A)`, carrying only its absolute precision `A`. Internally there is
//! also an exact zero (infinite absolute precision) used for missing series
//! entries and as the neutral element of sums; user-facing constructors never
//! produce it.
//!
//! Addition keeps the smaller absolute precision, multiplication and division
//! keep the smaller relative precision. Digits beyond the declared precision
//! are never stored, so the derived equality is bit-exact equality of the
//! canonical representation.

use std::cell::RefCell;
use std::cmp::min;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Absolute precision marker of the exact zero.
const EXACT: i64 = i64::MAX / 4;

thread_local! {
    static POWERS: RefCell<(u64, Vec<BigUint>)> = const { RefCell::new((0, Vec::new())) };
}

/// `p^k`, memoized per thread.
pub(crate) fn pow_p(p: u64, k: u32) -> BigUint {
    POWERS.with(|cache| {
        let mut cache = cache.borrow_mut();
        if cache.0 != p {
            *cache = (p, vec![BigUint::one()]);
        }
        while cache.1.len() <= k as usize {
            let next = cache.1.last().unwrap() * p;
            cache.1.push(next);
        }
        cache.1[k as usize].clone()
    })
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// Largest `e` with `p^e <= n` (0 for `n < p`).
pub(crate) fn floor_log(p: u64, n: u64) -> u32 {
    let mut e = 0;
    let mut q = p;
    while q <= n {
        e += 1;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    e
}

/// Divides out all factors of p and returns how many there were.
fn strip_biguint(p: u64, x: &mut BigUint) -> u32 {
    let pb = BigUint::from(p);
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return k;
        }
        *x = q;
        k += 1;
    }
}

fn strip_bigint(p: u64, x: &mut BigInt) -> u32 {
    let pb = BigInt::from(p);
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return k;
        }
        *x = q;
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u64,
    /// Valuation for nonzero values, absolute precision for zero.
    valuation: i64,
    unit: BigUint,
    rel_precision: u32,
    is_zero: bool,
}

impl PadicNumber {
    /// `O(p^abs)`.
    pub fn zero(p: u64, abs: i64) -> Self {
        PadicNumber {
            prime: p,
            valuation: abs.min(EXACT),
            unit: BigUint::zero(),
            rel_precision: 0,
            is_zero: true,
        }
    }

    pub(crate) fn exact_zero(p: u64) -> Self {
        Self::zero(p, EXACT)
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicNumber {
            prime: p,
            valuation: 0,
            unit: BigUint::one() % pow_p(p, prec),
            rel_precision: prec,
            is_zero: false,
        }
    }

    /// `p^valuation * unit` with `prec` significant digits; `unit` may carry
    /// factors of `p`, which are moved into the valuation.
    pub fn new(p: u64, valuation: i64, unit: BigUint, prec: u32) -> Result<Self> {
        check_prime(p)?;
        if prec == 0 {
            return Err(Error::InvalidPrecision);
        }
        let mut unit = unit;
        if unit.is_zero() {
            return Ok(Self::zero(p, valuation + prec as i64));
        }
        let k = strip_biguint(p, &mut unit);
        Ok(PadicNumber {
            prime: p,
            valuation: valuation + k as i64,
            unit: unit % pow_p(p, prec),
            rel_precision: prec,
            is_zero: false,
        })
    }

    /// An integer with `prec` significant digits (zero becomes `O(p^prec)`).
    pub fn from_bigint(p: u64, n: &BigInt, prec: u32) -> Result<Self> {
        Self::from_rational(p, &BigRational::from_integer(n.clone()), prec)
    }

    pub fn from_i64(p: u64, n: i64, prec: u32) -> Result<Self> {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    /// A rational with `prec` significant digits (zero becomes `O(p^prec)`).
    pub fn from_rational(p: u64, q: &BigRational, prec: u32) -> Result<Self> {
        check_prime(p)?;
        if prec == 0 {
            return Err(Error::InvalidPrecision);
        }
        if q.is_zero() {
            return Ok(Self::zero(p, prec as i64));
        }
        Ok(Self::from_rational_unchecked(p, q, prec))
    }

    pub(crate) fn from_rational_unchecked(p: u64, q: &BigRational, prec: u32) -> Self {
        if q.is_zero() {
            return Self::exact_zero(p);
        }
        let mut num = q.numer().clone();
        let mut den = q.denom().clone();
        let vn = strip_bigint(p, &mut num) as i64;
        let vd = strip_bigint(p, &mut den) as i64;
        let m = BigInt::from(pow_p(p, prec));
        let den_inv = den
            .mod_floor(&m)
            .modinv(&m)
            .expect("denominator coprime to p");
        let unit = (num * den_inv).mod_floor(&m);
        PadicNumber {
            prime: p,
            valuation: vn - vd,
            unit: unit.to_biguint().unwrap(),
            rel_precision: prec,
            is_zero: false,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `None` for values that are zero at their precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero).then_some(self.valuation)
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn rel_precision(&self) -> u32 {
        self.rel_precision
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero
    }

    pub(crate) fn is_exact_zero(&self) -> bool {
        self.is_zero && self.valuation >= EXACT
    }

    /// The exponent `k` such that the value is known mod `p^k`.
    pub fn absolute_precision(&self) -> i64 {
        if self.is_zero {
            self.valuation
        } else {
            self.valuation + self.rel_precision as i64
        }
    }

    /// True when the value is `0 mod p^k`.
    pub fn is_zero_mod(&self, k: i64) -> bool {
        match self.valuation() {
            None => true,
            Some(v) => v >= k,
        }
    }

    fn zero_like_abs(&self, abs: i64) -> Self {
        Self::zero(self.prime, abs)
    }

    fn check_same_prime(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        }
    }

    /// Drops digits so that the value is known only mod `p^abs`.
    pub fn reduce_abs(&self, abs: i64) -> Self {
        if self.is_zero {
            return self.zero_like_abs(min(self.valuation, abs));
        }
        if self.valuation >= abs {
            return self.zero_like_abs(abs);
        }
        let prec = min(self.rel_precision as i64, abs - self.valuation) as u32;
        if prec == self.rel_precision {
            return self.clone();
        }
        PadicNumber {
            prime: self.prime,
            valuation: self.valuation,
            unit: &self.unit % pow_p(self.prime, prec),
            rel_precision: prec,
            is_zero: false,
        }
    }

    pub fn with_rel_precision(&self, prec: u32) -> Self {
        if self.is_zero || prec >= self.rel_precision {
            return self.clone();
        }
        self.reduce_abs(self.valuation + prec as i64)
    }

    /// Treats the stored representative as exact and re-declares it with
    /// `prec` significant digits (zero-at-precision becomes exact zero).
    pub(crate) fn lift(&self, prec: u32) -> Self {
        if self.is_zero {
            return Self::exact_zero(self.prime);
        }
        let mut out = self.clone();
        out.rel_precision = prec.max(self.rel_precision);
        out
    }

    fn normalize(p: u64, v: i64, mut raw: BigUint, digits: u32) -> Self {
        if raw.is_zero() {
            return Self::zero(p, v + digits as i64);
        }
        let k = strip_biguint(p, &mut raw);
        PadicNumber {
            prime: p,
            valuation: v + k as i64,
            unit: raw,
            rel_precision: digits - k,
            is_zero: false,
        }
    }

    fn add_same_prime(&self, other: &Self) -> Self {
        let abs = min(self.absolute_precision(), other.absolute_precision());
        match (self.is_zero, other.is_zero) {
            (true, true) => self.zero_like_abs(abs),
            (true, false) => other.reduce_abs(abs),
            (false, true) => self.reduce_abs(abs),
            (false, false) => {
                let v = min(self.valuation, other.valuation);
                if v >= abs {
                    return self.zero_like_abs(abs);
                }
                let digits = (abs - v) as u32;
                let shifted = |x: &Self| -> BigUint {
                    let d = x.valuation - v;
                    if d >= digits as i64 {
                        BigUint::zero()
                    } else if d == 0 {
                        x.unit.clone()
                    } else {
                        &x.unit * pow_p(x.prime, d as u32)
                    }
                };
                let m = pow_p(self.prime, digits);
                let raw = (shifted(self) + shifted(other)) % m;
                Self::normalize(self.prime, v, raw, digits)
            }
        }
    }

    fn mul_same_prime(&self, other: &Self) -> Self {
        match (self.is_zero, other.is_zero) {
            (true, true) => self.zero_like_abs(self.valuation.saturating_add(other.valuation)),
            (true, false) => self.zero_like_abs(self.valuation.saturating_add(other.valuation)),
            (false, true) => self.zero_like_abs(other.valuation.saturating_add(self.valuation)),
            (false, false) => {
                let prec = min(self.rel_precision, other.rel_precision);
                let m = pow_p(self.prime, prec);
                PadicNumber {
                    prime: self.prime,
                    valuation: self.valuation + other.valuation,
                    unit: (&self.unit * &other.unit) % m,
                    rel_precision: prec,
                    is_zero: false,
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        Ok(self.add_same_prime(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        Ok(self.add_same_prime(&other.neg()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        Ok(self.mul_same_prime(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        let inv = other.inverse()?;
        Ok(self.mul_same_prime(&inv))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero {
            return Err(Error::DivisionByZero);
        }
        let m = pow_p(self.prime, self.rel_precision);
        let unit = self.unit.modinv(&m).expect("unit is invertible");
        Ok(PadicNumber {
            prime: self.prime,
            valuation: -self.valuation,
            unit,
            rel_precision: self.rel_precision,
            is_zero: false,
        })
    }

    pub fn neg(&self) -> Self {
        if self.is_zero {
            return self.clone();
        }
        let m = pow_p(self.prime, self.rel_precision);
        let mut out = self.clone();
        out.unit = (&m - &self.unit) % m;
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_same_prime(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same_prime(&base);
            }
        }
        acc.unwrap_or_else(|| {
            let prec = if self.is_zero { 1 } else { self.rel_precision };
            Self::one(self.prime, prec)
        })
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !(self.is_zero && self.valuation >= EXACT) {
            out.valuation += k;
        }
        out
    }

    fn int(&self, n: i64, prec: u32) -> Self {
        Self::from_rational_unchecked(self.prime, &BigRational::from_integer(n.into()), prec)
    }

    /// Iwasawa logarithm (`log p = 0`, Teichmüller units map to 0).
    ///
    /// `log(p^v u) = log(u^(p-1)) / (p-1)` and the 1-unit `u^(p-1) = 1 + y` is
    /// fed to the alternating series. Term `n` has valuation at least
    /// `n v(y) - floor(log_p n)`, which is increasing in `n`; summation stops
    /// once that bound reaches the target absolute precision, which equals
    /// the input's relative precision.
    pub fn iwasawa_log(&self) -> Result<Self> {
        if self.is_zero {
            return Err(Error::Domain("logarithm of a value that is zero at precision".into()));
        }
        let p = self.prime;
        let n = self.rel_precision;
        let target = n as i64;
        let m = pow_p(p, n);
        let x = self.unit.modpow(&BigUint::from(p - 1), &m);
        let y = (&x + &m - BigUint::one()) % &m;
        if y.is_zero() {
            return Ok(Self::zero(p, target));
        }
        let mut y_red = y.clone();
        let vy = strip_biguint(p, &mut y_red) as i64;
        let mut terms = 1u64;
        while (terms as i64 + 1) * vy - (floor_log(p, terms + 1) as i64) < target {
            terms += 1;
        }
        let extra = floor_log(p, terms) + 2;
        let work = n + extra;
        let mw = pow_p(p, work);
        let xw = self.unit.modpow(&BigUint::from(p - 1), &mw);
        let yw = (&xw + &mw - BigUint::one()) % &mw;
        let yw = Self::normalize(p, 0, yw, work);
        let mut power = yw.clone();
        let mut sum = yw.clone();
        for k in 2..=terms {
            power = power.mul_same_prime(&yw);
            let term = power.mul_same_prime(&self.int(k as i64, work).inverse()?);
            sum = if k % 2 == 0 {
                sum.add_same_prime(&term.neg())
            } else {
                sum.add_same_prime(&term)
            };
        }
        let sum = sum.mul_same_prime(&self.int(p as i64 - 1, work).inverse()?);
        Ok(sum.reduce_abs(target))
    }

    /// Exponential series, defined for valuation >= 1.
    ///
    /// Term `n` has valuation at least `n v - (n-1)/(p-1)`; the result is
    /// known to the input's absolute precision.
    pub fn padic_exp(&self) -> Result<Self> {
        let p = self.prime;
        if self.is_exact_zero() {
            return Err(Error::Domain("exponential of an exact zero has no precision".into()));
        }
        let abs = self.absolute_precision();
        if self.is_zero {
            if abs < 1 {
                return Err(Error::Domain("argument must have valuation >= 1".into()));
            }
            return Ok(Self::one(p, abs as u32));
        }
        let v = self.valuation;
        if v < 1 {
            return Err(Error::Domain("argument must have valuation >= 1".into()));
        }
        let mut terms = 1i64;
        while terms * v - (terms - 1) / (p as i64 - 1) < abs {
            terms += 1;
        }
        let extra = legendre(p, terms as u64) + 1;
        let work = self.rel_precision + extra;
        let a = self.lift(work);
        let mut term = Self::one(p, abs as u32 + extra);
        let mut sum = term.clone();
        for k in 1..=terms {
            term = term
                .mul_same_prime(&a)
                .mul_same_prime(&self.int(k, abs as u32 + extra).inverse()?);
            sum = sum.add_same_prime(&term);
        }
        Ok(sum.reduce_abs(abs))
    }

    /// The (p-1)-st root of unity congruent to a unit, by iterating `x -> x^p`.
    pub fn teichmuller(&self) -> Result<Self> {
        if self.is_zero || self.valuation != 0 {
            return Err(Error::Domain("Teichmüller lift needs a unit".into()));
        }
        let m = pow_p(self.prime, self.rel_precision);
        let p = BigUint::from(self.prime);
        let mut x = self.unit.clone();
        loop {
            let next = x.modpow(&p, &m);
            if next == x {
                break;
            }
            x = next;
        }
        Ok(PadicNumber {
            prime: self.prime,
            valuation: 0,
            unit: x,
            rel_precision: self.rel_precision,
            is_zero: false,
        })
    }

    /// Signed representative in `(-p^N/2, p^N/2]` scaled by `p^v`, as a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero {
            return BigRational::zero();
        }
        let m = BigInt::from(pow_p(self.prime, self.rel_precision));
        let mut u = BigInt::from(self.unit.clone());
        if &u * 2 > m {
            u -= &m;
        }
        let pp = BigInt::from(self.prime);
        if self.valuation >= 0 {
            BigRational::from_integer(u * num_traits::pow(pp, self.valuation as usize))
        } else {
            BigRational::new(u, num_traits::pow(pp, (-self.valuation) as usize))
        }
    }

    pub fn to_json(&self) -> Value {
        if self.is_zero {
            let v = if self.is_exact_zero() {
                Value::Null
            } else {
                json!(self.valuation)
            };
            json!({"p": self.prime, "v": v, "unit": "0", "prec": 0, "zero": true})
        } else {
            json!({
                "p": self.prime,
                "v": self.valuation,
                "unit": self.unit.to_string(),
                "prec": self.rel_precision,
                "zero": false,
            })
        }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Config(format!("malformed p-adic JSON: {m}"));
        let p = value["p"].as_u64().ok_or_else(|| bad("p"))?;
        check_prime(p)?;
        let zero = value["zero"].as_bool().ok_or_else(|| bad("zero"))?;
        if zero {
            return Ok(match value["v"].as_i64() {
                Some(abs) => Self::zero(p, abs),
                None => Self::exact_zero(p),
            });
        }
        let v = value["v"].as_i64().ok_or_else(|| bad("v"))?;
        let prec = value["prec"].as_u64().ok_or_else(|| bad("prec"))? as u32;
        let unit: BigUint = value["unit"]
            .as_str()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("unit"))?;
        if prec == 0 || unit.is_zero() || (&unit % p).is_zero() || unit >= pow_p(p, prec) {
            return Err(bad("non-canonical unit"));
        }
        Self::new(p, v, unit, prec)
    }
}

/// `v_p(n!)`.
fn legendre(p: u64, n: u64) -> u32 {
    let mut s = 0;
    let mut q = n / p;
    while q > 0 {
        s += q as u32;
        q /= p;
    }
    s
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            write!(f, "0")
        } else if self.is_zero {
            write!(f, "O({}^{})", self.prime, self.valuation)
        } else {
            write!(
                f,
                "{}^{} * {} + O({}^{})",
                self.prime,
                self.valuation,
                self.unit,
                self.prime,
                self.absolute_precision()
            )
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                assert_eq!(self.prime, rhs.prime, "prime mismatch");
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_same_prime);
forward_binop!(Mul, mul, mul_same_prime);

impl std::ops::Sub<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: &PadicNumber) -> PadicNumber {
        assert_eq!(self.prime, rhs.prime, "prime mismatch");
        self.add_same_prime(&rhs.neg())
    }
}

impl std::ops::Div<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;
    fn div(self, rhs: &PadicNumber) -> PadicNumber {
        self.checked_div(rhs).expect("p-adic division")
    }
}

impl std::ops::Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        PadicNumber::neg(self)
    }
}

/// Parses `a`, `-a` or `a/b` in decimal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let syntax = |position: usize, message: &str| Error::Syntax {
        position,
        message: message.to_string(),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| syntax(0, "expected a decimal integer numerator"))?;
    let den: BigInt = match den {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| syntax(s.find('/').unwrap() + 1, "expected a decimal integer denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(syntax(s.len(), "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// `v_p` of a nonzero rational.
pub fn rational_valuation(p: u64, q: &BigRational) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let mut n = q.numer().abs();
    let mut d = q.denom().abs();
    Some(strip_bigint(p, &mut n) as i64 - strip_bigint(p, &mut d) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u64, n: i64, prec: u32) -> PadicNumber {
        PadicNumber::from_i64(p, n, prec).unwrap()
    }

    #[test]
    fn division_matches_modular_inverse() {
        // 2 * 313 = 626 = 1 + 625
        let r = q(5, 1, 4).checked_div(&q(5, 2, 4)).unwrap();
        assert_eq!(r.valuation(), Some(0));
        assert_eq!(r.unit(), &BigUint::from(313u32));
        assert_eq!(r.rel_precision(), 4);
    }

    #[test]
    fn addition_cancellation_loses_relative_precision() {
        let r = q(5, 5, 4).checked_add(&q(5, 20, 4)).unwrap();
        assert_eq!(r.valuation(), Some(2));
        assert_eq!(r.unit(), &BigUint::one());
        assert_eq!(r.absolute_precision(), 5);
        assert_eq!(r.rel_precision(), 3);
    }

    #[test]
    fn zero_is_additive_identity() {
        let a = q(7, 12345, 6);
        assert_eq!(a.checked_add(&PadicNumber::exact_zero(7)).unwrap(), a);
        let z = PadicNumber::zero(7, 10);
        assert_eq!(a.checked_add(&z).unwrap(), a);
    }

    #[test]
    fn prime_mismatch_and_zero_division_are_errors() {
        assert_eq!(
            q(5, 1, 4).checked_add(&q(7, 1, 4)),
            Err(Error::PrimeMismatch(5, 7))
        );
        assert_eq!(
            q(5, 1, 4).checked_div(&PadicNumber::zero(5, 4)),
            Err(Error::DivisionByZero)
        );
        assert_eq!(PadicNumber::from_i64(2, 1, 4), Err(Error::InvalidPrime(2)));
        assert_eq!(PadicNumber::from_i64(9, 1, 4), Err(Error::InvalidPrime(9)));
    }

    #[test]
    fn precision_exhaustion_is_a_value() {
        let a = q(5, 1, 2);
        let b = q(5, 26, 2);
        let d = a.checked_sub(&b).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.absolute_precision(), 2);
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = q(7, 1, 10).iwasawa_log().unwrap();
        assert!(l.is_zero());
        assert_eq!(l.absolute_precision(), 10);
    }

    #[test]
    fn log_matches_direct_series() {
        // log(1 + 5) = sum (-1)^(n+1) 5^n / n, summed in exact rationals
        let mut s = BigRational::zero();
        for n in 1..40i64 {
            let t = BigRational::new(BigInt::from(5).pow(n as u32), BigInt::from(n));
            s = if n % 2 == 1 { s + t } else { s - t };
        }
        let oracle = PadicNumber::from_rational(5, &s, 12).unwrap().reduce_abs(6);
        let l = q(5, 6, 6).iwasawa_log().unwrap();
        assert_eq!(l, oracle);
    }

    #[test]
    fn log_kills_p_and_roots_of_unity() {
        assert!(q(7, 7, 10).iwasawa_log().unwrap().is_zero());
        let w = q(7, 3, 10).teichmuller().unwrap();
        assert!(w.iwasawa_log().unwrap().is_zero());
    }

    #[test]
    fn exp_of_zero_and_inverse_of_log() {
        let one = PadicNumber::zero(5, 6).padic_exp().unwrap();
        assert_eq!(one, q(5, 1, 6));
        let x = q(5, 6, 6);
        let back = x.iwasawa_log().unwrap().padic_exp().unwrap();
        assert_eq!(back, x);
        assert!(q(5, 3, 6).padic_exp().is_err());
    }

    #[test]
    fn teichmuller_of_two_mod_625() {
        let w = q(5, 2, 4).teichmuller().unwrap();
        let u = w.unit().clone();
        assert_eq!(&u % 5u32, BigUint::from(2u32));
        assert_eq!(u.modpow(&BigUint::from(4u32), &BigUint::from(625u32)), BigUint::one());
        assert_eq!(q(5, 1, 4).teichmuller().unwrap(), q(5, 1, 4));
        assert!(q(5, 10, 4).teichmuller().is_err());
    }

    #[test]
    fn rendering() {
        let a = q(5, 50, 3);
        assert_eq!(a.to_string(), "5^2 * 2 + O(5^5)");
        assert_eq!(PadicNumber::zero(7, 10).to_string(), "O(7^10)");
        let j = a.to_json();
        assert_eq!(j["unit"], "2");
        assert_eq!(PadicNumber::from_json(&j).unwrap(), a);
    }

    #[test]
    fn rational_parsing() {
        let r = parse_rational("3/14").unwrap();
        assert_eq!(r, BigRational::new(3.into(), 14.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let a = PadicNumber::from_rational(7, &r, 5).unwrap();
        assert_eq!(a.valuation(), Some(-1));
    }
}
