//! Invariant suites run by `padic-mzv verify`, with machine-readable reports.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frobenius::{
    coleman_iterint, compute_associator, per_af, per_cl, Basepoint, FormalPeriod, PeriodContext, Route,
};
use crate::kz::{auto_degree, nested_sum_oracle, polylog_value};
use crate::padic::{check_prime, PadicNumber};
use crate::series::NCSeries;
use crate::shuffle::{
    antipode, antipode_convolution, coproduct, shuffle, tensor_shuffle, word_to_index, words_up_to, Alphabet,
    ShuffleElement, Word,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Shuffle,
    Grouplike,
    Theorem,
    Torsor,
    Oracle,
    Precision,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Shuffle,
        Suite::Grouplike,
        Suite::Theorem,
        Suite::Torsor,
        Suite::Oracle,
        Suite::Precision,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Shuffle => "shuffle",
            Suite::Grouplike => "grouplike",
            Suite::Theorem => "theorem",
            Suite::Torsor => "torsor",
            Suite::Oracle => "oracle",
            Suite::Precision => "precision",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite \"{s}\"")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// `"0"` on success, otherwise the first offending residual.
    pub residual: String,
    pub tolerance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "residual": c.residual,
                "tolerance": c.tolerance,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub p: u64,
    pub n: u32,
    pub w: usize,
    pub d: Option<usize>,
}

/// Collects the first failure of a family of checks.
struct Tally {
    name: String,
    tolerance: String,
    count: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: impl Into<String>, tolerance: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            tolerance: tolerance.into(),
            count: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.count += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(describe());
        }
    }

    fn finish(self) -> Check {
        let passed = self.first_failure.is_none() && self.count > 0;
        Check {
            name: format!("{} ({} cases)", self.name, self.count),
            passed,
            residual: self.first_failure.unwrap_or_else(|| "0".into()),
            tolerance: self.tolerance,
        }
    }
}

/// `a ≡ b mod p^n`, with both known at least that far.
pub fn agree_mod(a: &PadicNumber, b: &PadicNumber, n: u32) -> bool {
    let n = n as i64;
    a.absolute_precision() >= n && b.absolute_precision() >= n && a.reduce_abs(n) == b.reduce_abs(n)
}

fn exact() -> &'static str {
    "exact"
}

fn mod_p(n: u32) -> String {
    format!("mod p^{n}")
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Report> {
    if suite != Suite::Shuffle {
        check_prime(cfg.p)?;
    }
    let checks = match suite {
        Suite::Shuffle => shuffle_suite(cfg.w),
        Suite::Grouplike => grouplike_suite(cfg)?,
        Suite::Theorem => theorem_suite(cfg)?,
        Suite::Torsor => torsor_suite(cfg)?,
        Suite::Oracle => oracle_suite(cfg)?,
        Suite::Precision => precision_suite(cfg)?,
    };
    Ok(Report { suite, checks })
}

fn shuffle_suite(cap: usize) -> Vec<Check> {
    let words = words_up_to(&Alphabet::binary(), cap);
    let mut comm = Tally::new("shuffle commutativity", exact());
    let mut mass = Tally::new("shuffle coefficient mass", exact());
    let mut hopf = Tally::new("deconcatenation of shuffles", exact());
    let mut assoc = Tally::new("shuffle associativity", exact());
    for u in &words {
        for v in &words {
            if u.weight() + v.weight() > cap {
                continue;
            }
            let uv = shuffle(u, v);
            comm.record(uv == shuffle(v, u), || format!("{u} ш {v}"));
            let expected = binomial(u.weight() + v.weight(), u.weight());
            mass.record(uv.mass() == expected, || format!("mass of {u} ш {v} is {}", uv.mass()));
            let lhs = coproduct(&uv);
            let rhs = tensor_shuffle(&coproduct(&ShuffleElement::from_word(u.clone())), &coproduct(&ShuffleElement::from_word(v.clone())));
            hopf.record(lhs == rhs, || format!("Δ({u} ш {v})"));
            for x in &words {
                if u.weight() + v.weight() + x.weight() > cap {
                    continue;
                }
                let left = uv.shuffle(&ShuffleElement::from_word(x.clone()));
                let right = ShuffleElement::from_word(u.clone()).shuffle(&shuffle(v, x));
                assoc.record(left == right, || format!("({u} ш {v}) ш {x}"));
            }
        }
    }
    let mut anti = Tally::new("antipode identity", exact());
    for w in &words {
        let r = antipode_convolution(w);
        let expected = if w.is_empty() {
            ShuffleElement::from_word(Word::empty())
        } else {
            ShuffleElement::zero()
        };
        anti.record(r == expected, || format!("{w}: {r}"));
    }
    vec![comm.finish(), assoc.finish(), mass.finish(), hopf.finish(), anti.finish()]
}

fn binomial(n: usize, k: usize) -> BigRational {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(r)
}

fn grouplike_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let assoc = compute_associator(cfg.p, cfg.n, cfg.w, cfg.d)?;
    let report = assoc.series().is_grouplike();
    let mut checks = vec![Check {
        name: format!("associator group-like ({} pairs)", report.pairs_checked),
        passed: report.is_zero(),
        residual: report
            .failures
            .first()
            .map(|(u, v, r)| format!("({u}, {v}): {r}"))
            .or(report.unit_deviation.clone())
            .unwrap_or_else(|| "0".into()),
        tolerance: mod_p(cfg.n),
    }];
    let mut low = Tally::new("weight-1 and weight-2 coefficients vanish", mod_p(cfg.n));
    for w in words_up_to(&Alphabet::binary(), 2).into_iter().skip(1) {
        let c = assoc.series().coeff(&w)?;
        low.record(c.is_zero_mod(cfg.n as i64), || format!("{w}: {c}"));
    }
    checks.push(low.finish());
    Ok(checks)
}

fn theorem_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let ctx = PeriodContext::build(cfg.p, cfg.n, cfg.w, cfg.d)?;
    let mut agree = Tally::new("per_af(I(1_0, -1_1; w)) = per_cl(w)", "bit-exact");
    for w in words_up_to(&Alphabet::binary(), cfg.w) {
        let sym = FormalPeriod::word(Basepoint::TangentZero, Basepoint::TangentOne, w.clone());
        let (af, route) = per_af(&sym, &ctx)?;
        let cl = per_cl(&w, &ctx)?;
        agree.record(af == cl && route == Route::Af, || format!("{w}: {af} vs {cl}"));
    }
    Ok(vec![agree.finish()])
}

fn torsor_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let assoc = compute_associator(cfg.p, cfg.n, cfg.w, cfg.d)?;
    let phi = assoc.series();
    let inv = phi.nc_inverse()?;
    let unit = NCSeries::identity(&Alphabet::binary(), cfg.w, PadicNumber::one(cfg.p, cfg.n));
    let mut round = Tally::new("Φ Φ⁻¹ = 1", mod_p(cfg.n));
    for (i, c) in phi.nc_mul(&inv)?.coeffs().iter().enumerate() {
        round.record(agree_mod(c, unit.coeff_at(i), cfg.n), || format!("{}: {c}", phi.word_at(i)));
    }
    let mut anti = Tally::new("pair(w, Φ⁻¹) = pair(S(w), Φ)", mod_p(cfg.n));
    for w in words_up_to(&Alphabet::binary(), cfg.w) {
        let a = inv.pair_word(&w)?;
        let b = phi.pair(&antipode(&w))?;
        anti.record(agree_mod(&a, &b, cfg.n), || format!("{w}: {a} vs {b}"));
    }
    Ok(vec![round.finish(), anti.finish()])
}

/// The points used for disc-of-0 cross-checks: `p, p², p + p²`.
pub fn disc_zero_points(p: u64) -> Vec<BigRational> {
    let p = BigInt::from(p);
    [p.clone(), &p * &p, &p + &p * &p]
        .into_iter()
        .map(BigRational::from_integer)
        .collect()
}

/// The points used for disc-of-1 cross-checks: `1 + p, 1 - p, 1 + p²`.
pub fn disc_one_points(p: u64) -> Vec<BigRational> {
    let one = BigInt::one();
    let p = BigInt::from(p);
    [&one + &p, &one - &p, &one + &p * &p]
        .into_iter()
        .map(BigRational::from_integer)
        .collect()
}

/// `eval_li` against direct nested sums, for every word ending in `e1`.
pub fn polylog_oracle_check(p: u64, n: u32, cap: usize) -> Result<Check> {
    let mut tally = Tally::new("eval_li = nested sums", mod_p(n));
    for z in disc_zero_points(p) {
        let v = crate::padic::rational_valuation(p, &z).unwrap();
        for w in words_up_to(&Alphabet::binary(), cap) {
            let Ok(index) = word_to_index(&w) else { continue };
            let value = polylog_value(p, &w, &z, n)?;
            let terms = auto_degree(p, v, w.weight(), n as i64);
            let zp = PadicNumber::from_rational(p, &z, n + 8)?;
            let oracle = nested_sum_oracle(&index, &zp, terms, n as i64)?;
            tally.record(agree_mod(&value, &oracle, n), || format!("{w} at {z}: {value} vs {oracle}"));
        }
    }
    Ok(tally.finish())
}

/// Weight-one values along routes into both discs against `iwasawa_log`.
pub fn log_binding_checks(ctx: &PeriodContext) -> Result<Vec<Check>> {
    let p = ctx.assoc.prime();
    let n = ctx.assoc.precision();
    let prec = ctx.point_precision();
    let mut e0 = Tally::new("∫_{1_0}^z e0 = log z, z near 1", mod_p(n));
    for z in disc_one_points(p) {
        let zp = PadicNumber::from_rational(p, &z, prec)?;
        let (value, route) = coleman_iterint(&Basepoint::TangentZero, &Basepoint::Point(zp.clone()), &Word::from("0"), ctx)?;
        let expected = zp.iwasawa_log()?;
        e0.record(route == Route::Disc1 && agree_mod(&value, &expected, n), || {
            format!("z = {z}: {value} vs {expected}")
        });
    }
    let mut e1 = Tally::new("∫_{1_0}^z e1 = -log(1 - z), z near 0", mod_p(n));
    for z in disc_zero_points(p) {
        let zp = PadicNumber::from_rational(p, &z, prec)?;
        let (value, route) = coleman_iterint(&Basepoint::TangentZero, &Basepoint::Point(zp.clone()), &Word::from("1"), ctx)?;
        let one_minus = &PadicNumber::one(p, prec) - &zp;
        let expected = one_minus.iwasawa_log()?.neg();
        e1.record(route == Route::Disc0 && agree_mod(&value, &expected, n), || {
            format!("z = {z}: {value} vs {expected}")
        });
    }
    Ok(vec![e0.finish(), e1.finish()])
}

/// Route through the disc of 0 against nested sums for words up to weight 3.
fn route_oracle_check(ctx: &PeriodContext) -> Result<Check> {
    let p = ctx.assoc.prime();
    let n = ctx.assoc.precision();
    let cap = ctx.assoc.weight_cap().min(3);
    let mut tally = Tally::new("route disc0 = nested sums", mod_p(n));
    for z in disc_zero_points(p) {
        let v = crate::padic::rational_valuation(p, &z).unwrap();
        let zp = PadicNumber::from_rational(p, &z, ctx.point_precision())?;
        for w in words_up_to(&Alphabet::binary(), cap) {
            let Ok(index) = word_to_index(&w) else { continue };
            let (value, _) = coleman_iterint(&Basepoint::TangentZero, &Basepoint::Point(zp.clone()), &w, ctx)?;
            let oracle = nested_sum_oracle(&index, &zp, auto_degree(p, v, w.weight(), n as i64), n as i64)?;
            tally.record(agree_mod(&value, &oracle, n), || format!("{w} at {z}: {value} vs {oracle}"));
        }
    }
    Ok(tally.finish())
}

fn oracle_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = vec![polylog_oracle_check(cfg.p, cfg.n, cfg.w.min(4))?];
    let ctx = PeriodContext::build(cfg.p, cfg.n, cfg.w, cfg.d)?;
    checks.push(route_oracle_check(&ctx)?);
    checks.extend(log_binding_checks(&ctx)?);
    Ok(checks)
}

fn precision_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let base = compute_associator(cfg.p, cfg.n, cfg.w, cfg.d)?;
    let finer = compute_associator(cfg.p, cfg.n + 4, cfg.w, Some(2 * base.degree()))?;
    let mut assoc = Tally::new("associator at N+4 and 2D, truncated", "byte-identical");
    for (i, c) in base.series().coeffs().iter().enumerate() {
        let t = finer.series().coeff_at(i).reduce_abs(cfg.n as i64);
        assoc.record(c.to_json() == t.to_json(), || format!("{}: {c} vs {t}", base.series().word_at(i)));
    }
    let mut poly = Tally::new("polylog values at 2N, truncated", "byte-identical");
    for z in disc_zero_points(cfg.p) {
        for w in words_up_to(&Alphabet::binary(), cfg.w.min(3)) {
            if word_to_index(&w).is_err() {
                continue;
            }
            let a = polylog_value(cfg.p, &w, &z, cfg.n)?;
            let b = polylog_value(cfg.p, &w, &z, 2 * cfg.n)?.reduce_abs(cfg.n as i64);
            poly.record(a.to_json() == b.to_json(), || format!("{w} at {z}: {a} vs {b}"));
        }
    }
    Ok(vec![assoc.finish(), poly.finish()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn shuffle_suite_small_cap() {
        let r = run_suite(Suite::Shuffle, &VerifyConfig { p: 5, n: 4, w: 3, d: None }).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert_eq!(r.to_json()["checks"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn failing_tally_reports_first_residual() {
        let mut t = Tally::new("x", "exact");
        t.record(true, || unreachable!());
        t.record(false, || "first".into());
        t.record(false, || "second".into());
        let c = t.finish();
        assert!(!c.passed);
        assert_eq!(c.residual, "first");
    }

    #[test]
    fn torsor_small() {
        let r = run_suite(Suite::Torsor, &VerifyConfig { p: 5, n: 6, w: 3, d: None }).unwrap();
        assert!(r.passed(), "{:?}", r);
    }
}
