//! The fundamental solution of `dG = (e0 dt/t + e1 dt/(1-t)) G` at the
//! tangential basepoint `1` at `0`, as a table of multiple polylogarithms.
//!
//! Each entry is a polynomial in the symbol `ℓ = log t` whose coefficients are
//! power series in `t` truncated at degree `D`, with exact rational
//! coefficients. The first letter of a word is the last integration:
//! `Li_{e0 w} = ∫ Li_w dt/t`, `Li_{e1 w} = ∫ Li_w dt/(1-t)`, pure `e0` words
//! give `ℓ^k/k!` and every integration constant is zero.
//!
//! Evaluation tail bound: the `t^n` coefficient of a weight-`m` entry times
//! `z^n` has valuation at least `n v(z) - m floor(log_p n)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::padic::{floor_log, PadicNumber};
use crate::series::{Coefficient, NCSeries};
use crate::shuffle::{format_word, Alphabet, Letter, Word};

/// Largest weight a table may be built for.
pub const MAX_TABLE_WEIGHT: usize = 8;

/// `sum_k ℓ^k f_k(t)` with each `f_k` truncated at `t^D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogPolySeries {
    degree: usize,
    /// `parts[k][n]` is the coefficient of `ℓ^k t^n`; trailing zero parts are
    /// trimmed and at least one part is kept.
    parts: Vec<Vec<BigRational>>,
}

impl LogPolySeries {
    pub fn zero(degree: usize) -> Self {
        LogPolySeries {
            degree,
            parts: vec![vec![BigRational::zero(); degree + 1]],
        }
    }

    pub fn one(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.parts[0][0] = BigRational::one();
        s
    }

    /// `ℓ^k / k!`.
    pub fn log_power(degree: usize, k: usize) -> Self {
        let mut s = Self::zero(degree);
        s.parts = vec![vec![BigRational::zero(); degree + 1]; k + 1];
        let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
        s.parts[k][0] = BigRational::new(BigInt::one(), fact);
        s
    }

    pub fn from_parts(degree: usize, mut parts: Vec<Vec<BigRational>>) -> Self {
        for p in parts.iter_mut() {
            p.resize(degree + 1, BigRational::zero());
        }
        if parts.is_empty() {
            parts.push(vec![BigRational::zero(); degree + 1]);
        }
        let mut s = LogPolySeries { degree, parts };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.parts.len() > 1 && self.parts.last().unwrap().iter().all(Zero::is_zero) {
            self.parts.pop();
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Largest power of `ℓ` with a nonzero coefficient (0 for the zero series).
    pub fn log_degree(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn part(&self, k: usize) -> Option<&[BigRational]> {
        self.parts.get(k).map(Vec::as_slice)
    }

    pub fn coefficient(&self, k: usize, n: usize) -> BigRational {
        self.parts
            .get(k)
            .and_then(|p| p.get(n))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        assert_eq!(self.degree, other.degree, "t-degree mismatch");
        let len = self.parts.len().max(other.parts.len());
        let zero = BigRational::zero();
        let parts = (0..len)
            .map(|k| {
                (0..=self.degree)
                    .map(|n| {
                        let a = self.parts.get(k).map_or(&zero, |p| &p[n]);
                        let b = other.parts.get(k).map_or(&zero, |p| &p[n]);
                        f(a, b)
                    })
                    .collect()
            })
            .collect();
        Self::from_parts(self.degree, parts)
    }

    /// `t d/dt`, with `t d/dt ℓ = 1`.
    pub fn theta(&self) -> Self {
        let d = self.degree;
        let mut parts = vec![vec![BigRational::zero(); d + 1]; self.parts.len()];
        for (k, part) in self.parts.iter().enumerate() {
            for (n, c) in part.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if n > 0 {
                    parts[k][n] += c * BigRational::from_integer(n.into());
                }
                if k > 0 {
                    parts[k - 1][n] += c * BigRational::from_integer(k.into());
                }
            }
        }
        Self::from_parts(d, parts)
    }

    /// The unique `g` with `θ g = self` and no `ℓ^0 t^0` term.
    pub fn integrate_dt_over_t(&self) -> Self {
        let d = self.degree;
        let mut parts = vec![vec![BigRational::zero(); d + 1]; self.parts.len() + 1];
        for (k, part) in self.parts.iter().enumerate() {
            if !part[0].is_zero() {
                parts[k + 1][0] += &part[0] / BigRational::from_integer((k + 1).into());
            }
            for (n, c) in part.iter().enumerate().skip(1) {
                if c.is_zero() {
                    continue;
                }
                // ∫ ℓ^k t^n dt/t = t^n sum_j (-1)^j k!/(k-j)! ℓ^(k-j) / n^(j+1)
                let nn = BigRational::from_integer(n.into());
                let mut factor = c / &nn;
                for j in 0..=k {
                    parts[k - j][n] += &factor;
                    factor = -factor * BigRational::from_integer((k - j).into()) / &nn;
                }
            }
        }
        Self::from_parts(d, parts)
    }

    /// Multiplication by `t/(1-t) = t + t^2 + ...`.
    pub fn times_t_over_one_minus_t(&self) -> Self {
        let d = self.degree;
        let parts = self
            .parts
            .iter()
            .map(|part| {
                let mut out = vec![BigRational::zero(); d + 1];
                let mut acc = BigRational::zero();
                for n in 1..=d {
                    acc += &part[n - 1];
                    out[n] = acc.clone();
                }
                out
            })
            .collect();
        Self::from_parts(d, parts)
    }

    /// Substitutes `t = z`, `ℓ = ell`; `powers[n] = z^n` for `n <= D`.
    fn evaluate(&self, powers: &[PadicNumber], ell: &PadicNumber, prec: u32) -> PadicNumber {
        let p = ell.prime();
        let mut acc = PadicNumber::exact_zero(p);
        let mut ell_pow: Option<PadicNumber> = None;
        for part in &self.parts {
            let mut s = PadicNumber::exact_zero(p);
            for (n, c) in part.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let cp = PadicNumber::from_rational_unchecked(p, c, prec);
                s = &s + &(&cp * &powers[n]);
            }
            let term = match &ell_pow {
                None => s,
                Some(lp) => &s * lp,
            };
            acc = &acc + &term;
            ell_pow = Some(match ell_pow {
                None => ell.clone(),
                Some(lp) => &lp * ell,
            });
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, part) in self.parts.iter().enumerate() {
            let coeffs: Vec<Value> = part.iter().map(|c| json!(rational_string(c))).collect();
            map.insert(k.to_string(), Value::Array(coeffs));
        }
        Value::Object(map)
    }
}

fn rational_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

impl fmt::Display for LogPolySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, part) in self.parts.iter().enumerate() {
            for (n, c) in part.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c})")?;
                if k > 0 {
                    write!(f, "*l^{k}")?;
                }
                if n > 0 {
                    write!(f, "*t^{n}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.degree + 1)
    }
}

impl Coefficient for LogPolySeries {
    fn zero_like(&self) -> Self {
        Self::zero(self.degree)
    }
    fn one_like(&self) -> Self {
        Self::one(self.degree)
    }
    fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }
    fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }
    fn times(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "t-degree mismatch");
        let d = self.degree;
        let mut parts = vec![vec![BigRational::zero(); d + 1]; self.parts.len() + other.parts.len() - 1];
        for (i, a) in self.parts.iter().enumerate() {
            for (j, b) in other.parts.iter().enumerate() {
                let out = &mut parts[i + j];
                for (n, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (m, y) in b.iter().enumerate().take(d + 1 - n) {
                        if !y.is_zero() {
                            out[n + m] += x * y;
                        }
                    }
                }
            }
        }
        Self::from_parts(d, parts)
    }
    fn negated(&self) -> Self {
        LogPolySeries {
            degree: self.degree,
            parts: self
                .parts
                .iter()
                .map(|p| p.iter().map(|c| -c).collect())
                .collect(),
        }
    }
    fn scaled(&self, q: &BigRational) -> Self {
        Self::from_parts(
            self.degree,
            self.parts
                .iter()
                .map(|p| p.iter().map(|c| c * q).collect())
                .collect(),
        )
    }
    /// Only `ℓ`-free series with a nonzero constant term are invertible.
    fn reciprocal(&self) -> Option<Self> {
        if self.parts.len() > 1 || self.parts[0][0].is_zero() {
            return None;
        }
        let a = &self.parts[0];
        let d = self.degree;
        let mut r = vec![BigRational::zero(); d + 1];
        r[0] = a[0].recip();
        for k in 1..=d {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                acc += &a[i] * &r[k - i];
            }
            r[k] = -acc * &r[0];
        }
        Some(Self::from_parts(d, vec![r]))
    }
    fn vanishes(&self) -> bool {
        self.parts.iter().all(|p| p.iter().all(Zero::is_zero))
    }
    fn to_json(&self) -> Value {
        LogPolySeries::to_json(self)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Which local coordinate a table is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `t`, basepoint `1` at `0`.
    Zero,
    /// `s = 1 - t`, basepoint `-1` at `1`; entries are keyed by the global
    /// letters, so letter `e1` carries `-ℓ_s` at weight 1.
    One,
}

/// The generating series `sum_w Li_w w` over [`LogPolySeries`].
#[derive(Clone, Debug, PartialEq)]
pub struct LiTable {
    chart: Chart,
    series: NCSeries<LogPolySeries>,
}

impl LiTable {
    pub fn weight_cap(&self) -> usize {
        self.series.weight_cap()
    }

    pub fn degree(&self) -> usize {
        self.series.coeff_at(0).degree()
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn series(&self) -> &NCSeries<LogPolySeries> {
        &self.series
    }

    pub fn entry(&self, w: &Word) -> Result<&LogPolySeries> {
        self.series.coeff(w)
    }

    /// Verifies the differential recursion entry by entry; returns the first
    /// word where it fails. Only meaningful for the chart at 0.
    pub fn check_derivatives(&self) -> std::result::Result<(), Word> {
        let ix = self.series.indexer();
        for idx in 1..ix.len() {
            let (head, tail) = ix.split(idx, 1);
            let lhs = self.series.coeff_at(idx).theta();
            let src = self.series.coeff_at(tail);
            let rhs = if head == 1 {
                src.clone()
            } else {
                src.times_t_over_one_minus_t()
            };
            if lhs != rhs {
                return Err(self.series.word_at(idx));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Map::new();
        for (w, c) in self.series.iter() {
            entries.insert(format_word(&w), c.to_json());
        }
        json!({
            "W": self.weight_cap(),
            "D": self.degree(),
            "chart": match self.chart { Chart::Zero => "0", Chart::One => "1" },
            "entries": Value::Object(entries),
        })
    }
}

/// Builds `Li_w` for every binary word of weight `<= w_cap`, truncated at `t^d`.
pub fn build_li_table(w_cap: usize, d: usize) -> Result<LiTable> {
    if w_cap > MAX_TABLE_WEIGHT {
        return Err(Error::WeightOverflow {
            weight: w_cap,
            cap: MAX_TABLE_WEIGHT,
        });
    }
    if d == 0 {
        return Err(Error::Config("degree cap D must be at least 1".into()));
    }
    let alphabet = Alphabet::binary();
    let mut series = NCSeries::identity(&alphabet, w_cap, LogPolySeries::one(d));
    let ix = series.indexer().clone();
    for m in 1..=w_cap {
        let range = ix.weight_range(m);
        let block: Vec<LogPolySeries> = range
            .clone()
            .into_par_iter()
            .map(|idx| {
                let (head, tail) = ix.split(idx, 1);
                let src = series.coeff_at(tail);
                if head == 1 {
                    src.integrate_dt_over_t()
                } else {
                    src.times_t_over_one_minus_t().integrate_dt_over_t()
                }
            })
            .collect();
        let mut coeffs = series.coeffs().to_vec();
        coeffs[range.clone()].clone_from_slice(&block);
        series = NCSeries::from_vec(&alphabet, w_cap, coeffs);
    }
    Ok(LiTable {
        chart: Chart::Zero,
        series,
    })
}

/// `e0 <-> e1`.
pub fn swap_letters(w: &Word) -> Word {
    w.map_letters(|l| match l {
        Letter::E0 => Letter::E1,
        Letter::E1 => Letter::E0,
        other => other,
    })
}

/// Moves a table between the two charts: in `s = 1 - t` the forms satisfy
/// `dt/t = -ds/(1-s)` and `dt/(1-t) = -ds/s`, so the entry of `swap(w)` is
/// `(-1)^|w| Li_w(s)`. Applying it twice is the identity.
pub fn transport(table: &LiTable) -> LiTable {
    let src = &table.series;
    let series = NCSeries::from_fn(src.alphabet(), src.weight_cap(), |w| {
        let c = src.coeff(&swap_letters(w)).expect("same shape");
        if w.weight() % 2 == 0 {
            c.clone()
        } else {
            c.negated()
        }
    });
    LiTable {
        chart: match table.chart {
            Chart::Zero => Chart::One,
            Chart::One => Chart::Zero,
        },
        series,
    }
}

/// The local solution at the tangential basepoint `-1` at `1`, in `s = 1 - t`.
pub fn local_table_at_one(w_cap: usize, d: usize) -> Result<LiTable> {
    Ok(transport(&build_li_table(w_cap, d)?))
}

/// `min over n > d of n v - m floor(log_p n)`: a valuation lower bound for
/// the discarded tail of a weight-`m` entry at a point of valuation `v`.
pub fn tail_bound(p: u64, v: i64, m: usize, d: usize) -> i64 {
    let m = m as i64;
    let start = d as u64 + 1;
    let mut best = start as i64 * v - m * floor_log(p, start) as i64;
    // within [p^e, p^(e+1)) the bound is smallest at the left end
    let mut q = p;
    let mut e = 1i64;
    loop {
        if q > start {
            let val = q as i64 * v - m * e;
            if val >= best {
                break;
            }
            best = val;
        }
        match q.checked_mul(p) {
            Some(next) if next < (1 << 40) => q = next,
            _ => break,
        }
        e += 1;
    }
    best
}

/// Smallest `D` whose tail bound reaches `target`.
pub fn auto_degree(p: u64, v: i64, m: usize, target: i64) -> usize {
    let mut d = 1;
    while tail_bound(p, v, m, d) < target {
        d += 1;
    }
    d
}

fn check_in_disc_of_zero(z: &PadicNumber) -> Result<()> {
    match z.valuation() {
        Some(v) if v < 1 => Err(Error::Domain(format!(
            "point {z} is outside the residue disc of 0"
        ))),
        None if z.absolute_precision() < 1 => Err(Error::Domain(format!(
            "point {z} is not known to lie in the residue disc of 0"
        ))),
        _ => Ok(()),
    }
}

/// Working relative precision for table coefficients: the input digits plus
/// the largest possible denominator valuation.
fn coefficient_precision(z: &PadicNumber, m: usize, d: usize) -> u32 {
    z.rel_precision().max(1) + (m as u32) * floor_log(z.prime(), d as u64 + 1) + 2
}

fn evaluate_entry(
    entry: &LogPolySeries,
    m: usize,
    z: &PadicNumber,
    powers: &[PadicNumber],
    ell: Option<&PadicNumber>,
) -> Result<PadicNumber> {
    let p = z.prime();
    if z.is_zero() {
        if entry.log_degree() > 0 {
            return Err(Error::Domain("log singularity at z = 0".into()));
        }
        let c = entry.coefficient(0, 0);
        let base = PadicNumber::zero(p, z.absolute_precision());
        return Ok(if c.is_zero() {
            base
        } else {
            &base + &PadicNumber::from_rational_unchecked(p, &c, z.absolute_precision().max(1) as u32)
        });
    }
    let prec = coefficient_precision(z, m, entry.degree());
    let ell = ell.expect("nonzero point has a logarithm");
    let value = entry.evaluate(powers, ell, prec);
    let tail = tail_bound(p, z.valuation().unwrap(), m, entry.degree());
    Ok(value.reduce_abs(tail))
}

fn powers_of(z: &PadicNumber, d: usize) -> Vec<PadicNumber> {
    let p = z.prime();
    let prec = z.rel_precision().max(1);
    let mut out = Vec::with_capacity(d + 1);
    out.push(PadicNumber::one(p, prec));
    for n in 1..=d {
        let next = &out[n - 1] * z;
        out.push(next);
    }
    out
}

/// `Li_w(z)` for `z` in the punctured residue disc of 0 (or at the chart's
/// own origin for entries without a log singularity).
///
/// The declared precision is the smaller of the tracked p-adic precision and
/// the tail bound at the table's degree.
pub fn eval_li(table: &LiTable, w: &Word, z: &PadicNumber) -> Result<PadicNumber> {
    check_in_disc_of_zero(z)?;
    let entry = table.entry(w)?;
    let powers = if z.is_zero() { Vec::new() } else { powers_of(z, table.degree()) };
    let ell = if z.is_zero() { None } else { Some(z.iwasawa_log()?) };
    evaluate_entry(entry, w.weight(), z, &powers, ell.as_ref())
}

/// Evaluates every entry of a table at `z`, giving the path series.
pub fn eval_table(table: &LiTable, z: &PadicNumber) -> Result<NCSeries<PadicNumber>> {
    check_in_disc_of_zero(z)?;
    let powers = if z.is_zero() { Vec::new() } else { powers_of(z, table.degree()) };
    let ell = if z.is_zero() { None } else { Some(z.iwasawa_log()?) };
    let series = &table.series;
    let values: Vec<Result<PadicNumber>> = (0..series.coeffs().len())
        .into_par_iter()
        .map(|idx| {
            let m = series.indexer().weight(idx);
            evaluate_entry(series.coeff_at(idx), m, z, &powers, ell.as_ref())
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(NCSeries::from_vec(series.alphabet(), series.weight_cap(), values))
}

/// `Li_w(z)` at a rational point, known mod `p^n`: picks the table degree
/// from the tail bound and raises the working precision until the tracked
/// precision reaches `n`.
pub fn polylog_value(p: u64, w: &Word, z: &BigRational, n: u32) -> Result<PadicNumber> {
    crate::padic::check_prime(p)?;
    Alphabet::binary().contains_word(w)?;
    let target = n as i64;
    if z.is_zero() {
        let zp = PadicNumber::zero(p, target);
        let table = build_li_table(w.weight(), 1)?;
        return eval_li(&table, w, &zp);
    }
    let v = crate::padic::rational_valuation(p, z).unwrap();
    if v < 1 {
        return Err(Error::Domain(format!(
            "point {z} is outside the residue disc of 0 for p = {p}"
        )));
    }
    let d = auto_degree(p, v, w.weight(), target);
    let table = build_li_table(w.weight(), d)?;
    let mut guard = 2 + w.weight() as u32 * (floor_log(p, d as u64) + 1);
    for _ in 0..8 {
        let zp = PadicNumber::from_rational(p, z, n + guard)?;
        let value = eval_li(&table, w, &zp)?;
        if value.absolute_precision() >= target {
            return Ok(value.reduce_abs(target));
        }
        guard += n.max(4);
    }
    Err(Error::PrecisionUnderflow(format!(
        "could not reach absolute precision {n} for Li_{w}"
    )))
}

/// `sum_{n1 > ... > nr >= 1, n1 <= terms} z^n1 / (n1^k1 ... nr^kr)`, summed
/// directly and known mod `p^target`.
///
/// Fails when the discarded tail is not provably below `p^target`.
pub fn nested_sum_oracle(index: &[u32], z: &PadicNumber, terms: usize, target: i64) -> Result<PadicNumber> {
    if index.is_empty() || index.contains(&0) {
        return Err(Error::InvalidIndex(format!("{index:?}")));
    }
    check_in_disc_of_zero(z)?;
    let p = z.prime();
    if z.is_zero() {
        return Ok(PadicNumber::zero(p, z.absolute_precision().min(target)));
    }
    let weight: usize = index.iter().map(|&k| k as usize).sum();
    let v = z.valuation().unwrap();
    if tail_bound(p, v, weight, terms) < target {
        return Err(Error::InsufficientTerms {
            needed: auto_degree(p, v, weight, target),
            given: terms,
        });
    }
    let prec = (target.max(1) as u32) + weight as u32 * (floor_log(p, terms as u64) + 1) + 2;
    let inv_pow = |n: usize, k: u32| -> PadicNumber {
        let q = BigRational::new(BigInt::one(), BigInt::from(n).pow(k));
        PadicNumber::from_rational_unchecked(p, &q, prec)
    };
    // level[n] = sum over n > n2 > ... of the inner factors, for the current depth
    let r = index.len();
    let mut level: Vec<PadicNumber> = (0..=terms)
        .map(|n| if n == 0 { PadicNumber::exact_zero(p) } else { inv_pow(n, index[r - 1]) })
        .collect();
    for j in (0..r - 1).rev() {
        let mut prefix = PadicNumber::exact_zero(p);
        let mut next = vec![PadicNumber::exact_zero(p); terms + 1];
        for n in 1..=terms {
            next[n] = &inv_pow(n, index[j]) * &prefix;
            prefix = &prefix + &level[n];
        }
        level = next;
    }
    let z = z.lift(z.rel_precision().max(prec));
    let mut zn = z.clone();
    let mut acc = PadicNumber::exact_zero(p);
    for (n, c) in level.iter().enumerate().skip(1) {
        if n > 1 {
            zn = &zn * &z;
        }
        acc = &acc + &(c * &zn);
    }
    Ok(acc.reduce_abs(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Coefficient;

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn depth_one_entries() {
        let t = build_li_table(3, 12).unwrap();
        let e1 = t.entry(&w("1")).unwrap();
        let e01 = t.entry(&w("01")).unwrap();
        assert_eq!(e1.log_degree(), 0);
        for n in 1..=12usize {
            let k = n as i64;
            assert_eq!(e1.coefficient(0, n), frac(1, k));
            assert_eq!(e01.coefficient(0, n), frac(1, k * k));
        }
        assert_eq!(t.entry(&w("0")).unwrap(), &LogPolySeries::log_power(12, 1));
        assert_eq!(t.entry(&w("000")).unwrap(), &LogPolySeries::log_power(12, 3));
    }

    #[test]
    fn recursion_holds_formally() {
        let t = build_li_table(4, 15).unwrap();
        assert_eq!(t.check_derivatives(), Ok(()));
    }

    #[test]
    fn table_is_grouplike() {
        let t = build_li_table(4, 10).unwrap();
        let r = t.series().is_grouplike();
        assert!(r.is_zero(), "{r:?}");
    }

    #[test]
    fn integration_inverts_theta() {
        let f = LogPolySeries::from_parts(
            6,
            vec![
                vec![frac(0, 1), frac(2, 3), frac(0, 1), frac(5, 1)],
                vec![frac(1, 2), frac(0, 1), frac(-1, 7)],
                vec![frac(0, 1), frac(0, 1), frac(0, 1), frac(0, 1), frac(3, 1)],
            ],
        );
        assert_eq!(f.integrate_dt_over_t().theta(), f);
    }

    #[test]
    fn transport_is_an_involution() {
        let t = build_li_table(3, 8).unwrap();
        let one = transport(&t);
        assert_eq!(one.chart(), Chart::One);
        assert_eq!(transport(&one), t);
        let ell = LogPolySeries::log_power(8, 1);
        assert_eq!(one.entry(&w("1")).unwrap(), &ell.negated());
        assert_eq!(one.entry(&w("0")).unwrap(), &t.entry(&w("1")).unwrap().negated());
    }

    #[test]
    fn li1_is_minus_log() {
        let p = 7;
        let z = PadicNumber::from_i64(p, 7, 10).unwrap();
        let v = polylog_value(p, &w("1"), &BigRational::from_integer(7.into()), 10).unwrap();
        let one_minus = &PadicNumber::one(p, 10) - &z;
        let expected = one_minus.iwasawa_log().unwrap().neg().reduce_abs(10);
        assert_eq!(v, expected);
    }

    #[test]
    fn dilog_matches_oracle() {
        let p = 5;
        let zq = BigRational::from_integer(5.into());
        let v = polylog_value(p, &w("01"), &zq, 8).unwrap();
        let z = PadicNumber::from_rational(p, &zq, 20).unwrap();
        let o = nested_sum_oracle(&[2], &z, 40, 8).unwrap();
        assert_eq!(v, o);
    }

    #[test]
    fn oracle_rejects_short_sums() {
        let z = PadicNumber::from_i64(7, 7, 10).unwrap();
        assert!(matches!(
            nested_sum_oracle(&[2, 1], &z, 3, 8),
            Err(Error::InsufficientTerms { .. })
        ));
        let z = PadicNumber::from_i64(5, 25, 10).unwrap();
        let o = nested_sum_oracle(&[2], &z, 30, 10).unwrap();
        assert!(o.valuation().unwrap() >= 2);
    }

    #[test]
    fn outside_disc_is_an_error() {
        let t = build_li_table(2, 5).unwrap();
        let z = PadicNumber::from_i64(5, 3, 6).unwrap();
        assert!(matches!(eval_li(&t, &w("1"), &z), Err(Error::Domain(_))));
        let zero = PadicNumber::zero(5, 6);
        assert!(eval_li(&t, &w("0"), &zero).is_err());
        assert!(eval_li(&t, &w("01"), &zero).unwrap().is_zero());
    }

    #[test]
    fn tail_bound_accounts_for_log_dips() {
        // n v - m floor(log_p n) dips at n = p
        assert_eq!(tail_bound(5, 1, 3, 3), 2);
        assert!(tail_bound(5, 1, 3, 30) >= 31 - 6);
        assert_eq!(auto_degree(7, 1, 1, 1), 1);
    }
}
