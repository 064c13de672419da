//! Weight-truncated noncommutative series `S = sum_w S(w) w`.
//!
//! Coefficients are stored densely, indexed by the canonical word order
//! (weight, then lex), so `coeffs[0]` is always the empty-word coefficient.
//! Composition follows function order: `nc_mul(S, T)` is the path `T`
//! followed by the path `S`, with `(S T)(w) = sum over w = ab of S(a) T(b)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::shuffle::{format_word, shuffle, words_up_to, Alphabet, Letter, ShuffleElement, Word};

/// The ring operations series kernels need from a coefficient type.
pub trait Coefficient: Clone + fmt::Debug + PartialEq + Send + Sync {
    /// Additive identity compatible with `self` (same prime, same truncation).
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, q: &BigRational) -> Self;
    fn reciprocal(&self) -> Option<Self>;
    /// Zero, or zero at the tracked precision.
    fn vanishes(&self) -> bool;
    /// Known absolute precision, `None` when exact.
    fn abs_precision(&self) -> Option<i64> {
        None
    }
    fn to_json(&self) -> Value;
    fn render(&self) -> String;
}

impl Coefficient for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, q: &BigRational) -> Self {
        self * q
    }
    fn reciprocal(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn to_json(&self) -> Value {
        json!(self.to_string())
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Coefficient for PadicNumber {
    fn zero_like(&self) -> Self {
        PadicNumber::exact_zero(self.prime())
    }
    fn one_like(&self) -> Self {
        let prec = if self.is_zero() {
            self.absolute_precision().clamp(1, 1 << 16) as u32
        } else {
            self.rel_precision()
        };
        PadicNumber::one(self.prime(), prec)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return self.zero_like();
        }
        if q.is_one() || self.is_exact_zero() {
            return self.clone();
        }
        let prec = self.rel_precision().max(1);
        self * &PadicNumber::from_rational_unchecked(self.prime(), q, prec)
    }
    fn reciprocal(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn abs_precision(&self) -> Option<i64> {
        (!self.is_exact_zero()).then(|| self.absolute_precision())
    }
    fn to_json(&self) -> Value {
        PadicNumber::to_json(self)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Maps words of weight `<= cap` to dense indices in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordIndexer {
    k: usize,
    /// `offsets[m]` is the index of the first word of weight `m`.
    offsets: Vec<usize>,
    pows: Vec<usize>,
}

impl WordIndexer {
    pub fn new(alphabet_len: usize, cap: usize) -> Self {
        let mut offsets = vec![0];
        let mut pows = vec![1];
        for m in 0..=cap {
            offsets.push(offsets[m] + pows[m]);
            pows.push(pows[m] * alphabet_len);
        }
        WordIndexer { k: alphabet_len, offsets, pows }
    }

    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight_range(&self, m: usize) -> std::ops::Range<usize> {
        self.offsets[m]..self.offsets[m + 1]
    }

    pub fn weight(&self, idx: usize) -> usize {
        self.offsets.partition_point(|&o| o <= idx) - 1
    }

    /// Splits word `idx` after its first `j` letters.
    pub fn split(&self, idx: usize, j: usize) -> (usize, usize) {
        let m = self.weight(idx);
        let digits = idx - self.offsets[m];
        let base = self.pows[m - j];
        (self.offsets[j] + digits / base, self.offsets[m - j] + digits % base)
    }

    /// Concatenation, or `None` past the cap.
    pub fn concat(&self, a: usize, b: usize) -> Option<usize> {
        let (ma, mb) = (self.weight(a), self.weight(b));
        let m = ma + mb;
        if m + 1 >= self.offsets.len() {
            return None;
        }
        let da = a - self.offsets[ma];
        let db = b - self.offsets[mb];
        Some(self.offsets[m] + da * self.pows[mb] + db)
    }

    /// Letter positions of the word at `idx`.
    pub fn digits(&self, idx: usize) -> Vec<usize> {
        let m = self.weight(idx);
        let mut d = idx - self.offsets[m];
        let mut out = vec![0; m];
        for slot in out.iter_mut().rev() {
            *slot = d % self.k;
            d /= self.k;
        }
        out
    }

    pub fn from_digits(&self, digits: &[usize]) -> usize {
        let m = digits.len();
        self.offsets[m] + digits.iter().fold(0, |acc, &d| acc * self.k + d)
    }
}

/// Result of the group-likeness check.
#[derive(Clone, Debug, PartialEq)]
pub struct GrouplikeReport {
    pub pairs_checked: usize,
    /// `S(∅) - 1` when it does not vanish.
    pub unit_deviation: Option<String>,
    /// `(u, v, pair(u ш v, S) - S(u) S(v))` for every non-vanishing residual.
    pub failures: Vec<(Word, Word, String)>,
    /// Smallest absolute precision among the residuals (p-adic coefficients).
    pub min_abs_precision: Option<i64>,
}

impl GrouplikeReport {
    pub fn is_zero(&self) -> bool {
        self.unit_deviation.is_none() && self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NCSeries<C> {
    alphabet: Alphabet,
    cap: usize,
    index: WordIndexer,
    coeffs: Vec<C>,
}

impl<C: Coefficient> NCSeries<C> {
    pub fn from_fn(alphabet: &Alphabet, cap: usize, f: impl Fn(&Word) -> C) -> Self {
        let coeffs = words_up_to(alphabet, cap).iter().map(f).collect();
        NCSeries {
            alphabet: alphabet.clone(),
            cap,
            index: WordIndexer::new(alphabet.len(), cap),
            coeffs,
        }
    }

    pub(crate) fn from_vec(alphabet: &Alphabet, cap: usize, coeffs: Vec<C>) -> Self {
        let index = WordIndexer::new(alphabet.len(), cap);
        assert_eq!(coeffs.len(), index.len());
        NCSeries {
            alphabet: alphabet.clone(),
            cap,
            index,
            coeffs,
        }
    }

    /// The unit series `1`.
    pub fn identity(alphabet: &Alphabet, cap: usize, one: C) -> Self {
        let zero = one.zero_like();
        let mut s = Self::from_fn(alphabet, cap, |_| zero.clone());
        s.coeffs[0] = one;
        s
    }

    /// `sum of terms`, all other coefficients zero (including `∅` unless listed).
    pub fn from_terms(alphabet: &Alphabet, cap: usize, zero: C, terms: &[(Word, C)]) -> Result<Self> {
        let mut s = Self::from_fn(alphabet, cap, |_| zero.clone());
        for (w, c) in terms {
            let i = s.index_of(w)?;
            s.coeffs[i] = s.coeffs[i].plus(c);
        }
        Ok(s)
    }

    /// `exp(sum_l a_l l)`: the coefficient of `w` is the product of the
    /// letter weights divided by `|w|!`.
    pub fn exp_linear(alphabet: &Alphabet, cap: usize, one: C, a: &BTreeMap<Letter, C>) -> Self {
        let zero = one.zero_like();
        Self::from_fn(alphabet, cap, |w| {
            let mut c = one.clone();
            for (i, l) in w.letters().iter().enumerate() {
                match a.get(l) {
                    Some(x) => {
                        c = c
                            .times(x)
                            .scaled(&BigRational::new(1.into(), (i as i64 + 1).into()))
                    }
                    None => return zero.clone(),
                }
            }
            c
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weight_cap(&self) -> usize {
        self.cap
    }

    pub fn indexer(&self) -> &WordIndexer {
        &self.index
    }

    pub fn index_of(&self, w: &Word) -> Result<usize> {
        if w.weight() > self.cap {
            return Err(Error::WeightOverflow {
                weight: w.weight(),
                cap: self.cap,
            });
        }
        let mut digits = Vec::with_capacity(w.weight());
        for &l in w.letters() {
            digits.push(self.alphabet.position(l).ok_or(Error::UnknownLetter(l.0))?);
        }
        Ok(self.index.from_digits(&digits))
    }

    pub fn word_at(&self, idx: usize) -> Word {
        Word::new(
            self.index
                .digits(idx)
                .into_iter()
                .map(|d| self.alphabet.letters()[d])
                .collect(),
        )
    }

    pub fn coeff(&self, w: &Word) -> Result<&C> {
        Ok(&self.coeffs[self.index_of(w)?])
    }

    pub fn coeff_at(&self, idx: usize) -> &C {
        &self.coeffs[idx]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set(&mut self, w: &Word, c: C) -> Result<()> {
        let i = self.index_of(w)?;
        self.coeffs[i] = c;
        Ok(())
    }

    /// `(word, coefficient)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Word, &C)> {
        self.coeffs.iter().enumerate().map(|(i, c)| (self.word_at(i), c))
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D + Sync) -> NCSeries<D> {
        NCSeries {
            alphabet: self.alphabet.clone(),
            cap: self.cap,
            index: self.index.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet.ids(), other.alphabet.ids()));
        }
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap, other.cap));
        }
        Ok(())
    }

    pub fn truncate(&self, cap: usize) -> Result<Self> {
        if cap > self.cap {
            return Err(Error::CapMismatch(self.cap, cap));
        }
        let n = WordIndexer::new(self.alphabet.len(), cap).len();
        Ok(Self::from_vec(&self.alphabet, cap, self.coeffs[..n].to_vec()))
    }

    /// Concatenation product truncated at the cap: `T` first, then `self`.
    pub fn nc_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = (0..self.coeffs.len())
            .into_par_iter()
            .map(|idx| {
                let m = self.index.weight(idx);
                let mut acc: Option<C> = None;
                for j in 0..=m {
                    let (a, b) = self.index.split(idx, j);
                    let t = self.coeffs[a].times(&other.coeffs[b]);
                    acc = Some(match acc {
                        None => t,
                        Some(x) => x.plus(&t),
                    });
                }
                acc.unwrap()
            })
            .collect();
        Ok(Self::from_vec(&self.alphabet, self.cap, coeffs))
    }

    /// Two-sided inverse by the geometric series in `1 - S/S(∅)`, evaluated
    /// weight by weight as `T(w) = -S(∅)^-1 sum_{w = ab, a != ∅} S(a) T(b)`.
    pub fn nc_inverse(&self) -> Result<Self> {
        let c_inv = self.coeffs[0].reciprocal().ok_or(Error::NotInvertible)?;
        let zero = c_inv.zero_like();
        let mut out = vec![zero; self.coeffs.len()];
        out[0] = c_inv.clone();
        for m in 1..=self.cap {
            let range = self.index.weight_range(m);
            let start = range.start;
            let block: Vec<C> = range
                .into_par_iter()
                .map(|idx| {
                    let mut acc = c_inv.zero_like();
                    for j in 1..=m {
                        let (a, b) = self.index.split(idx, j);
                        acc = acc.plus(&self.coeffs[a].times(&out[b]));
                    }
                    acc.times(&c_inv).negated()
                })
                .collect();
            out[start..start + block.len()].clone_from_slice(&block);
        }
        Ok(Self::from_vec(&self.alphabet, self.cap, out))
    }

    /// Evaluates the coordinate function `f` on the series.
    pub fn pair(&self, f: &ShuffleElement) -> Result<C> {
        let mut acc = self.coeffs[0].zero_like();
        for (w, q) in f.terms() {
            let c = self.coeff(w)?;
            acc = acc.plus(&c.scaled(q));
        }
        Ok(acc)
    }

    pub fn pair_word(&self, w: &Word) -> Result<C> {
        self.coeff(w).cloned()
    }

    /// Checks `pair(u ш v) = pair(u) pair(v)` for nonempty `u <= v` with
    /// `|u| + |v| <= cap`, and `S(∅) = 1`.
    pub fn is_grouplike(&self) -> GrouplikeReport {
        let words = words_up_to(&self.alphabet, self.cap);
        let one = self.coeffs[0].one_like();
        let dev = self.coeffs[0].minus(&one);
        let unit_deviation = (!dev.vanishes()).then(|| dev.render());
        let mut pairs = Vec::new();
        for u in words.iter().skip(1) {
            for v in words.iter().skip(1) {
                if u <= v && u.weight() + v.weight() <= self.cap {
                    pairs.push((u.clone(), v.clone()));
                }
            }
        }
        let residuals: Vec<(Word, Word, C)> = pairs
            .par_iter()
            .map(|(u, v)| {
                let lhs = self.pair(&shuffle(u, v)).expect("within cap");
                let rhs = self.coeff(u).unwrap().times(self.coeff(v).unwrap());
                (u.clone(), v.clone(), lhs.minus(&rhs))
            })
            .collect();
        let min_abs_precision = residuals.iter().filter_map(|(_, _, r)| r.abs_precision()).min();
        let failures = residuals
            .into_iter()
            .filter(|(_, _, r)| !r.vanishes())
            .map(|(u, v, r)| (u, v, r.render()))
            .collect();
        GrouplikeReport {
            pairs_checked: pairs.len(),
            unit_deviation,
            failures,
            min_abs_precision,
        }
    }

    /// Multiplies `S(w)` by the product of `lambda(l)` over the letters of
    /// `w`; letters missing from `lambda` scale by 1.
    pub fn scale_letters(&self, lambda: &BTreeMap<Letter, C>) -> Self {
        let coeffs = (0..self.coeffs.len())
            .into_par_iter()
            .map(|idx| {
                let mut c = self.coeffs[idx].clone();
                for d in self.index.digits(idx) {
                    if let Some(x) = lambda.get(&self.alphabet.letters()[d]) {
                        c = c.times(x);
                    }
                }
                c
            })
            .collect();
        Self::from_vec(&self.alphabet, self.cap, coeffs)
    }

    /// `S(w) -> (-1)^|w| S(reverse w)`.
    pub fn antipode_series(&self) -> Self {
        let coeffs = (0..self.coeffs.len())
            .map(|idx| {
                let mut d = self.index.digits(idx);
                d.reverse();
                let c = &self.coeffs[self.index.from_digits(&d)];
                if d.len().is_multiple_of(2) {
                    c.clone()
                } else {
                    c.negated()
                }
            })
            .collect();
        Self::from_vec(&self.alphabet, self.cap, coeffs)
    }

    /// True when every coefficient of `self - other` vanishes.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.check_compatible(other).is_ok()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.minus(b).vanishes())
    }

    /// `{"W", "alphabet", "coeffs": {word: value}}`; exact zeros are omitted
    /// except for the empty word.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let exact_zero = c.vanishes() && c.abs_precision().is_none();
            if i == 0 || !exact_zero {
                map.insert(format_word(&self.word_at(i)), c.to_json());
            }
        }
        json!({
            "W": self.cap,
            "alphabet": self.alphabet.ids(),
            "coeffs": Value::Object(map),
        })
    }
}
