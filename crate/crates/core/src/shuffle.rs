//! Words on a puncture alphabet and the shuffle Hopf algebra.
//!
//! Letter `a` stands for the form `dt/(t - a)`; the binary alphabet `{0, 1}`
//! is the default. Words compare by weight first, then lexicographically in
//! the alphabet order (character code order).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub char);

impl Letter {
    pub const E0: Letter = Letter('0');
    pub const E1: Letter = Letter('1');
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered set of at most 16 single-character puncture ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub const MAX_LETTERS: usize = 16;

    pub fn new(ids: &str) -> Result<Self> {
        let mut letters: Vec<Letter> = ids.chars().map(Letter).collect();
        letters.sort();
        let n = letters.len();
        letters.dedup();
        if letters.len() != n {
            return Err(Error::Config(format!("repeated letter in alphabet \"{ids}\"")));
        }
        if letters.is_empty() || letters.len() > Self::MAX_LETTERS {
            return Err(Error::Config(format!(
                "alphabet must have 1..={} letters",
                Self::MAX_LETTERS
            )));
        }
        Ok(Alphabet { letters })
    }

    pub fn binary() -> Self {
        Alphabet {
            letters: vec![Letter::E0, Letter::E1],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn position(&self, l: Letter) -> Option<usize> {
        self.letters.binary_search(&l).ok()
    }

    pub fn contains_word(&self, w: &Word) -> Result<()> {
        for &l in w.letters() {
            if self.position(l).is_none() {
                return Err(Error::UnknownLetter(l.0));
            }
        }
        Ok(())
    }

    pub fn ids(&self) -> String {
        self.letters.iter().map(|l| l.0).collect()
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::binary()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn prefix(&self, i: usize) -> Word {
        Word(self.0[..i].to_vec())
    }

    pub fn suffix(&self, i: usize) -> Word {
        Word(self.0[i..].to_vec())
    }

    /// Applies a letter substitution.
    pub fn map_letters(&self, f: impl Fn(Letter) -> Letter) -> Word {
        Word(self.0.iter().map(|&l| f(l)).collect())
    }
}

impl From<&str> for Word {
    /// Unchecked conversion; use [`parse_word`] to validate against an alphabet.
    fn from(s: &str) -> Self {
        Word(s.chars().map(Letter).collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(self))
    }
}

pub fn format_word(w: &Word) -> String {
    w.0.iter().map(|l| l.0).collect()
}

pub fn parse_word(s: &str, alphabet: &Alphabet) -> Result<Word> {
    let mut letters = Vec::with_capacity(s.len());
    for (position, c) in s.chars().enumerate() {
        if alphabet.position(Letter(c)).is_none() {
            return Err(Error::Syntax {
                position,
                message: format!("'{c}' is not a letter of the alphabet \"{}\"", alphabet.ids()),
            });
        }
        letters.push(Letter(c));
    }
    Ok(Word(letters))
}

/// `(k1, ..., kr) -> e0^(k1-1) e1 ... e0^(kr-1) e1`.
///
/// Without `regularized`, `k1 >= 2` is required (convergent multiple zeta
/// values).
pub fn index_to_word(index: &[u32], regularized: bool) -> Result<Word> {
    if index.is_empty() {
        return Err(Error::InvalidIndex("empty multi-index".into()));
    }
    if let Some(k) = index.iter().find(|&&k| k == 0) {
        return Err(Error::InvalidIndex(format!("entry {k} is not positive")));
    }
    if !regularized && index[0] < 2 {
        return Err(Error::InvalidIndex(
            "first entry must be >= 2 for a convergent value".into(),
        ));
    }
    let mut letters = Vec::new();
    for &k in index {
        letters.extend(std::iter::repeat_n(Letter::E0, k as usize - 1));
        letters.push(Letter::E1);
    }
    Ok(Word(letters))
}

pub fn word_to_index(w: &Word) -> Result<Vec<u32>> {
    if w.last() != Some(Letter::E1) {
        return Err(Error::InvalidIndex(format!("\"{w}\" does not end in e1")));
    }
    let mut out = Vec::new();
    let mut k = 1;
    for &l in w.letters() {
        match l {
            Letter::E0 => k += 1,
            Letter::E1 => {
                out.push(k);
                k = 1;
            }
            Letter(c) => return Err(Error::UnknownLetter(c)),
        }
    }
    Ok(out)
}

pub fn deconcat(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.weight()).map(|i| (w.prefix(i), w.suffix(i))).collect()
}

/// Rational linear combination of words with no zero terms stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShuffleElement {
    terms: BTreeMap<Word, BigRational>,
}

impl ShuffleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        Self::from_term(w, BigRational::one())
    }

    pub fn from_term(w: Word, c: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(Word::weight).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ShuffleElement {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Bilinear extension of [`shuffle`].
    pub fn shuffle(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                let ab = a * b;
                for (w, c) in shuffle(u, v).terms {
                    out.add_term(w, c * &ab);
                }
            }
        }
        out
    }

    /// Sum of coefficients.
    pub fn mass(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| {
                json!({
                    "word": format_word(w),
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        json!({ "terms": terms })
    }
}

impl fmt::Display for ShuffleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "[{w}]")?;
        }
        Ok(())
    }
}

/// Sum over all interleavings of `u` and `v` that keep both internal orders.
pub fn shuffle(u: &Word, v: &Word) -> ShuffleElement {
    let mut counts: BTreeMap<Word, u64> = BTreeMap::new();
    let mut buf = Vec::with_capacity(u.weight() + v.weight());
    interleave(u.letters(), v.letters(), &mut buf, &mut counts);
    ShuffleElement {
        terms: counts
            .into_iter()
            .map(|(w, n)| (w, BigRational::from_integer(BigInt::from(n))))
            .collect(),
    }
}

fn interleave(u: &[Letter], v: &[Letter], buf: &mut Vec<Letter>, out: &mut BTreeMap<Word, u64>) {
    if u.is_empty() || v.is_empty() {
        let mut w = buf.clone();
        w.extend_from_slice(u);
        w.extend_from_slice(v);
        *out.entry(Word(w)).or_insert(0) += 1;
        return;
    }
    buf.push(u[0]);
    interleave(&u[1..], v, buf, out);
    buf.pop();
    buf.push(v[0]);
    interleave(u, &v[1..], buf, out);
    buf.pop();
}

/// Shuffle of two words after checking them against an alphabet.
pub fn shuffle_in(alphabet: &Alphabet, u: &Word, v: &Word) -> Result<ShuffleElement> {
    alphabet.contains_word(u)?;
    alphabet.contains_word(v)?;
    Ok(shuffle(u, v))
}

/// `(-1)^|w|` times the reversed word.
pub fn antipode(w: &Word) -> ShuffleElement {
    let sign = if w.weight().is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    ShuffleElement::from_term(w.reversed(), sign)
}

/// Element of the tensor square, keyed by (left, right) words.
pub type Tensor = BTreeMap<(Word, Word), BigRational>;

fn tensor_add(t: &mut Tensor, key: (Word, Word), c: BigRational) {
    if c.is_zero() {
        return;
    }
    match t.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Deconcatenation coproduct, extended linearly.
pub fn coproduct(x: &ShuffleElement) -> Tensor {
    let mut t = Tensor::new();
    for (w, c) in x.terms() {
        for split in deconcat(w) {
            tensor_add(&mut t, split, c.clone());
        }
    }
    t
}

/// Componentwise shuffle product on the tensor square.
pub fn tensor_shuffle(a: &Tensor, b: &Tensor) -> Tensor {
    let mut t = Tensor::new();
    for ((a1, a2), ca) in a {
        for ((b1, b2), cb) in b {
            let left = shuffle(a1, b1);
            let right = shuffle(a2, b2);
            let c = ca * cb;
            for (l, cl) in left.terms() {
                for (r, cr) in right.terms() {
                    tensor_add(&mut t, (l.clone(), r.clone()), &c * cl * cr);
                }
            }
        }
    }
    t
}

/// `sum over deconcat(w) of antipode(prefix) ш suffix`.
pub fn antipode_convolution(w: &Word) -> ShuffleElement {
    let mut out = ShuffleElement::zero();
    for (a, b) in deconcat(w) {
        out = out.add(&antipode(&a).shuffle(&ShuffleElement::from_word(b)));
    }
    out
}

/// All words of weight exactly `m`, in canonical order.
pub fn words_of_weight(alphabet: &Alphabet, m: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for w in &out {
            for &l in alphabet.letters() {
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out = next;
    }
    out
}

/// All words of weight at most `cap`, in canonical order.
pub fn words_up_to(alphabet: &Alphabet, cap: usize) -> Vec<Word> {
    (0..=cap).flat_map(|m| words_of_weight(alphabet, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle(&Word::empty(), &w("01")), ShuffleElement::from_word(w("01")));
        let s = shuffle(&w("0"), &w("1"));
        assert_eq!(s.coefficient(&w("01")), int(1));
        assert_eq!(s.coefficient(&w("10")), int(1));
        assert_eq!(s.len(), 2);
        let s = shuffle(&w("01"), &w("0"));
        assert_eq!(s.coefficient(&w("001")), int(2));
        assert_eq!(s.coefficient(&w("010")), int(1));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn deconcat_examples() {
        assert_eq!(deconcat(&Word::empty()), vec![(Word::empty(), Word::empty())]);
        assert_eq!(
            deconcat(&w("01")),
            vec![(w(""), w("01")), (w("0"), w("1")), (w("01"), w(""))]
        );
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode(&w("")), ShuffleElement::from_word(w("")));
        assert_eq!(antipode(&w("01")), ShuffleElement::from_word(w("10")));
        assert_eq!(antipode(&w("0")), ShuffleElement::from_term(w("0"), int(-1)));
    }

    #[test]
    fn index_conventions() {
        assert_eq!(index_to_word(&[2], false).unwrap(), w("01"));
        assert_eq!(index_to_word(&[3, 2], false).unwrap(), w("00101"));
        assert!(index_to_word(&[1, 2], false).is_err());
        assert_eq!(index_to_word(&[1, 2], true).unwrap(), w("101"));
        assert!(index_to_word(&[2, 0], true).is_err());
        assert!(index_to_word(&[], true).is_err());
        assert!(word_to_index(&w("10")).is_err());
    }

    #[test]
    fn parse_and_format() {
        let ab = Alphabet::binary();
        assert_eq!(parse_word("01", &ab).unwrap(), w("01"));
        assert_eq!(parse_word("", &ab).unwrap(), Word::empty());
        let ab3 = Alphabet::new("01a").unwrap();
        let word = parse_word("0a1", &ab3).unwrap();
        assert_eq!(word.letters(), &[Letter('0'), Letter('a'), Letter('1')]);
        assert_eq!(format_word(&word), "0a1");
        match parse_word("0x1", &ab) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alphabet_checks() {
        assert!(Alphabet::new("00").is_err());
        assert!(Alphabet::new("").is_err());
        assert_eq!(Alphabet::new("a10").unwrap().ids(), "01a");
        assert_eq!(
            shuffle_in(&Alphabet::binary(), &w("0"), &w("a")),
            Err(Error::UnknownLetter('a'))
        );
    }

    #[test]
    fn word_order_is_weight_then_lex() {
        let mut v = vec![w("10"), w("1"), w(""), w("001"), w("01")];
        v.sort();
        assert_eq!(v, vec![w(""), w("1"), w("01"), w("10"), w("001")]);
    }

    #[test]
    fn element_arithmetic_drops_zero_terms() {
        let a = ShuffleElement::from_word(w("01"));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.to_string(), "[01]");
        let b = shuffle(&w("01"), &w("0"));
        assert_eq!(b.to_string(), "2*[001] + [010]");
        let j = b.to_json();
        assert_eq!(j["terms"][0]["word"], "001");
        assert_eq!(j["terms"][0]["num"], "2");
    }

    #[test]
    fn antipode_identity_small() {
        assert!(antipode_convolution(&w("0110")).is_zero());
        assert_eq!(antipode_convolution(&w("")), ShuffleElement::from_word(w("")));
    }
}
