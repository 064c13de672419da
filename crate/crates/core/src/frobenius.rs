//! The Frobenius-fixed path from `1` at `0` to `-1` at `1`, p-adic iterated
//! integrals, and the two period maps.
//!
//! # Solver
//!
//! Write `G(t) = H0(t) exp(e0 log t)` for the fundamental solution at `1₀`
//! and `H1 = swap(H0)` (with signs) for the local solution at `-1₁` in the
//! coordinate `s = 1 - t`. Frobenius acts on the fibre at `1₀` by
//! `φ(e0) = e0/p`, `φ(e1) = X⁻¹ (e1/p) X`, where `X = Φ φ(Φ)⁻¹`.
//!
//! The gauge `F(t) = G(t) φ(G(t^p))⁻¹` is overconvergent and analytic at
//! infinity, so it is a power series in `x = 1/(1-t)`. It solves, word by word,
//!
//! ```text
//! x F'_w = [w = e0 v] F_v/(x-1) - [w = a e0] F_a/(x-1) + [w = e1 v] F_v
//!          - sum_{w = ab, b ≠ ∅} F_a E1_b R(x),      F_w(1) = 0,
//! ```
//!
//! with `E1 = X⁻¹ e1 X`, `R = (x-1)^(p-1)/P`, `P = x^p - (x-1)^p`. Near
//! `x = ∞` the same gauge equals `H1(s) exp(e1 log P/p) X φ(H1(u))⁻¹` with
//! `s = 1/x` and `u = 1 - t^p`, so `X` is the constant coefficient of
//! `exp(-e1 log P/p) H1(s)⁻¹ F φ(H1(u))`. The weight-`m` part of that
//! constant only involves `X` below weight `m`, which makes the whole
//! computation triangular. Finally `Φ = X φ(Φ)` is solved weight by weight,
//! where it reads `(1 - p^-m) Φ_m = (X φ(Φ_{<m}))_m`.
//!
//! Every coefficient of `F` decays like `p^(-n/(p-1))`, so truncating all
//! series at order `D ≈ (p-1)(N + slack)` loses nothing at precision `N`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kz::{self, build_li_table, eval_table, LiTable};
use crate::padic::{check_prime, floor_log, parse_rational, PadicNumber};
use crate::series::{NCSeries, WordIndexer};
use crate::shuffle::{format_word, Alphabet, Letter, ShuffleElement, Word};

pub const DEFAULT_P: u64 = 7;
pub const DEFAULT_N: u32 = 10;
pub const DEFAULT_W: usize = 4;

/// A basepoint on the thrice-punctured line.
#[derive(Clone, Debug, PartialEq)]
pub enum Basepoint {
    /// Tangent vector `1` at `0`.
    TangentZero,
    /// Tangent vector `-1` at `1`.
    TangentOne,
    Point(PadicNumber),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Disc {
    Zero,
    One,
}

impl Basepoint {
    pub fn disc(&self) -> Result<Disc> {
        match self {
            Basepoint::TangentZero => Ok(Disc::Zero),
            Basepoint::TangentOne => Ok(Disc::One),
            Basepoint::Point(z) => {
                if z.is_zero_mod(1) {
                    return Ok(Disc::Zero);
                }
                let one_minus = &PadicNumber::one(z.prime(), z.rel_precision().max(1)) - z;
                if one_minus.is_zero_mod(1) {
                    Ok(Disc::One)
                } else {
                    Err(Error::UnsupportedGeometry(format!(
                        "{z} lies in neither the residue disc of 0 nor that of 1"
                    )))
                }
            }
        }
    }

    /// `tan0`, `tan1`, or a rational `a/b`, read at `prec` significant digits.
    pub fn parse(s: &str, p: u64, prec: u32) -> Result<Self> {
        match s.trim() {
            "tan0" => Ok(Basepoint::TangentZero),
            "tan1" => Ok(Basepoint::TangentOne),
            other => {
                let q = parse_rational(other)?;
                Ok(Basepoint::Point(point_from_rational(p, &q, prec)?))
            }
        }
    }
}

impl fmt::Display for Basepoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basepoint::TangentZero => write!(f, "1_0"),
            Basepoint::TangentOne => write!(f, "-1_1"),
            Basepoint::Point(z) => write!(f, "{}", z.to_rational()),
        }
    }
}

/// A rational point at `prec` digits; `0` becomes exact-looking `O(p^prec)`.
pub fn point_from_rational(p: u64, q: &BigRational, prec: u32) -> Result<PadicNumber> {
    PadicNumber::from_rational(p, q, prec)
}

/// Run metadata for reproducibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub p: u64,
    pub n: u32,
    pub w: usize,
    pub d: usize,
    /// Relative working precision of the final attempt.
    pub working_precision: u32,
    pub attempts: u32,
    pub stages: usize,
    pub checks: Vec<String>,
}

impl Manifest {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "N": self.n,
            "W": self.w,
            "D": self.d,
            "working_precision": self.working_precision,
            "attempts": self.attempts,
            "stages": self.stages,
            "checks": self.checks,
        })
    }
}

/// The Frobenius-fixed path series; coefficients are p-adic multiple zeta
/// values known mod `p^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Associator {
    series: NCSeries<PadicNumber>,
    manifest: Manifest,
}

impl Associator {
    pub fn prime(&self) -> u64 {
        self.manifest.p
    }
    pub fn precision(&self) -> u32 {
        self.manifest.n
    }
    pub fn weight_cap(&self) -> usize {
        self.manifest.w
    }
    pub fn degree(&self) -> usize {
        self.manifest.d
    }
    pub fn series(&self) -> &NCSeries<PadicNumber> {
        &self.series
    }
    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverOptions {
    /// Series truncation order; chosen from the decay bound when `None`.
    pub degree: Option<usize>,
    /// Initial relative working precision; escalated when short.
    pub working_precision: Option<u32>,
    /// Visit words of each weight in reverse order (determinism checks).
    pub reverse_word_order: bool,
}

/// Truncation order used when none is given.
pub fn auto_solver_degree(p: u64, n: u32, w: usize) -> usize {
    let pm1 = (p - 1) as usize;
    let mut d = pm1 * (n as usize + 4);
    // coefficient n of F has valuation about n/(p-1) - w log_p n
    loop {
        let slack = 2 + w * (floor_log(p, d as u64) as usize + 1);
        let next = pm1 * (n as usize + slack);
        if next <= d {
            return d;
        }
        d = next;
    }
}

fn default_working_precision(p: u64, n: u32, w: usize, d: usize) -> u32 {
    n + 6 + w as u32 * (4 + floor_log(p, d as u64))
}

/// Computes the associator at precision `N` and weight cap `W`.
pub fn compute_associator(p: u64, n: u32, w: usize, d: Option<usize>) -> Result<Associator> {
    compute_associator_with(
        p,
        n,
        w,
        &SolverOptions {
            degree: d,
            ..SolverOptions::default()
        },
    )
}

pub fn compute_associator_with(p: u64, n: u32, w: usize, opts: &SolverOptions) -> Result<Associator> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidPrecision);
    }
    if w < 2 {
        return Err(Error::Config("weight cap W must be at least 2".into()));
    }
    if w > kz::MAX_TABLE_WEIGHT {
        return Err(Error::WeightOverflow {
            weight: w,
            cap: kz::MAX_TABLE_WEIGHT,
        });
    }
    let mut d = opts.degree.unwrap_or_else(|| auto_solver_degree(p, n, w));
    if d < p as usize {
        return Err(Error::Config(format!("degree cap D must be at least p = {p}")));
    }
    let mut k = opts
        .working_precision
        .unwrap_or_else(|| default_working_precision(p, n, w, d));
    let mut attempts = 0;
    let mut last_err = None;
    while attempts < 6 {
        attempts += 1;
        let table = build_li_table(w, d)?;
        let solver = Solver::new(p, w, d, k, &table, opts.reverse_word_order);
        let out = solver.run();
        match out.validate(n) {
            Ok(checks) => {
                let series = NCSeries::from_vec(
                    &Alphabet::binary(),
                    w,
                    out.phi.iter().map(|c| c.reduce_abs(n as i64)).collect(),
                );
                return Ok(Associator {
                    series,
                    manifest: Manifest {
                        p,
                        n,
                        w,
                        d,
                        working_precision: k,
                        attempts,
                        stages: w,
                        checks,
                    },
                });
            }
            Err(Shortfall::Precision(e)) => {
                k += n.max(8);
                last_err = Some(e);
            }
            Err(Shortfall::Truncation(e)) if opts.degree.is_none() => {
                d += d / 2;
                last_err = Some(e);
            }
            Err(Shortfall::Truncation(e)) | Err(Shortfall::Fatal(e)) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::PrecisionUnderflow("solver did not converge".into())))
}

enum Shortfall {
    Precision(Error),
    Truncation(Error),
    Fatal(Error),
}

type Ser = Vec<PadicNumber>;

/// `sum_{i+j=k} a_i b_j` for `k <= n`, skipping exact zeros.
fn smul(a: &[PadicNumber], b: &[PadicNumber], n: usize, zero: &PadicNumber) -> Ser {
    let mut r = vec![zero.clone(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_exact_zero() {
                r[i + j] = &r[i + j] + &(x * y);
            }
        }
    }
    r
}

fn sinv(a: &[PadicNumber], n: usize, zero: &PadicNumber) -> Ser {
    let mut r = vec![zero.clone(); n + 1];
    r[0] = a[0].inverse().expect("unit constant term");
    for k in 1..=n {
        let mut acc = zero.clone();
        for i in 1..=k.min(a.len() - 1) {
            acc = &acc + &(&a[i] * &r[k - i]);
        }
        r[k] = (&acc * &r[0]).neg();
    }
    r
}

fn saxpy(acc: &mut [PadicNumber], c: &PadicNumber, x: &[PadicNumber]) {
    if c.is_exact_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_exact_zero() {
            *a = &*a + &(c * b);
        }
    }
}

/// `sum_n c_n z^n`.
fn horner(c: &[PadicNumber], z: &PadicNumber, zero: &PadicNumber) -> PadicNumber {
    c.iter().rev().fold(zero.clone(), |acc, x| &(&acc * z) + x)
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

struct Solver {
    p: u64,
    w: usize,
    d: usize,
    k: u32,
    ix: WordIndexer,
    reverse: bool,
    zero: PadicNumber,
    one: PadicNumber,
    /// `ℓ^0` part of `Li_w` as a power series, per word.
    h0: Vec<Ser>,
}

struct SolverOutput {
    p: u64,
    w: usize,
    k: u32,
    ix: WordIndexer,
    phi: Vec<PadicNumber>,
    x: Vec<PadicNumber>,
    /// `phiw[w]` is `φ(w)` as a dense coefficient vector.
    phiw: Vec<Vec<PadicNumber>>,
    f: Vec<Ser>,
    residues: Vec<(usize, PadicNumber)>,
    h0: Vec<Ser>,
}

impl Solver {
    fn new(p: u64, w: usize, d: usize, k: u32, table: &LiTable, reverse: bool) -> Self {
        let ix = WordIndexer::new(2, w);
        let zero = PadicNumber::exact_zero(p);
        let h0 = (0..ix.len())
            .into_par_iter()
            .map(|i| {
                let entry = table.series().coeff_at(i);
                let part = entry.part(0).expect("part 0 exists");
                part.iter()
                    .map(|c| PadicNumber::from_rational_unchecked(p, c, k))
                    .collect()
            })
            .collect();
        Solver {
            p,
            w,
            d,
            k,
            ix,
            reverse,
            zero,
            one: PadicNumber::one(p, k),
            h0,
        }
    }

    fn q(&self, r: BigRational) -> PadicNumber {
        PadicNumber::from_rational_unchecked(self.p, &r, self.k)
    }

    fn int(&self, n: BigInt) -> PadicNumber {
        self.q(BigRational::from_integer(n))
    }

    /// Word indices of weight `m` in the requested visiting order.
    fn words(&self, m: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.ix.weight_range(m).collect();
        if self.reverse {
            v.reverse();
        }
        v
    }

    fn swap_index(&self, idx: usize) -> usize {
        let d: Vec<usize> = self.ix.digits(idx).into_iter().map(|x| 1 - x).collect();
        self.ix.from_digits(&d)
    }

    fn reverse_index(&self, idx: usize) -> usize {
        let mut d = self.ix.digits(idx);
        d.reverse();
        self.ix.from_digits(&d)
    }

    fn sign(&self, idx: usize) -> bool {
        self.ix.weight(idx) % 2 == 1
    }

    fn nc_vec_mul(&self, a: &[PadicNumber], b: &[PadicNumber]) -> Vec<PadicNumber> {
        let alphabet = Alphabet::binary();
        let sa = NCSeries::from_vec(&alphabet, self.w, a.to_vec());
        let sb = NCSeries::from_vec(&alphabet, self.w, b.to_vec());
        sa.nc_mul(&sb).expect("same shape").coeffs().to_vec()
    }

    fn run(&self) -> SolverOutput {
        let (p, d, w) = (self.p, self.d, self.w);
        let zero = &self.zero;
        let n_words = self.ix.len();
        let pinv = self.q(BigRational::new(1.into(), p.into()));

        // P(x) = x^p - (x-1)^p, degree p-1, P(0) = 1
        let ppoly: Ser = (0..p)
            .map(|j| {
                let c = binom(p, j);
                let sign_neg = (p - j) % 2 == 0;
                self.int(if sign_neg { -c } else { c })
            })
            .collect();
        let pinv_ser = sinv(&ppoly, d, zero);
        let xm1: Ser = (0..p)
            .map(|j| {
                let c = binom(p - 1, j);
                self.int(if (p - 1 - j) % 2 == 1 { -c } else { c })
            })
            .collect();
        let r_ser = smul(&xm1, &pinv_ser, d, zero);
        // log P = ∫ P'/P
        let dp: Ser = (1..p as usize)
            .map(|j| &ppoly[j] * &self.int(BigInt::from(j)))
            .collect();
        let dlog = smul(&dp, &pinv_ser, d, zero);
        let mut logp = vec![zero.clone(); d + 1];
        for n in 1..=d {
            logp[n] = &dlog[n - 1] * &self.q(BigRational::new(1.into(), n.into()));
        }
        // a_k = (-log P / p)^k / k!
        let neg_lp: Ser = logp.iter().map(|c| (c * &pinv).neg()).collect();
        let mut a_pow = vec![{
            let mut v = vec![zero.clone(); d + 1];
            v[0] = self.one.clone();
            v
        }];
        for kk in 1..=w {
            let prev = smul(&a_pow[kk - 1], &neg_lp, d, zero);
            let inv_k = self.q(BigRational::new(1.into(), (kk as i64).into()));
            a_pow.push(prev.iter().map(|c| c * &inv_k).collect());
        }

        // u = 1 - (1 - y)^p as a series in y = 1/x, and its powers
        let mut u: Ser = vec![zero.clone(); d + 1];
        for j in 1..=p.min(d as u64) {
            let c = binom(p, j);
            u[j as usize] = self.int(if j % 2 == 1 { c } else { -c });
        }
        let mut upow: Vec<Ser> = Vec::with_capacity(d + 1);
        let mut cur = vec![zero.clone(); d + 1];
        cur[0] = self.one.clone();
        for _ in 0..=d {
            let next = smul(&cur, &u, d, zero);
            upow.push(cur);
            cur = next;
        }
        // H0_w(u) per word, then H1 and its antipode B in y
        let h0u: Vec<Ser> = (0..n_words)
            .into_par_iter()
            .map(|i| {
                let mut acc = vec![zero.clone(); d + 1];
                for (n, h) in self.h0[i].iter().enumerate() {
                    saxpy(&mut acc, h, &upow[n]);
                }
                acc
            })
            .collect();
        let signed = |s: &Ser, neg: bool| -> Ser {
            if neg {
                s.iter().map(|c| c.neg()).collect()
            } else {
                s.clone()
            }
        };
        let h1y: Vec<Ser> = (0..n_words)
            .map(|i| signed(&self.h0[self.swap_index(i)], self.sign(i)))
            .collect();
        let h1u: Vec<Ser> = (0..n_words)
            .map(|i| signed(&h0u[self.swap_index(i)], self.sign(i)))
            .collect();
        let b_ser: Vec<Ser> = (0..n_words)
            .map(|i| signed(&h1y[self.reverse_index(i)], self.sign(i)))
            .collect();

        let mut x = vec![zero.clone(); n_words];
        x[0] = self.one.clone();
        let mut f: Vec<Ser> = vec![Vec::new(); n_words];
        let mut fr: Vec<Ser> = vec![Vec::new(); n_words];
        f[0] = {
            let mut v = vec![zero.clone(); d + 1];
            v[0] = self.one.clone();
            v
        };
        fr[0] = r_ser.clone();
        let mut c_ser: Vec<Ser> = vec![Vec::new(); n_words];
        c_ser[0] = f[0].clone();
        // Laurent U_v on exponents [-d, d], stored at offset d
        let mut u_ser: Vec<Ser> = vec![Vec::new(); n_words];
        u_ser[0] = {
            let mut v = vec![zero.clone(); 2 * d + 1];
            v[d] = self.one.clone();
            v
        };
        let mut v_ser: Vec<Ser> = vec![Vec::new(); n_words];
        v_ser[0] = f[0].clone();
        let mut residues = Vec::new();
        let mut phiw: Vec<Vec<PadicNumber>> = Vec::new();

        for m in 1..=w {
            let xs = NCSeries::from_vec(&Alphabet::binary(), w, x.clone());
            let xinv = xs.nc_inverse().expect("unit constant term").coeffs().to_vec();
            // E1 = X^-1 e1 X
            let e1: Vec<PadicNumber> = (0..n_words)
                .map(|idx| {
                    let mut acc = zero.clone();
                    if idx == 0 || self.ix.weight(idx) > m {
                        return acc;
                    }
                    let digits = self.ix.digits(idx);
                    for (i, &l) in digits.iter().enumerate() {
                        if l == 1 {
                            let a = self.ix.from_digits(&digits[..i]);
                            let b = self.ix.from_digits(&digits[i + 1..]);
                            acc = &acc + &(&xinv[a] * &x[b]);
                        }
                    }
                    acc
                })
                .collect();
            // φ on words: e0 -> e0/p, e1 -> E1/p
            let mut img0 = vec![zero.clone(); n_words];
            img0[self.ix.from_digits(&[0])] = pinv.clone();
            let img1: Vec<PadicNumber> = e1.iter().map(|c| c * &pinv).collect();
            phiw = vec![Vec::new(); n_words];
            phiw[0] = {
                let mut v = vec![zero.clone(); n_words];
                v[0] = self.one.clone();
                v
            };
            for idx in 1..self.ix.weight_range(m).end {
                let digits = self.ix.digits(idx);
                let head = self.ix.from_digits(&digits[..digits.len() - 1]);
                let img = if digits[digits.len() - 1] == 0 { &img0 } else { &img1 };
                phiw[idx] = self.nc_vec_mul(&phiw[head], img);
            }

            // gauge F at weight m
            let words = self.words(m);
            let stage: Vec<(usize, Ser, PadicNumber)> = words
                .par_iter()
                .map(|&idx| {
                    let digits = self.ix.digits(idx);
                    let mut s = vec![zero.clone(); d + 1];
                    if digits[0] == 0 {
                        let v = self.ix.from_digits(&digits[1..]);
                        s = s.iter().zip(&f[v]).map(|(a, b)| a + b).collect();
                    }
                    if *digits.last().unwrap() == 0 {
                        let v = self.ix.from_digits(&digits[..digits.len() - 1]);
                        s = s.iter().zip(&f[v]).map(|(a, b)| a - b).collect();
                    }
                    // s/(x-1) = -(prefix sums of s)
                    let mut rr = Vec::with_capacity(d + 1);
                    let mut cs = zero.clone();
                    for c in &s {
                        cs = &cs + c;
                        rr.push(cs.neg());
                    }
                    if digits[0] == 1 {
                        let v = self.ix.from_digits(&digits[1..]);
                        for (a, b) in rr.iter_mut().zip(&f[v]) {
                            *a = &*a + b;
                        }
                    }
                    for i in 0..digits.len() {
                        let a = self.ix.from_digits(&digits[..i]);
                        let b = self.ix.from_digits(&digits[i..]);
                        saxpy(&mut rr, &e1[b].neg(), &fr[a]);
                    }
                    let residue = rr[0].clone();
                    let mut fw = vec![zero.clone(); d + 1];
                    let mut total = zero.clone();
                    for n in 1..=d {
                        fw[n] = &rr[n] * &self.q(BigRational::new(1.into(), (n as i64).into()));
                        total = &total + &fw[n];
                    }
                    fw[0] = total.neg();
                    (idx, fw, residue)
                })
                .collect();
            for (idx, fw, residue) in stage {
                fr[idx] = smul(&fw, &r_ser, d, zero);
                f[idx] = fw;
                residues.push((idx, residue));
            }

            // C_d = sum_w φ(w)_d H1_w(u) for |d| = m
            let cs: Vec<(usize, Ser)> = words
                .par_iter()
                .map(|&idx| {
                    let mut acc = vec![zero.clone(); d + 1];
                    for (wi, img) in phiw.iter().enumerate() {
                        if img.is_empty() {
                            continue;
                        }
                        saxpy(&mut acc, &img[idx], &h1u[wi]);
                    }
                    (idx, acc)
                })
                .collect();
            for (idx, s) in cs {
                c_ser[idx] = s;
            }

            // U_v = sum_{v = bc} B_b F_c (Laurent), V_v = sum_{v = e1^k c} A_k U_c (x^j, j >= 0)
            let us: Vec<(usize, Ser)> = words
                .par_iter()
                .map(|&idx| {
                    let mut acc = vec![zero.clone(); 2 * d + 1];
                    for j in 0..=m {
                        let (b, c) = self.ix.split(idx, j);
                        for (i, bi) in b_ser[b].iter().enumerate() {
                            if bi.is_exact_zero() {
                                continue;
                            }
                            for (kk, fk) in f[c].iter().enumerate() {
                                if !fk.is_exact_zero() {
                                    let e = d + kk - i;
                                    acc[e] = &acc[e] + &(bi * fk);
                                }
                            }
                        }
                    }
                    (idx, acc)
                })
                .collect();
            for (idx, s) in us {
                u_ser[idx] = s;
            }
            let vs: Vec<(usize, Ser)> = words
                .par_iter()
                .map(|&idx| {
                    let digits = self.ix.digits(idx);
                    let lead = digits.iter().take_while(|&&l| l == 1).count();
                    let mut acc = vec![zero.clone(); d + 1];
                    for kk in 0..=lead {
                        let c = self.ix.from_digits(&digits[kk..]);
                        for (i, ai) in a_pow[kk].iter().enumerate() {
                            if ai.is_exact_zero() {
                                continue;
                            }
                            for (j, slot) in acc.iter_mut().enumerate() {
                                let uc = &u_ser[c][d + j - i];
                                if !uc.is_exact_zero() {
                                    *slot = &*slot + &(ai * uc);
                                }
                            }
                        }
                    }
                    (idx, acc)
                })
                .collect();
            for (idx, s) in vs {
                v_ser[idx] = s;
            }
            // X_w = [x^0] sum_{w = vd} V_v C_d
            let xs_new: Vec<(usize, PadicNumber)> = words
                .par_iter()
                .map(|&idx| {
                    let mut acc = zero.clone();
                    for j in 0..=m {
                        let (v, dd) = self.ix.split(idx, j);
                        for (a, b) in v_ser[v].iter().zip(&c_ser[dd]) {
                            if !a.is_exact_zero() && !b.is_exact_zero() {
                                acc = &acc + &(a * b);
                            }
                        }
                    }
                    (idx, acc)
                })
                .collect();
            for (idx, c) in xs_new {
                x[idx] = c;
            }
        }

        // Φ = X φ(Φ), weight by weight
        let mut phi = vec![zero.clone(); n_words];
        phi[0] = self.one.clone();
        for m in 1..=w {
            let mut ph = vec![zero.clone(); n_words];
            for (wi, c) in phi.iter().enumerate() {
                if !c.is_exact_zero() {
                    saxpy(&mut ph, c, &phiw[wi]);
                }
            }
            let t = self.nc_vec_mul(&x, &ph);
            let pm = BigInt::from(p).pow(m as u32);
            let denom = self.q(BigRational::new(&pm - 1, pm));
            for idx in self.ix.weight_range(m) {
                phi[idx] = &t[idx] / &denom;
            }
        }

        SolverOutput {
            p,
            w,
            k: self.k,
            ix: self.ix.clone(),
            phi,
            x,
            phiw,
            f,
            residues,
            h0: self.h0.clone(),
        }
    }
}

impl SolverOutput {
    fn fail(&self, weight: usize, message: String) -> Shortfall {
        Shortfall::Fatal(Error::SolverFailure { weight, message })
    }

    /// The validation battery; every failed check is an error.
    fn validate(&self, n: u32) -> std::result::Result<Vec<String>, Shortfall> {
        let target = n as i64;
        let mut checks = Vec::new();
        let alphabet = Alphabet::binary();
        let word = |idx: usize| -> String {
            self.ix
                .digits(idx)
                .into_iter()
                .map(|d| if d == 0 { '0' } else { '1' })
                .collect()
        };

        let short = self
            .phi
            .iter()
            .enumerate()
            .filter(|(_, c)| c.absolute_precision() < target)
            .map(|(i, _)| i)
            .next();
        if let Some(i) = short {
            return Err(Shortfall::Precision(Error::PrecisionUnderflow(format!(
                "coefficient of \"{}\" known only mod p^{} at working precision {}",
                word(i),
                self.phi[i].absolute_precision(),
                self.k
            ))));
        }

        for (idx, r) in &self.residues {
            if !r.is_zero_mod(target) {
                return Err(Shortfall::Truncation(Error::SolverFailure {
                    weight: self.ix.weight(*idx),
                    message: format!("gauge residue for \"{}\" is {r}", word(*idx)),
                }));
            }
        }
        checks.push("gauge residues vanish".to_string());

        for m in 1..=2.min(self.w) {
            for idx in self.ix.weight_range(m) {
                if !self.phi[idx].is_zero_mod(target) {
                    return Err(self.fail(
                        m,
                        format!("coefficient of \"{}\" is {} instead of 0", word(idx), self.phi[idx]),
                    ));
                }
            }
        }
        checks.push("weight 1 and 2 vanish".to_string());

        let reduced: Vec<PadicNumber> = self.phi.iter().map(|c| c.reduce_abs(target)).collect();
        let series = NCSeries::from_vec(&alphabet, self.w, reduced);
        let report = series.is_grouplike();
        if !report.is_zero() {
            let (u, v, r) = &report.failures[0];
            return Err(self.fail(
                u.weight() + v.weight(),
                format!("not group-like at ({u}, {v}): residual {r}"),
            ));
        }
        checks.push("group-like".to_string());

        // Φ = X φ(Φ)
        let n_words = self.ix.len();
        let zero = PadicNumber::exact_zero(self.p);
        let mut ph = vec![zero.clone(); n_words];
        for (wi, c) in self.phi.iter().enumerate() {
            saxpy(&mut ph, c, &self.phiw[wi]);
        }
        let xs = NCSeries::from_vec(&alphabet, self.w, self.x.clone());
        let rhs = xs
            .nc_mul(&NCSeries::from_vec(&alphabet, self.w, ph))
            .expect("same shape");
        for idx in 0..n_words {
            let diff = &self.phi[idx] - rhs.coeff_at(idx);
            if !diff.is_zero_mod(target) {
                return Err(self.fail(
                    self.ix.weight(idx),
                    format!("fixed-point residual at \"{}\" is {diff}", word(idx)),
                ));
            }
        }
        checks.push("Frobenius fixed point".to_string());

        self.check_gauge_at_p(target)?;
        checks.push("gauge matches the disc of 0 at t = p".to_string());
        Ok(checks)
    }

    /// Compares `F(1/(1-p))` with `G(p) φ(G(p^p))⁻¹`, where `G = H0` at these
    /// points because `log p = 0`.
    fn check_gauge_at_p(&self, target: i64) -> std::result::Result<(), Shortfall> {
        let p = self.p;
        let alphabet = Alphabet::binary();
        let zero = PadicNumber::exact_zero(p);
        let t = PadicNumber::from_i64(p, p as i64, self.k).unwrap();
        let tp = t.pow(p);
        let x0 = PadicNumber::one(p, self.k)
            .checked_div(&(&PadicNumber::one(p, self.k) - &t))
            .unwrap();
        let g_at = |z: &PadicNumber| -> NCSeries<PadicNumber> {
            NCSeries::from_vec(
                &alphabet,
                self.w,
                self.h0.iter().map(|h| horner(h, z, &zero)).collect(),
            )
        };
        let g = g_at(&t);
        let gp = g_at(&tp);
        let mut ph = vec![zero.clone(); self.ix.len()];
        for (wi, c) in gp.coeffs().iter().enumerate() {
            saxpy(&mut ph, c, &self.phiw[wi]);
        }
        let ph = NCSeries::from_vec(&alphabet, self.w, ph);
        let expected = g
            .nc_mul(&ph.nc_inverse().expect("unit constant term"))
            .expect("same shape");
        for idx in 0..self.ix.len() {
            let value = horner(&self.f[idx], &x0, &zero);
            let diff = &value - expected.coeff_at(idx);
            if !diff.is_zero_mod(target) {
                return Err(Shortfall::Truncation(Error::SolverFailure {
                    weight: self.ix.weight(idx),
                    message: format!("gauge disagrees with the disc of 0 by {diff}"),
                }));
            }
        }
        Ok(())
    }
}

/// `ζ_p(w)` for a word or converted multi-index.
pub fn pmzv(w: &Word, assoc: &Associator) -> Result<PadicNumber> {
    assoc.series.pair_word(w)
}

pub fn pmzv_index(index: &[u32], assoc: &Associator) -> Result<PadicNumber> {
    pmzv(&crate::shuffle::index_to_word(index, true)?, assoc)
}

/// How a path series was assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Frobenius-fixed path, `1₀ -> -1₁`.
    Af,
    /// Period loop through the Hodge trivialization.
    Cl,
    /// Within the disc of 0, from `1₀`.
    Disc0,
    /// Into the disc of 1 through the associator.
    Disc1,
    SameDisc,
}

impl Route {
    pub fn label(&self) -> &'static str {
        match self {
            Route::Af => "af",
            Route::Cl => "cl",
            Route::Disc0 => "disc0",
            Route::Disc1 => "disc1",
            Route::SameDisc => "samedisc",
        }
    }
}

/// The associator together with local solution tables at both discs.
#[derive(Clone, Debug)]
pub struct PeriodContext {
    pub assoc: Associator,
    pub table0: LiTable,
    pub table1: LiTable,
}

impl PeriodContext {
    /// Builds tables whose tail bound at points of valuation 1 reaches `N`.
    pub fn new(assoc: Associator) -> Result<Self> {
        let p = assoc.prime();
        let d = kz::auto_degree(p, 1, assoc.weight_cap(), assoc.precision() as i64);
        let table0 = build_li_table(assoc.weight_cap(), d)?;
        let table1 = kz::transport(&table0);
        Ok(PeriodContext { assoc, table0, table1 })
    }

    pub fn build(p: u64, n: u32, w: usize, d: Option<usize>) -> Result<Self> {
        Self::new(compute_associator(p, n, w, d)?)
    }

    fn p(&self) -> u64 {
        self.assoc.prime()
    }

    fn unit(&self) -> NCSeries<PadicNumber> {
        NCSeries::identity(
            &Alphabet::binary(),
            self.assoc.weight_cap(),
            PadicNumber::one(self.p(), self.assoc.precision()),
        )
    }

    /// Digits a point needs so that local solutions reach precision `N`.
    pub fn point_precision(&self) -> u32 {
        let n = self.assoc.precision();
        let d = self.table0.degree() as u64;
        n + 4 + self.assoc.weight_cap() as u32 * (floor_log(self.p(), d) + 1)
    }

    /// Local solution at a basepoint, relative to its disc's tangential base.
    fn local(&self, b: &Basepoint) -> Result<NCSeries<PadicNumber>> {
        match b {
            Basepoint::TangentZero | Basepoint::TangentOne => Ok(self.unit()),
            Basepoint::Point(z) => {
                if z.prime() != self.p() {
                    return Err(Error::PrimeMismatch(self.p(), z.prime()));
                }
                match b.disc()? {
                    Disc::Zero => eval_table(&self.table0, z),
                    Disc::One => {
                        let s = &PadicNumber::one(z.prime(), z.rel_precision().max(1)) - z;
                        eval_table(&self.table1, &s)
                    }
                }
            }
        }
    }

    /// The path series from `b` to `c` and the route used.
    pub fn path_series(&self, b: &Basepoint, c: &Basepoint) -> Result<(NCSeries<PadicNumber>, Route)> {
        let (db, dc) = (b.disc()?, c.disc()?);
        let phi = self.assoc.series();
        match (b, c) {
            (Basepoint::TangentZero, Basepoint::TangentOne) => Ok((phi.clone(), Route::Af)),
            (Basepoint::TangentZero, _) if dc == Disc::Zero => Ok((self.local(c)?, Route::Disc0)),
            (Basepoint::TangentZero, _) if dc == Disc::One => {
                Ok((self.local(c)?.nc_mul(phi)?, Route::Disc1))
            }
            _ if db == dc => {
                let fc = self.local(c)?;
                let fb = self.local(b)?;
                Ok((fc.nc_mul(&fb.nc_inverse()?)?, Route::SameDisc))
            }
            _ => Err(Error::UnsupportedGeometry(format!(
                "no supported route from {b} to {c}"
            ))),
        }
    }

    fn finish(&self, v: PadicNumber) -> PadicNumber {
        v.reduce_abs(self.assoc.precision() as i64)
    }
}

/// `∫_b^c w`, the p-adic iterated integral along the Frobenius-compatible path.
pub fn coleman_iterint(b: &Basepoint, c: &Basepoint, w: &Word, ctx: &PeriodContext) -> Result<(PadicNumber, Route)> {
    let (series, route) = ctx.path_series(b, c)?;
    Ok((ctx.finish(series.pair_word(w)?), route))
}

/// The motivic matrix-entry symbol `I_b^c(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalPeriod {
    pub lower: Basepoint,
    pub upper: Basepoint,
    pub functional: ShuffleElement,
}

impl FormalPeriod {
    pub fn new(lower: Basepoint, upper: Basepoint, functional: ShuffleElement) -> Self {
        FormalPeriod { lower, upper, functional }
    }

    pub fn word(lower: Basepoint, upper: Basepoint, w: Word) -> Self {
        Self::new(lower, upper, ShuffleElement::from_word(w))
    }

    pub fn name(&self) -> String {
        format!("I_{{{}}}^{{{}}}({})", self.lower, self.upper, self.functional)
    }
}

/// Evaluates a formal period at the Frobenius-fixed point.
pub fn per_af(sym: &FormalPeriod, ctx: &PeriodContext) -> Result<(PadicNumber, Route)> {
    let (series, route) = ctx.path_series(&sym.lower, &sym.upper)?;
    Ok((ctx.finish(series.pair(&sym.functional)?), route))
}

/// Evaluates `f_w` on the period loop `Φ ∘ (Hodge path)⁻¹`.
pub fn per_cl(w: &Word, ctx: &PeriodContext) -> Result<PadicNumber> {
    let hodge = ctx.unit();
    let loop_series = ctx.assoc.series().nc_mul(&hodge.nc_inverse()?)?;
    Ok(ctx.finish(loop_series.pair_word(w)?))
}

/// `{"p", "N", "word", "route", "value"}`.
pub fn result_json(p: u64, n: u32, w: &Word, route: Route, value: &PadicNumber) -> Value {
    json!({
        "p": p,
        "N": n,
        "word": format_word(w),
        "route": route.label(),
        "value": value.to_json(),
    })
}

/// Scales letters by the graded part of Frobenius (`e_i -> p^k e_i`).
pub fn letter_scaling(p: u64, exponent: i64, prec: u32) -> BTreeMap<Letter, PadicNumber> {
    let s = PadicNumber::one(p, prec).shift(exponent);
    [(Letter::E0, s.clone()), (Letter::E1, s)].into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    #[test]
    fn low_weight_and_grouplike() {
        let a = compute_associator(5, 6, 3, None).unwrap();
        let s = a.series();
        assert_eq!(s.coeff(&w("")).unwrap(), &PadicNumber::one(5, 6));
        for x in ["0", "1", "01", "10", "00", "11"] {
            assert!(s.coeff(&w(x)).unwrap().is_zero(), "{x}");
        }
        assert!(s.is_grouplike().is_zero());
        assert_eq!(a.manifest().checks.len(), 5);
    }

    #[test]
    fn zeta3_relations() {
        let a = compute_associator(7, 8, 3, None).unwrap();
        let z3 = pmzv_index(&[3], &a).unwrap();
        assert_eq!(z3.valuation(), Some(3));
        assert_eq!(pmzv_index(&[2, 1], &a).unwrap(), z3);
    }

    #[test]
    fn basepoint_discs() {
        let p = 7;
        assert_eq!(Basepoint::parse("14", p, 6).unwrap().disc().unwrap(), Disc::Zero);
        assert_eq!(Basepoint::parse("8", p, 6).unwrap().disc().unwrap(), Disc::One);
        assert!(Basepoint::parse("3", p, 6).unwrap().disc().is_err());
        assert_eq!(Basepoint::parse("tan1", p, 6).unwrap(), Basepoint::TangentOne);
    }

    #[test]
    fn auto_degree_grows_with_precision() {
        assert!(auto_solver_degree(7, 20, 4) > auto_solver_degree(7, 10, 4));
        assert!(auto_solver_degree(11, 10, 4) >= 10 * 10);
    }
}
