//! Exact bookkeeping for the explicit constants of the dimensional estimate:
//! C₁, C₂, degree bounds, and the two recurrences C₁ has to satisfy.
//!
//! Numbers such as (2δ)^{δ^d} cannot be written out, so a [`LedgerTerm`] is
//! kept as a prime factorisation with big-integer exponents. Two terms are
//! compared exactly: cancel common factors, try a sign rule, expand if the
//! result is small, and otherwise bound Σ e_p·ln p with certified intervals
//! of increasing precision. Because logarithms of distinct primes are
//! linearly independent over ℚ, the refinement always terminates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Terms whose expansion stays below this many bits are compared exactly.
pub const EXPANSION_CAP_BITS: u64 = 1 << 16;

const START_PRECISION: u64 = 128;
const MAX_PRECISION: u64 = 1 << 22;

/// ∏ p^{e_p} over primes p, exponents possibly negative (for ratios).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LedgerTerm {
    factors: BTreeMap<u64, BigInt>,
}

impl fmt::Debug for LedgerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LedgerTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if e.is_one() {
                    p.to_string()
                } else if e.to_string().len() == 1 && e.is_positive() {
                    format!("{p}^{e}")
                } else {
                    format!("{p}^{{{e}}}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" · "))
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl LedgerTerm {
    pub fn one() -> Self {
        LedgerTerm::default()
    }

    /// Factors `n` by trial division. `n` must be positive.
    pub fn from_u64(n: u64) -> Self {
        assert!(n > 0, "ledger terms are positive");
        let mut t = LedgerTerm::one();
        for (p, e) in factorize(n) {
            t.factors.insert(p, BigInt::from(e));
        }
        t
    }

    /// Factors a big integer by trial division up to 2^20 and then requires
    /// the cofactor to be 1; fails otherwise.
    pub fn from_biguint(n: &BigUint) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::OutOfRange("ledger terms are positive".into()));
        }
        if let Some(small) = n.to_u64() {
            return Ok(Self::from_u64(small));
        }
        let mut n = n.clone();
        let mut t = LedgerTerm::one();
        let mut d = 2u64;
        while d < (1 << 20) && !n.is_one() {
            let bd = BigUint::from(d);
            let mut e = 0u64;
            loop {
                let (q, r) = n.div_rem(&bd);
                if !r.is_zero() {
                    break;
                }
                n = q;
                e += 1;
            }
            if e > 0 {
                t.factors.insert(d, BigInt::from(e));
            }
            d += 1;
        }
        if let Some(rest) = n.to_u64() {
            if rest > 1 {
                t = t.mul(&Self::from_u64(rest));
            }
            Ok(t)
        } else {
            Err(Error::OutOfRange(format!("cannot factor {n}")))
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.factors.iter().map(|(&p, e)| (p, e))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when every exponent is non-negative.
    pub fn is_integer(&self) -> bool {
        self.factors.values().all(|e| !e.is_negative())
    }

    fn insert(&mut self, p: u64, e: BigInt) {
        let slot = self.factors.entry(p).or_insert_with(BigInt::zero);
        *slot += e;
        if slot.is_zero() {
            self.factors.remove(&p);
        }
    }

    pub fn mul(&self, other: &LedgerTerm) -> LedgerTerm {
        let mut out = self.clone();
        for (&p, e) in &other.factors {
            out.insert(p, e.clone());
        }
        out
    }

    pub fn div(&self, other: &LedgerTerm) -> LedgerTerm {
        self.mul(&other.pow(&BigInt::from(-1)))
    }

    pub fn pow(&self, e: &BigInt) -> LedgerTerm {
        if e.is_zero() {
            return LedgerTerm::one();
        }
        LedgerTerm { factors: self.factors.iter().map(|(&p, x)| (p, x * e)).collect() }
    }

    pub fn pow_u64(&self, e: u64) -> LedgerTerm {
        self.pow(&BigInt::from(e))
    }

    /// log2 of the term, as a float (reporting only).
    pub fn log2(&self) -> f64 {
        self.factors.iter().map(|(&p, e)| e.to_f64().unwrap_or(f64::INFINITY) * (p as f64).log2()).sum()
    }

    pub fn log10(&self) -> f64 {
        self.log2() * std::f64::consts::LN_2 / std::f64::consts::LN_10
    }

    /// Upper estimate of the bit length of the numerator and denominator.
    fn bit_sizes(&self) -> (f64, f64) {
        let mut num = 0.0;
        let mut den = 0.0;
        for (&p, e) in &self.factors {
            let v = e.abs().to_f64().unwrap_or(f64::INFINITY) * ((p as f64).log2() + 1e-9);
            if e.is_positive() {
                num += v;
            } else {
                den += v;
            }
        }
        (num, den)
    }

    /// Exact value when it is an integer of at most `cap_bits` bits.
    pub fn to_biguint(&self, cap_bits: u64) -> Option<BigUint> {
        if !self.is_integer() {
            return None;
        }
        let (bits, _) = self.bit_sizes();
        if bits > cap_bits as f64 {
            return None;
        }
        let mut out = BigUint::one();
        for (&p, e) in &self.factors {
            out *= BigUint::from(p).pow(e.to_u32()?);
        }
        Some(out)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_biguint(64).and_then(|v| v.to_u64())
    }

    /// Exact numerator and denominator, if both are below the cap.
    fn expand_fraction(&self, cap_bits: u64) -> Option<(BigUint, BigUint)> {
        let (nb, db) = self.bit_sizes();
        if nb > cap_bits as f64 || db > cap_bits as f64 {
            return None;
        }
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (&p, e) in &self.factors {
            let a = BigUint::from(p).pow(e.abs().to_u32()?);
            if e.is_positive() {
                num *= a;
            } else {
                den *= a;
            }
        }
        Some((num, den))
    }

    /// Exact comparison; see the module documentation for the strategy.
    pub fn try_cmp(&self, other: &LedgerTerm) -> Result<Ordering> {
        let ratio = self.div(other);
        if ratio.is_one() {
            return Ok(Ordering::Equal);
        }
        // sign rule: a ratio with only non-negative exponents is > 1
        if ratio.is_integer() {
            return Ok(Ordering::Greater);
        }
        if ratio.factors.values().all(|e| e.is_negative()) {
            return Ok(Ordering::Less);
        }
        if let Some((num, den)) = ratio.expand_fraction(EXPANSION_CAP_BITS) {
            return Ok(num.cmp(&den));
        }
        let mut prec = START_PRECISION;
        while prec <= MAX_PRECISION {
            if let Some(ord) = log_sign(&ratio, prec) {
                return Ok(ord);
            }
            prec *= 2;
        }
        Err(Error::OutOfRange(format!("comparison of {self} and {other} did not resolve")))
    }
}

impl PartialOrd for LedgerTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LedgerTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("ledger comparison terminates")
    }
}

impl From<u64> for LedgerTerm {
    fn from(n: u64) -> Self {
        LedgerTerm::from_u64(n)
    }
}

/// Fixed-point value v·2^{-prec} with |true − v·2^{-prec}| ≤ err·2^{-prec}.
struct Approx {
    v: BigInt,
    err: BigInt,
}

/// atanh(u/w) for 0 < u < w, to `prec` fractional bits.
fn atanh_ratio(u: u64, w: u64, prec: u64) -> Approx {
    let scale = BigInt::one() << prec;
    let u = BigInt::from(u);
    let w = BigInt::from(w);
    let u2 = &u * &u;
    let w2 = &w * &w;
    let mut num = u.clone(); // u^{2j+1}
    let mut den = w.clone(); // w^{2j+1}
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    loop {
        let odd = BigInt::from(2 * terms + 1);
        let t = (&scale * &num) / (&den * &odd);
        if t.is_zero() {
            break;
        }
        sum += t;
        terms += 1;
        num *= &u2;
        den *= &w2;
    }
    // each floor loses < 1 ulp; the tail after the first zero term is
    // bounded by a geometric series with ratio u²/w² ≤ 1/9, so < 2 ulps.
    Approx { v: sum, err: BigInt::from(terms + 3) }
}

/// ln p to `prec` fractional bits, with an error bound.
fn ln_prime(p: u64, prec: u64) -> Approx {
    let ln2 = {
        let a = atanh_ratio(1, 3, prec);
        Approx { v: a.v * 2, err: a.err * 2 }
    };
    if p == 2 {
        return ln2;
    }
    let k = 63 - p.leading_zeros() as u64;
    let pk = 1u64 << k;
    let a = atanh_ratio(p - pk, p + pk, prec);
    let kk = BigInt::from(k);
    Approx { v: &kk * &ln2.v + a.v * 2, err: &kk * &ln2.err + a.err * 2 }
}

/// Sign of Σ e_p ln p, if the interval at this precision excludes zero.
fn log_sign(ratio: &LedgerTerm, prec: u64) -> Option<Ordering> {
    let mut centre = BigInt::zero();
    let mut radius = BigInt::zero();
    for (&p, e) in &ratio.factors {
        let a = ln_prime(p, prec);
        centre += e * &a.v;
        radius += e.abs() * &a.err;
    }
    if centre > radius {
        Some(Ordering::Greater)
    } else if -&centre > radius {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Interval comparison at a fixed precision, for cross-checks.
pub fn interval_cmp(a: &LedgerTerm, b: &LedgerTerm, prec: u64) -> Option<Ordering> {
    let r = a.div(b);
    if r.is_one() {
        return Some(Ordering::Equal);
    }
    log_sign(&r, prec)
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// C₁(0, D) = D; C₁(d, D) = (2δ)^{δ^d} · D^{δ(δ−1)⋯(δ−d+1)}.
pub fn c1(d: u64, big_d: &LedgerTerm, delta: u64) -> Result<LedgerTerm> {
    if d > delta {
        return Err(Error::OutOfRange(format!("d = {d} exceeds δ = {delta}")));
    }
    if !big_d.is_integer() || delta == 0 {
        return Err(Error::OutOfRange("D must be a positive integer and δ ≥ 1".into()));
    }
    if d == 0 {
        return Ok(big_d.clone());
    }
    let (tower, falling) = c1_exponents(d, delta);
    Ok(LedgerTerm::from_u64(2 * delta).pow(&tower).mul(&big_d.pow(&falling)))
}

/// (δ^d, δ(δ−1)⋯(δ−d+1)).
fn c1_exponents(d: u64, delta: u64) -> (BigInt, BigInt) {
    let tower = big(delta).pow(d as u32);
    let falling = (0..d).fold(BigInt::one(), |acc, i| acc * big(delta - i));
    (tower, falling)
}

/// k = 2(1+ι)^{n²}, the bound on the number of components used for C₂.
pub fn c2_k(iota: u64, n: u64) -> BigUint {
    BigUint::from(2u32) * BigUint::from(1 + iota).pow((n * n) as u32)
}

/// C₂(m) = δ(m + k) with k = 2(1+ι)^{n²}.
pub fn c2(m: u64, delta: u64, iota: u64, n: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    Ok(BigUint::from(delta) * (BigUint::from(m) + c2_k(iota, n)))
}

/// `constant · D^{d_exp}` with D a formal symbol, D ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalTerm {
    pub constant: LedgerTerm,
    pub d_exp: BigInt,
}

impl FormalTerm {
    fn d() -> Self {
        FormalTerm { constant: LedgerTerm::one(), d_exp: BigInt::one() }
    }
    fn constant(c: LedgerTerm) -> Self {
        FormalTerm { constant: c, d_exp: BigInt::zero() }
    }
    fn mul(&self, o: &FormalTerm) -> FormalTerm {
        FormalTerm { constant: self.constant.mul(&o.constant), d_exp: &self.d_exp + &o.d_exp }
    }
    fn pow(&self, e: &BigInt) -> FormalTerm {
        FormalTerm { constant: self.constant.pow(e), d_exp: &self.d_exp * e }
    }
    /// Sufficient condition for self ≥ other at every D ≥ 1.
    fn dominates(&self, o: &FormalTerm) -> bool {
        self.d_exp >= o.d_exp && self.constant >= o.constant
    }
}

fn c1_formal(d: u64, big_d: &FormalTerm, delta: u64) -> FormalTerm {
    if d == 0 {
        return big_d.clone();
    }
    let (tower, falling) = c1_exponents(d, delta);
    FormalTerm::constant(LedgerTerm::from_u64(2 * delta).pow(&tower)).mul(&big_d.pow(&falling))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recurrence {
    /// C₁(d,D)^ℓ ≥ 2 ∏_{i=1}^{ℓ−1} C₁(d−1, 2^δ ℓ^{δ−1} D^{i+1})
    ExitFibre,
    /// C₁(d,D)^{δ+1−d} ≥ (2ℓ · C₁(d−1, (2ℓ)^δ D^{ℓ+1}))^{δ−d}
    ExitExceptional,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecurrenceCheck {
    pub recurrence: Recurrence,
    pub d: u64,
    pub ell: u64,
    /// `None` for the formal-D check.
    pub big_d: Option<u64>,
    pub holds: bool,
    /// log10(LHS / RHS), for reading off the margin.
    pub log10_slack: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub delta: u64,
    pub d_grid: Vec<u64>,
    pub checks: Vec<RecurrenceCheck>,
    pub monotone_in_d: bool,
    pub monotone_in_big_d: bool,
    pub all_pass: bool,
}

pub const DEFAULT_D_GRID: [u64; 4] = [1, 2, 10, 1000];
pub const DEFAULT_DELTA_CAP: u64 = 10;

fn exit_fibre_sides(d: u64, ell: u64, delta: u64, dd: &FormalTerm) -> (FormalTerm, FormalTerm) {
    let lhs = c1_formal(d, dd, delta).pow(&big(ell));
    let mut rhs = FormalTerm::constant(LedgerTerm::from_u64(2));
    let base = FormalTerm::constant(LedgerTerm::from_u64(2).pow_u64(delta).mul(&LedgerTerm::from_u64(ell).pow_u64(delta - 1)));
    for i in 1..ell {
        let arg = base.mul(&dd.pow(&big(i + 1)));
        rhs = rhs.mul(&c1_formal(d - 1, &arg, delta));
    }
    (lhs, rhs)
}

fn exit_exc_sides(d: u64, ell: u64, delta: u64, dd: &FormalTerm) -> (FormalTerm, FormalTerm) {
    let lhs = c1_formal(d, dd, delta).pow(&big(delta + 1 - d));
    let arg = FormalTerm::constant(LedgerTerm::from_u64(2 * ell).pow_u64(delta)).mul(&dd.pow(&big(ell + 1)));
    let inner = FormalTerm::constant(LedgerTerm::from_u64(2 * ell)).mul(&c1_formal(d - 1, &arg, delta));
    (lhs, inner.pow(&big(delta - d)))
}

/// Checks both recurrences for every 1 ≤ d ≤ δ, 2 ≤ ℓ ≤ δ−d+1 and D in the
/// grid, exactly; then repeats the check with D formal (exponent of D and
/// constant part must both dominate), and checks monotonicity of C₁.
pub fn verify_recurrences(delta: u64, d_grid: &[u64], delta_cap: u64) -> Result<RecurrenceReport> {
    if delta == 0 || delta > delta_cap {
        return Err(Error::OutOfRange(format!("δ = {delta} outside 1..={delta_cap}")));
    }
    let mut checks = Vec::new();
    let mut push = |recurrence, d, ell, big_d: Option<u64>, lhs: FormalTerm, rhs: FormalTerm| {
        let holds = match big_d {
            Some(_) => lhs.constant >= rhs.constant,
            None => lhs.dominates(&rhs),
        };
        let slack = lhs.constant.div(&rhs.constant).log10();
        checks.push(RecurrenceCheck { recurrence, d, ell, big_d, holds, log10_slack: slack });
    };
    for d in 1..=delta {
        let ells: Vec<u64> = if d == delta { vec![1] } else { (2..=delta - d + 1).collect() };
        for &ell in &ells {
            for &g in d_grid {
                let dd = FormalTerm::constant(LedgerTerm::from_u64(g));
                if ell >= 2 {
                    let (l, r) = exit_fibre_sides(d, ell, delta, &dd);
                    push(Recurrence::ExitFibre, d, ell, Some(g), l, r);
                }
                let (l, r) = exit_exc_sides(d, ell, delta, &dd);
                push(Recurrence::ExitExceptional, d, ell, Some(g), l, r);
            }
            let formal = FormalTerm::d();
            if ell >= 2 {
                let (l, r) = exit_fibre_sides(d, ell, delta, &formal);
                push(Recurrence::ExitFibre, d, ell, None, l, r);
            }
            let (l, r) = exit_exc_sides(d, ell, delta, &formal);
            push(Recurrence::ExitExceptional, d, ell, None, l, r);
        }
    }
    let mut monotone_in_d = true;
    let mut monotone_in_big_d = true;
    let mut sorted = d_grid.to_vec();
    sorted.sort_unstable();
    for &g in &sorted {
        let dd = LedgerTerm::from_u64(g);
        for d in 0..delta {
            monotone_in_d &= c1(d, &dd, delta)? <= c1(d + 1, &dd, delta)?;
        }
    }
    for w in sorted.windows(2) {
        for d in 0..=delta {
            monotone_in_big_d &= c1(d, &LedgerTerm::from_u64(w[0]), delta)? <= c1(d, &LedgerTerm::from_u64(w[1]), delta)?;
        }
    }
    let all_pass = monotone_in_d && monotone_in_big_d && checks.iter().all(|c| c.holds);
    Ok(RecurrenceReport { delta, d_grid: d_grid.to_vec(), checks, monotone_in_d, monotone_in_big_d, all_pass })
}

/// deg of the image of a variety of degree D under a morphism of maximal
/// degree `mdeg`, image of dimension `dim_image`: ≤ D · mdeg^{dim}.
pub fn image_degree_bound(big_d: &LedgerTerm, mdeg: u64, dim_image: u64) -> Result<LedgerTerm> {
    check_positive(&[mdeg])?;
    Ok(big_d.mul(&LedgerTerm::from_u64(mdeg).pow_u64(dim_image)))
}

/// deg(f^{-1}(W) ∩ V) ≤ D_V · D_W · mdeg^{dim}.
pub fn preimage_degree_bound(d_v: &LedgerTerm, d_w: &LedgerTerm, mdeg: u64, dim_image: u64) -> Result<LedgerTerm> {
    check_positive(&[mdeg])?;
    Ok(d_v.mul(d_w).mul(&LedgerTerm::from_u64(mdeg).pow_u64(dim_image)))
}

/// Preimage of a hypersurface: ≤ deg(V) · deg(W) · mdeg.
pub fn hypersurface_preimage_bound(d_v: &LedgerTerm, d_w: &LedgerTerm, mdeg: u64) -> Result<LedgerTerm> {
    check_positive(&[mdeg])?;
    Ok(d_v.mul(d_w).mul(&LedgerTerm::from_u64(mdeg)))
}

/// deg(V₁ ∩ V₂) ≤ deg(V₁) · deg(V₂).
pub fn bezout(d1: &LedgerTerm, d2: &LedgerTerm) -> LedgerTerm {
    d1.mul(d2)
}

fn check_positive(xs: &[u64]) -> Result<()> {
    if xs.iter().any(|&x| x == 0) {
        return Err(Error::OutOfRange("degree data must be ≥ 1".into()));
    }
    Ok(())
}

/// One step of a degree-bound pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeStep {
    Image { mdeg: u64, dim_image: u64 },
    Preimage { d_w: u64, mdeg: u64, dim_image: u64 },
    HypersurfacePreimage { d_w: u64, mdeg: u64 },
    Intersect { d_other: u64 },
}

/// Accumulates a degree bound through a chain of constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePipeline {
    pub start: u64,
    pub steps: Vec<DegreeStep>,
}

impl DegreePipeline {
    pub fn new(start: u64) -> Self {
        DegreePipeline { start, steps: Vec::new() }
    }

    pub fn then(mut self, step: DegreeStep) -> Self {
        self.steps.push(step);
        self
    }

    pub fn bound(&self) -> Result<LedgerTerm> {
        check_positive(&[self.start])?;
        let mut acc = LedgerTerm::from_u64(self.start);
        for s in &self.steps {
            acc = apply_step(&acc, s)?;
        }
        Ok(acc)
    }
}

fn apply_step(acc: &LedgerTerm, s: &DegreeStep) -> Result<LedgerTerm> {
    match *s {
        DegreeStep::Image { mdeg, dim_image } => image_degree_bound(acc, mdeg, dim_image),
        DegreeStep::Preimage { d_w, mdeg, dim_image } => {
            check_positive(&[d_w])?;
            preimage_degree_bound(acc, &LedgerTerm::from_u64(d_w), mdeg, dim_image)
        }
        DegreeStep::HypersurfacePreimage { d_w, mdeg } => {
            check_positive(&[d_w])?;
            hypersurface_preimage_bound(acc, &LedgerTerm::from_u64(d_w), mdeg)
        }
        DegreeStep::Intersect { d_other } => {
            check_positive(&[d_other])?;
            Ok(bezout(acc, &LedgerTerm::from_u64(d_other)))
        }
    }
}

/// |A ∩ V| ≤ C₁·|A^{C₂}|^{d/δ} on a measured profile, checked exactly as
/// |A ∩ V|^δ ≤ C₁^δ·|A^{C₂}|^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainInequalityReport {
    pub spec: String,
    pub variety: String,
    pub lhs: u64,
    pub c1: String,
    pub c2: String,
    pub ball_c2: u64,
    pub holds: bool,
    /// log10 of C₁·|A^{C₂}|^{d/δ} / |A ∩ V|
    pub log10_slack: Option<f64>,
    /// The profile saturated before radius C₂, so |A^{C₂}| = |⟨A⟩|.
    pub vacuous: bool,
}

pub fn main_inequality_report(
    profile: &crate::growth::GrowthProfile,
    v: &crate::varieties::VarietySpec,
    spec: &crate::groups::GroupSpec,
) -> Result<MainInequalityReport> {
    let t = profile
        .tracked(&v.label)
        .ok_or_else(|| Error::OutOfRange(format!("profile does not track {}", v.label)))?;
    let lhs = *t.counts.get(1).ok_or_else(|| Error::InsufficientProfile { needed: 1 })?;
    let delta = spec.delta;
    let c1v = c1(v.dim, &v.degree, delta)?;
    let c2v = c2(1, delta, spec.iota, spec.n as u64)?;
    let r = c2v.to_u64().filter(|&r| (r as usize) < profile.sizes.len());
    let ball = match r {
        Some(r) => profile.sizes[r as usize],
        None if profile.saturated => *profile.sizes.last().unwrap(),
        None => return Err(Error::InsufficientProfile { needed: c2v.to_u64().unwrap_or(u64::MAX) }),
    };
    let vacuous = r.is_none() || (profile.saturated && r == Some(profile.sizes.len() as u64 - 1));
    let rhs = c1v.pow_u64(delta).mul(&LedgerTerm::from_u64(ball).pow_u64(v.dim));
    let (holds, slack) = if lhs == 0 {
        (true, None)
    } else {
        let l = LedgerTerm::from_u64(lhs).pow_u64(delta);
        (l.try_cmp(&rhs)? != Ordering::Greater, Some((rhs.log10() - l.log10()) / delta as f64))
    };
    Ok(MainInequalityReport {
        spec: spec.label(),
        variety: v.label.clone(),
        lhs,
        c1: c1v.to_string(),
        c2: c2v.to_string(),
        ball_c2: ball,
        holds,
        log10_slack: slack,
        vacuous,
    })
}
