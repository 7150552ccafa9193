//! Exact arithmetic in GF(p) and GF(p^k).
//!
//! An element of GF(p^k) is a coefficient vector `(c_0, ..., c_{k-1})` over
//! GF(p), reduced modulo the field's modulus. It is stored packed as the integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, which is also the canonical ordering
//! used whenever "least element" is asked for.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on q = p^k.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Canonical integer code (packed coefficient vector).
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub(crate) fn from_code_unchecked(code: u32) -> Self {
        FieldElem(code)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The minimal arithmetic used by the generic linear-algebra routines
/// (determinants, characteristic polynomials). Implemented by [`Field`] and by
/// the quadratic extension used for unitary groups.
pub trait Arith {
    type E: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Fails with `DivisionByZero` on zero, and for rings without division.
    fn inv(&self, a: &Self::E) -> Result<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool {
        *a == self.zero()
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, coefficients low to high, length k + 1.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A finite field GF(p^k). Cheap to clone.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}", self.p())?;
        if self.k() > 1 {
            write!(f, "^{}", self.k())?;
        }
        write!(f, ")")
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds GF(p^k) with the default size bound.
pub fn make_field(p: u64, k: u32) -> Result<Field> {
    make_field_bounded(p, k, DEFAULT_MAX_ORDER)
}

pub fn make_field_bounded(p: u64, k: u32, max_order: u64) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if k == 0 {
        return Err(Error::OutOfRange("extension degree must be >= 1".into()));
    }
    let q = p.checked_pow(k).filter(|&q| q <= max_order && q <= u32::MAX as u64);
    let Some(q) = q else {
        return Err(Error::FieldTooLarge { p, k, bound: max_order });
    };
    let (p, q) = (p as u32, q as u32);
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        least_irreducible(p, k as usize)
    };
    let mut inner = FieldInner { p, k, q, modulus, tables: None };
    if k > 1 {
        inner.tables = Some(build_tables(&inner));
    }
    Ok(Field { inner: Arc::new(inner) })
}

// --- dense polynomial helpers over GF(p), coefficients low to high ---

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1u64 % p as u64;
    let mut b = a as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of `a` modulo `m` over GF(p); `m` must have nonzero leading coefficient.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv % p as u64;
        if c != 0 {
            for i in 0..=dm {
                let idx = dr - dm + i;
                let sub = c * m[i] as u64 % p as u64;
                r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn digits(mut code: u32, p: u32, k: usize) -> Vec<u32> {
    let mut d = vec![0; k];
    for slot in d.iter_mut() {
        *slot = code % p;
        code /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Monic irreducible of degree k, least in lexicographic order of
/// `(c_{k-1}, ..., c_0)`. Irreducibility is checked by trial division by
/// every monic polynomial of degree 1..=k/2.
fn least_irreducible(p: u32, k: usize) -> Vec<u32> {
    let count = (p as u64).pow(k as u32);
    for t in 0..count {
        let mut cand = digits(t as u32, p, k);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        let n = (p as u64).pow(d as u32);
        for t in 0..n {
            let mut g = digits(t as u32, p, d);
            g.push(1);
            let r = poly_rem(f, &g, p);
            if r.len() == 1 && r[0] == 0 {
                return false;
            }
        }
    }
    true
}

fn slow_mul(inner: &FieldInner, a: u32, b: u32) -> u32 {
    let (p, k) = (inner.p, inner.k as usize);
    let da = digits(a, p, k);
    let db = digits(b, p, k);
    let mut prod = vec![0u32; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    let mut r = poly_rem(&prod, &inner.modulus, p);
    r.resize(k, 0);
    undigits(&r, p)
}

fn slow_pow(inner: &FieldInner, a: u32, mut e: u64) -> u32 {
    let mut r = 1u32;
    let mut b = a;
    while e > 0 {
        if e & 1 == 1 {
            r = slow_mul(inner, r, b);
        }
        b = slow_mul(inner, b, b);
        e >>= 1;
    }
    r
}

fn digit_add(p: u32, k: usize, a: u32, b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..k {
        let s = (a % p + b % p) % p;
        out += s * place;
        a /= p;
        b /= p;
        place = place.wrapping_mul(p);
    }
    out
}

fn build_tables(inner: &FieldInner) -> Tables {
    let q = inner.q;
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    let gen = (2..q)
        .find(|&c| factors.iter().all(|&l| slow_pow(inner, c, order / l) != 1))
        .unwrap_or(1);
    let mut exp = vec![0u32; (q - 1) as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x;
        log[x as usize] = i as u32;
        x = slow_mul(inner, x, gen);
    }
    let add = (q <= ADD_TABLE_LIMIT).then(|| {
        let mut t = vec![0u32; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                t[(a * q + b) as usize] = digit_add(inner.p, inner.k as usize, a, b);
            }
        }
        t
    });
    Tables { exp, log, add }
}

impl Field {
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    /// Monic modulus, coefficients from degree 0 to degree k.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// Human-readable modulus, e.g. `x^2 + x + 1`.
    pub fn modulus_string(&self) -> String {
        let m = &self.inner.modulus;
        let mut parts = Vec::new();
        for (i, &c) in m.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            parts.push(format!("{coeff}{var}"));
        }
        parts.join(" + ")
    }

    pub fn label(&self) -> String {
        format!("F_{}", self.q())
    }

    /// Validates a code against this field.
    pub fn check(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 < self.q() {
            Ok(a)
        } else {
            Err(Error::FieldMismatch { code: a.0, q: self.q() })
        }
    }

    pub fn from_code(&self, code: u32) -> Result<FieldElem> {
        self.check(FieldElem(code))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.k() as usize {
            return Err(Error::DimensionMismatch { expected: self.k() as usize, found: coeffs.len() });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p()) {
            return Err(Error::FieldMismatch { code: c, q: self.p() });
        }
        Ok(FieldElem(undigits(coeffs, self.p())))
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        digits(a.0, self.p(), self.k() as usize)
    }

    /// The image of an integer under Z -> GF(p).
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p() as i64) as u32)
    }

    /// The generator x of GF(p^k) over GF(p) (equal to 0 when k = 1, since the modulus is x).
    pub fn x(&self) -> FieldElem {
        if self.k() == 1 {
            FieldElem::ZERO
        } else {
            FieldElem(self.p())
        }
    }

    /// The GF(p)-basis 1, x, ..., x^{k-1}.
    pub fn basis(&self) -> Vec<FieldElem> {
        (0..self.k()).map(|i| FieldElem(self.p().pow(i))).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q()).map(FieldElem)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let inner = &*self.inner;
        if inner.k == 1 {
            let s = a.0 + b.0;
            FieldElem(if s >= inner.p { s - inner.p } else { s })
        } else if let Some(t) = inner.tables.as_ref().and_then(|t| t.add.as_ref()) {
            FieldElem(t[(a.0 * inner.q + b.0) as usize])
        } else {
            FieldElem(digit_add(inner.p, inner.k as usize, a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let inner = &*self.inner;
        if inner.k == 1 {
            FieldElem(if a.0 == 0 { 0 } else { inner.p - a.0 })
        } else if inner.p == 2 {
            a
        } else {
            let d: Vec<u32> = digits(a.0, inner.p, inner.k as usize)
                .into_iter()
                .map(|c| (inner.p - c) % inner.p)
                .collect();
            FieldElem(undigits(&d, inner.p))
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let inner = &*self.inner;
        if inner.k == 1 {
            return FieldElem((a.0 as u64 * b.0 as u64 % inner.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let t = inner.tables.as_ref().expect("extension fields carry tables");
        let e = (t.log[a.0 as usize] + t.log[b.0 as usize]) % (inner.q - 1);
        FieldElem(t.exp[e as usize])
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.is_zero() {
            return FieldElem::ZERO;
        }
        let inner = &*self.inner;
        if let Some(t) = &inner.tables {
            let l = t.log[a.0 as usize] as u64 * (e % (inner.q as u64 - 1)) % (inner.q as u64 - 1);
            return FieldElem(t.exp[l as usize]);
        }
        let mut r = FieldElem::ONE;
        let mut b = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.inner;
        if let Some(t) = &inner.tables {
            let l = (inner.q - 1 - t.log[a.0 as usize]) % (inner.q - 1);
            return Ok(FieldElem(t.exp[l as usize]));
        }
        Ok(FieldElem(inv_mod(a.0, inner.p)))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked variants: both operands are validated against this field first.
    pub fn try_add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn try_mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn try_div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.div(self.check(a)?, self.check(b)?)
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, a: FieldElem, e: u32) -> FieldElem {
        let mut r = a;
        for _ in 0..(e % self.k()) {
            r = self.pow(r, self.p() as u64);
        }
        r
    }

    pub fn is_square(&self, a: FieldElem) -> bool {
        if a.is_zero() || self.p() == 2 {
            return true;
        }
        self.pow(a, (self.q() as u64 - 1) / 2) == FieldElem::ONE
    }

    /// Least element (in code order) that is not a square.
    pub fn quadratic_nonresidue(&self) -> Result<FieldElem> {
        if self.p() == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Ok(self
            .elements()
            .find(|&a| !self.is_square(a))
            .expect("odd order fields have nonresidues"))
    }
}

impl Arith for Field {
    type E = FieldElem;
    fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }
    fn one(&self) -> FieldElem {
        FieldElem::ONE
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Field::add(self, *a, *b)
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Field::sub(self, *a, *b)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        Field::mul(self, *a, *b)
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        Field::neg(self, *a)
    }
    fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        Field::inv(self, *a)
    }
}

/// Element `a + b·ζ` of GF(q^2) = GF(q)[ζ]/(ζ^2 - s), s a nonresidue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: FieldElem,
    pub b: FieldElem,
}

/// The quadratic extension used to model unitary groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub base: Field,
    /// The nonresidue s with ζ^2 = s.
    pub s: FieldElem,
}

impl QuadExt {
    pub fn new(base: &Field) -> Result<Self> {
        let s = base.quadratic_nonresidue()?;
        Ok(QuadExt { base: base.clone(), s })
    }

    pub fn elem(&self, a: FieldElem, b: FieldElem) -> QuadElem {
        QuadElem { a, b }
    }

    /// Galois conjugation `a + bζ -> a - bζ` (the q-power Frobenius).
    pub fn conj(&self, x: QuadElem) -> QuadElem {
        QuadElem { a: x.a, b: self.base.neg(x.b) }
    }

    pub fn norm(&self, x: QuadElem) -> FieldElem {
        let f = &self.base;
        f.sub(f.mul(x.a, x.a), f.mul(self.s, f.mul(x.b, x.b)))
    }

    pub fn elements(&self) -> impl Iterator<Item = QuadElem> + '_ {
        self.base
            .elements()
            .flat_map(move |b| self.base.elements().map(move |a| QuadElem { a, b }))
    }

    pub fn pow(&self, x: QuadElem, mut e: u64) -> QuadElem {
        let mut r = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = Arith::mul(self, &r, &b);
            }
            b = Arith::mul(self, &b, &b);
            e >>= 1;
        }
        r
    }
}

impl Arith for QuadExt {
    type E = QuadElem;
    fn zero(&self) -> QuadElem {
        QuadElem { a: FieldElem::ZERO, b: FieldElem::ZERO }
    }
    fn one(&self) -> QuadElem {
        QuadElem { a: FieldElem::ONE, b: FieldElem::ZERO }
    }
    fn add(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem { a: self.base.add(x.a, y.a), b: self.base.add(x.b, y.b) }
    }
    fn sub(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        QuadElem { a: self.base.sub(x.a, y.a), b: self.base.sub(x.b, y.b) }
    }
    fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        let f = &self.base;
        let a = f.add(f.mul(x.a, y.a), f.mul(self.s, f.mul(x.b, y.b)));
        let b = f.add(f.mul(x.a, y.b), f.mul(x.b, y.a));
        QuadElem { a, b }
    }
    fn neg(&self, x: &QuadElem) -> QuadElem {
        QuadElem { a: self.base.neg(x.a), b: self.base.neg(x.b) }
    }
    fn inv(&self, x: &QuadElem) -> Result<QuadElem> {
        let n = self.base.inv(self.norm(*x))?;
        let c = self.conj(*x);
        Ok(QuadElem { a: self.base.mul(c.a, n), b: self.base.mul(c.b, n) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: enumerate monic polynomials of degree k in
    /// lexicographic order and return the first without a root-free
    /// factorization, by brute-force multiplication of all lower-degree pairs.
    fn brute_least_irreducible(p: u32, k: usize) -> Vec<u32> {
        let monics = |d: usize| -> Vec<Vec<u32>> {
            (0..p.pow(d as u32))
                .map(|t| {
                    let mut v = digits(t, p, d);
                    v.push(1);
                    v
                })
                .collect()
        };
        let mul = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut r = vec![0; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    r[i + j] = (r[i + j] + x * y) % p;
                }
            }
            r
        };
        let mut reducible = std::collections::HashSet::new();
        for d in 1..k {
            for a in monics(d) {
                for b in monics(k - d) {
                    reducible.insert(mul(&a, &b));
                }
            }
        }
        monics(k).into_iter().find(|f| !reducible.contains(f)).unwrap()
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.q(), 5);
    }

    #[test]
    fn gf4_modulus() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.modulus_string(), "x^2 + x + 1");
    }

    #[test]
    fn gf9_modulus() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn modulus_matches_brute_force() {
        for &(p, k) in &[(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 5)] {
            let f = make_field(p as u64, k as u32).unwrap();
            assert_eq!(f.modulus(), brute_least_irreducible(p, k).as_slice(), "GF({p}^{k})");
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(6, 1).unwrap_err(), Error::NonPrimeCharacteristic(6));
        assert!(matches!(make_field(2, 21), Err(Error::FieldTooLarge { .. })));
        assert!(make_field_bounded(3, 3, 26).is_err());
        assert!(make_field_bounded(3, 3, 27).is_ok());
    }

    #[test]
    fn basic_ops() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.mul(FieldElem(2), FieldElem(3)), FieldElem(1));
        assert_eq!(f5.inv(FieldElem(2)).unwrap(), FieldElem(3));
        assert_eq!(f5.inv(FieldElem::ZERO), Err(Error::DivisionByZero));

        let f4 = make_field(2, 2).unwrap();
        let x = f4.x();
        // x*x = x + 1 under x^2 + x + 1
        assert_eq!(f4.mul(x, x), f4.from_coeffs(&[1, 1]).unwrap());
    }

    #[test]
    fn mismatch_is_detected() {
        let f5 = make_field(5, 1).unwrap();
        assert!(matches!(f5.try_add(FieldElem(7), FieldElem(1)), Err(Error::FieldMismatch { .. })));
        assert!(f5.try_div(FieldElem(1), FieldElem(0)).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let f9 = make_field(3, 2).unwrap();
        let x = f9.x();
        assert_eq!(f9.frobenius(x, 1), f9.from_coeffs(&[0, 2]).unwrap());
        let f5 = make_field(5, 1).unwrap();
        for a in f5.elements() {
            assert_eq!(f5.frobenius(a, 1), a);
        }
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.frobenius(f4.x(), 2), f4.x());
    }

    #[test]
    fn nonresidues() {
        let nr = |p| make_field(p, 1).unwrap().quadratic_nonresidue().unwrap();
        assert_eq!(nr(3), FieldElem(2));
        assert_eq!(nr(5), FieldElem(2));
        assert_eq!(nr(7), FieldElem(3));
        assert_eq!(make_field(2, 3).unwrap().quadratic_nonresidue(), Err(Error::EvenCharacteristic));
    }

    fn axioms(f: &Field, samples: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = f.q();
        for _ in 0..samples {
            let a = FieldElem(rng.random_range(0..q));
            let b = FieldElem(rng.random_range(0..q));
            let c = FieldElem(rng.random_range(0..q));
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(a, b), f.add(b, a));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            assert_eq!(f.sub(f.add(a, b), b), a);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
            }
            // Frobenius is a ring homomorphism
            assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
            assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
            assert_eq!(f.frobenius(a, f.k()), a);
        }
    }

    #[test]
    fn field_axioms_sampled() {
        for (i, &(p, k)) in [(2, 1), (5, 1), (101, 1), (2, 4), (3, 2), (3, 5), (5, 3), (2, 10), (7, 4)]
            .iter()
            .enumerate()
        {
            let f = make_field(p, k).unwrap();
            axioms(&f, 10_000, i as u64);
        }
    }

    #[test]
    fn encoding_round_trip_exhaustive() {
        for &(p, k) in &[(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (3, 4), (7, 2)] {
            let f = make_field(p, k).unwrap();
            assert!(f.q() <= 81);
            for a in f.elements() {
                assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn quad_ext_is_a_field() {
        let f = make_field(3, 1).unwrap();
        let e = QuadExt::new(&f).unwrap();
        assert_eq!(e.s, FieldElem(2));
        let all: Vec<_> = e.elements().collect();
        assert_eq!(all.len(), 9);
        for &x in &all {
            // conj is the q-power map
            assert_eq!(e.pow(x, 3), e.conj(x));
            if x != e.zero() {
                assert_eq!(Arith::mul(&e, &x, &e.inv(&x).unwrap()), e.one());
            }
        }
    }
}
