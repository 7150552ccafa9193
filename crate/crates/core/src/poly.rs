//! Sparse multivariate polynomials over GF(q), and univariate helpers
//! (discriminants through the Sylvester resultant).
//!
//! Text format, one term per line:
//!
//! ```text
//! # comment
//! <coefficient code> <e_0> <e_1> ... <e_{N-1}>
//! ```
//!
//! where `N` is the number of variables. For matrix varieties variable
//! `i*n + j` is the entry `x_{ij}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Arith, Field, FieldElem};
use crate::matrix::{berkowitz, det_division_free, det_generic};

/// Sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: u32) -> Self {
        Monomial(vec![(i, 1)])
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i as u32, e)).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(a, ea)), Some(&(b, eb))) if a == b => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
                (Some(&(a, ea)), Some(&(b, _))) if a < b => {
                    out.push((a, ea));
                    i += 1;
                }
                (Some(_), Some(&(b, eb))) => {
                    out.push((b, eb));
                    j += 1;
                }
                (Some(&t), None) => {
                    out.push(t);
                    i += 1;
                }
                (None, Some(&t)) => {
                    out.push(t);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }
}

/// A polynomial in `nvars` variables. Terms are kept sorted by monomial, with
/// no duplicates and no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    nvars: usize,
    terms: Vec<(Monomial, FieldElem)>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: FieldElem) -> Self {
        Poly::from_terms(nvars, vec![(Monomial::one(), c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Poly { nvars, terms: vec![(Monomial::var(i as u32), FieldElem::ONE)] }
    }

    /// Normalizes arbitrary terms: merges duplicates, drops zeros. Needs no
    /// field because duplicates are merged by the caller-facing `from_terms_in`.
    fn from_terms(nvars: usize, terms: Vec<(Monomial, FieldElem)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        debug_assert!(terms.windows(2).all(|w| w[0].0 != w[1].0));
        Poly { nvars, terms }
    }

    /// Builds a polynomial from possibly repeated terms.
    pub fn from_terms_in(f: &Field, nvars: usize, terms: Vec<(Monomial, FieldElem)>) -> Result<Self> {
        let mut acc: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
        for (m, c) in terms {
            f.check(c)?;
            if let Some(&(v, _)) = m.0.last() {
                if v as usize >= nvars {
                    return Err(Error::DimensionMismatch { expected: nvars, found: v as usize + 1 });
                }
            }
            let e = acc.entry(m).or_insert(FieldElem::ZERO);
            *e = f.add(*e, c);
        }
        Ok(Poly::from_terms(nvars, acc.into_iter().collect()))
    }

    /// Renames variable `i` to `map[i]` inside a ring with `nvars` variables.
    pub fn remap(&self, f: &Field, nvars: usize, map: &[usize]) -> Result<Poly> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut v: Vec<(u32, u32)> = m.0.iter().map(|&(i, e)| (map[i as usize] as u32, e)).collect();
                v.sort();
                (Monomial(v), *c)
            })
            .collect();
        Poly::from_terms_in(f, nvars, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, FieldElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(self.terms[i].1, other.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { nvars: self.nvars.max(other.nvars), terms: out }
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect() }
    }

    pub fn sub(&self, f: &Field, other: &Poly) -> Poly {
        self.add(f, &other.neg(f))
    }

    pub fn scale(&self, f: &Field, c: FieldElem) -> Poly {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect())
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        let mut acc: BTreeMap<Monomial, FieldElem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(FieldElem::ZERO);
                *e = f.add(*e, f.mul(*ca, *cb));
            }
        }
        Poly::from_terms(self.nvars.max(other.nvars), acc.into_iter().collect())
    }

    pub fn eval(&self, f: &Field, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = FieldElem::ZERO;
        for (m, c) in &self.terms {
            let mut t = *c;
            for &(v, e) in &m.0 {
                t = f.mul(t, f.pow(point[v as usize], e as u64));
            }
            acc = f.add(acc, t);
        }
        Ok(acc)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# nvars {}\n", self.nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; self.nvars];
            for &(v, e) in &m.0 {
                exps[v as usize] = e;
            }
            let _ = write!(s, "{}", c.code());
            for e in exps {
                let _ = write!(s, " {e}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text format. `nvars` is taken from a `# nvars N` header if
    /// present, otherwise from the first term line.
    pub fn from_text(f: &Field, text: &str) -> Result<Poly> {
        let mut nvars: Option<usize> = None;
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut it = rest.split_whitespace();
                if it.next() == Some("nvars") {
                    let n = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("line {}: bad nvars header", lineno + 1)))?;
                    nvars = Some(n);
                }
                continue;
            }
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1))))
                .collect::<Result<_>>()?;
            let (coeff, exps) = nums.split_first().ok_or_else(|| Error::Parse(format!("line {}: empty", lineno + 1)))?;
            let n = *nvars.get_or_insert(exps.len());
            if exps.len() != n {
                return Err(Error::Parse(format!("line {}: expected {n} exponents, found {}", lineno + 1, exps.len())));
            }
            let c = u32::try_from(*coeff).map_err(|_| Error::Parse(format!("line {}: coefficient too large", lineno + 1)))?;
            let exps: Vec<u32> = exps.iter().map(|&e| e as u32).collect();
            terms.push((Monomial::from_exponents(&exps), f.from_code(c)?));
        }
        Poly::from_terms_in(f, nvars.unwrap_or(0), terms)
    }
}

/// The polynomial ring GF(q)[x_0..x_{N-1}] as an [`Arith`] ring, used to run
/// the generic linear algebra symbolically.
pub struct PolyRing {
    pub field: Field,
    pub nvars: usize,
}

impl Arith for PolyRing {
    type E = Poly;
    fn zero(&self) -> Poly {
        Poly::zero(self.nvars)
    }
    fn one(&self) -> Poly {
        Poly::constant(self.nvars, FieldElem::ONE)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(&self.field, b)
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(&self.field, b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(&self.field, b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        a.neg(&self.field)
    }
    fn inv(&self, a: &Poly) -> Result<Poly> {
        match a.terms() {
            [(m, c)] if m.degree() == 0 => Ok(Poly::constant(self.nvars, self.field.inv(*c)?)),
            _ => Err(Error::DivisionByZero),
        }
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
}

/// The n×n matrix of variables `x_{ij}` (variable index `i*n + j`).
pub fn generic_matrix(n: usize) -> Vec<Poly> {
    (0..n * n).map(|i| Poly::var(n * n, i)).collect()
}

/// Formal derivative of a univariate polynomial (coefficients low to high),
/// keeping the formal length n (degree n−1) even when the top coefficient
/// vanishes in characteristic p.
fn derivative<A: Arith>(ar: &A, p: &[A::E]) -> Vec<A::E> {
    (1..p.len())
        .map(|i| {
            let mut acc = ar.zero();
            for _ in 0..i {
                acc = ar.add(&acc, &p[i]);
            }
            acc
        })
        .collect()
}

/// Sylvester matrix of `a` (formal degree `m`) and `b` (formal degree `k`),
/// coefficients given low to high. Size (m+k)×(m+k).
fn sylvester<A: Arith>(ar: &A, a: &[A::E], b: &[A::E]) -> (usize, Vec<A::E>) {
    let m = a.len() - 1;
    let k = b.len() - 1;
    let s = m + k;
    let mut out = vec![ar.zero(); s * s];
    for r in 0..k {
        for (i, c) in a.iter().rev().enumerate() {
            out[r * s + r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in b.iter().rev().enumerate() {
            out[(k + r) * s + r + i] = c.clone();
        }
    }
    (s, out)
}

/// Discriminant of a monic polynomial of degree n:
/// (−1)^{n(n−1)/2} · Res_{n,n−1}(P, P′). P′ keeps its formal degree n−1, so
/// the identity disc = ∏_{i<j}(λ_i − λ_j)² holds in every characteristic.
pub fn discriminant(f: &Field, p: &[FieldElem]) -> Result<FieldElem> {
    discriminant_in(f, p, |n, m| det_generic(f, n, m))
}

/// Discriminant in any ring with division (used over GF(q²)).
pub fn discriminant_generic<A: Arith>(ar: &A, p: &[A::E]) -> Result<A::E> {
    discriminant_in(ar, p, |n, m| det_generic(ar, n, m))
}

/// Division-free discriminant for symbolic coefficients.
pub fn discriminant_symbolic<A: Arith>(ar: &A, p: &[A::E]) -> Result<A::E> {
    discriminant_in(ar, p, |n, m| det_division_free(ar, n, &m))
}

fn discriminant_in<A: Arith>(ar: &A, p: &[A::E], det: impl Fn(usize, Vec<A::E>) -> A::E) -> Result<A::E> {
    let n = p.len().checked_sub(1).ok_or(Error::NonMonic)?;
    if p[n] != ar.one() {
        return Err(Error::NonMonic);
    }
    if n <= 1 {
        return Ok(ar.one());
    }
    let dp = derivative(ar, p);
    let (s, m) = sylvester(ar, p, &dp);
    let res = det(s, m);
    Ok(if (n * (n - 1) / 2) % 2 == 1 { ar.neg(&res) } else { res })
}

/// Characteristic polynomial of the generic n×n matrix, as polynomials in
/// the n² entries.
pub fn generic_char_poly(f: &Field, n: usize) -> Vec<Poly> {
    let ring = PolyRing { field: f.clone(), nvars: n * n };
    berkowitz(&ring, n, &generic_matrix(n))
}

/// disc(char_poly(X)) for the generic n×n matrix X.
pub fn generic_char_poly_discriminant(f: &Field, n: usize) -> Poly {
    let ring = PolyRing { field: f.clone(), nvars: n * n };
    let cp = generic_char_poly(f, n);
    discriminant_symbolic(&ring, &cp).expect("characteristic polynomials are monic")
}

/// Evaluates a univariate polynomial (coefficients low to high).
pub fn eval_univariate(f: &Field, p: &[FieldElem], x: FieldElem) -> FieldElem {
    p.iter().rev().fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}
