//! Subvarieties of Mat_n: polynomial systems with a membership test, and the
//! built-in ones (diagonal torus, non-regular-semisimple locus, conjugacy
//! classes, points, hyperplanes).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Arith, Field, FieldElem, QuadElem, QuadExt};
use crate::groups::{su_decode, Embedding, Family, GroupSpec, QuadPolyRing};
use crate::ledger::LedgerTerm;
use crate::matrix::{berkowitz, kernel, Matrix};
use crate::poly::{discriminant, discriminant_generic, generic_char_poly, generic_char_poly_discriminant, Poly, PolyRing};

/// Which square matrix the spectral equations look at. Block-embedded SL and
/// SU carry their "real" matrix inside a larger one; the discriminant of the
/// ambient characteristic polynomial vanishes identically on block SL, so the
/// spectral equations use the inner matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum View {
    Full,
    /// The upper-left k×k block.
    UpperLeft(usize),
    /// The m×m matrix over F_{q²} encoded by 2×2 blocks.
    SuDecode(QuadExt),
}

impl View {
    pub fn of(spec: &GroupSpec) -> View {
        match (spec.family, spec.embedding) {
            (Family::SL, Embedding::BlockContragredient) => View::UpperLeft(spec.n / 2),
            (Family::SUTwisted, _) => View::SuDecode(spec.ext.clone().expect("SU carries its extension")),
            _ => View::Full,
        }
    }

    /// Size of the viewed matrix.
    pub fn size(&self, n: usize) -> usize {
        match self {
            View::Full => n,
            View::UpperLeft(k) => *k,
            View::SuDecode(_) => n / 2,
        }
    }

    /// Characteristic polynomial of the viewed matrix (low to high), with
    /// F_q-coefficients written as (c, 0) over F_{q²} for uniformity.
    pub fn char_poly(&self, f: &Field, m: &Matrix) -> Result<Vec<QuadElem>> {
        let lift = |v: Vec<FieldElem>| v.into_iter().map(|a| QuadElem { a, b: FieldElem::ZERO }).collect();
        Ok(match self {
            View::Full => lift(m.char_poly(f)),
            View::UpperLeft(k) => lift(m.block(0, 0, *k).char_poly(f)),
            View::SuDecode(ext) => {
                let z = su_decode(ext, m).ok_or(Error::NotInGroup)?;
                berkowitz(ext, m.n() / 2, &z)
            }
        })
    }

    pub fn discriminant(&self, f: &Field, m: &Matrix) -> Result<QuadElem> {
        match self {
            View::SuDecode(ext) => discriminant_generic(ext, &self.char_poly(f, m)?),
            _ => {
                let cp: Vec<FieldElem> = self.char_poly(f, m)?.into_iter().map(|c| c.a).collect();
                Ok(QuadElem { a: discriminant(f, &cp)?, b: FieldElem::ZERO })
            }
        }
    }

    /// Variable indices of the viewed block inside the n² ambient variables.
    fn var_map(&self, n: usize) -> Vec<usize> {
        let k = self.size(n);
        (0..k * k).map(|v| (v / k) * n + v % k).collect()
    }
}

/// One defining condition. Spectral and group conditions are kept implicit
/// and expanded into polynomials on request.
#[derive(Clone, Debug)]
pub enum Equation {
    Poly(Poly),
    /// The defining equations of G.
    InGroup(Box<GroupSpec>),
    /// disc(char_poly(view(x))) = 0.
    Discriminant(View),
    /// char_poly(view(x)) equals the given coefficients (low to high).
    CharPoly(View, Vec<QuadElem>),
}

/// A variety with its declared dimension d and degree bound D.
#[derive(Clone, Debug)]
pub struct VarietySpec {
    pub label: String,
    /// Ambient matrix size; the variety lives in Mat_n.
    pub n: usize,
    pub field: Field,
    pub equations: Vec<Equation>,
    pub dim: u64,
    pub degree: LedgerTerm,
}

/// Serializable summary of a variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietySummary {
    pub label: String,
    pub n: usize,
    pub dim: u64,
    pub degree: String,
    pub equations: usize,
}

impl VarietySpec {
    pub fn new(label: &str, field: &Field, n: usize, equations: Vec<Equation>, dim: u64, degree: LedgerTerm) -> Result<VarietySpec> {
        if degree >= LedgerTerm::one() {
            Ok(VarietySpec { label: label.to_string(), n, field: field.clone(), equations, dim, degree })
        } else {
            Err(Error::OutOfRange("declared degree must be at least 1".into()))
        }
    }

    pub fn summary(&self) -> VarietySummary {
        VarietySummary {
            label: self.label.clone(),
            n: self.n,
            dim: self.dim,
            degree: self.degree.to_string(),
            equations: self.equations.len(),
        }
    }

    /// True iff every equation vanishes at `m`.
    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: m.n() });
        }
        for eq in &self.equations {
            if !self.equation_holds(eq, m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equation_holds(&self, eq: &Equation, m: &Matrix) -> Result<bool> {
        let f = &self.field;
        Ok(match eq {
            Equation::Poly(p) => p.eval(f, m.entries())?.is_zero(),
            Equation::InGroup(g) => g.contains_unchecked(m),
            Equation::Discriminant(view) => match view.discriminant(f, m) {
                Ok(d) => d.a.is_zero() && d.b.is_zero(),
                Err(Error::NotInGroup) => false,
                Err(e) => return Err(e),
            },
            Equation::CharPoly(view, target) => match view.char_poly(f, m) {
                Ok(cp) => &cp == target,
                Err(Error::NotInGroup) => false,
                Err(e) => return Err(e),
            },
        })
    }

    /// D·q^d as an exact term.
    pub fn point_bound(&self) -> LedgerTerm {
        self.degree.mul(&LedgerTerm::from_u64(self.field.q() as u64).pow_u64(self.dim))
    }

    /// All equations as polynomials in the n² entries. Symbolic expansion is
    /// refused where it would blow up (spectral views above 3×3 for the
    /// discriminant, 4×4 for the characteristic polynomial, groups above 6×6).
    pub fn polys(&self) -> Result<Vec<Poly>> {
        let f = &self.field;
        let nv = self.n * self.n;
        let too_big = |what: &str, k: usize, cap: usize| Error::BudgetExceeded {
            what: format!("symbolic {what}"),
            needed: format!("size {k}"),
            budget: cap as u64,
        };
        let mut out = Vec::new();
        for eq in &self.equations {
            match eq {
                Equation::Poly(p) => out.push(p.clone()),
                Equation::InGroup(g) => {
                    if g.n > 6 {
                        return Err(too_big("group equations", g.n, 6));
                    }
                    out.extend(g.defining_polys());
                }
                Equation::Discriminant(view) => {
                    let k = view.size(self.n);
                    if k > 3 {
                        return Err(too_big("discriminant", k, 3));
                    }
                    match view {
                        View::SuDecode(ext) => {
                            let d = su_spectral(ext, self.n, |qr, cp| {
                                crate::poly::discriminant_symbolic(qr, cp).expect("monic")
                            });
                            out.extend([d.0, d.1]);
                        }
                        _ => out.push(generic_char_poly_discriminant(f, k).remap(f, nv, &view.var_map(self.n))?),
                    }
                }
                Equation::CharPoly(view, target) => {
                    let k = view.size(self.n);
                    if k > 4 {
                        return Err(too_big("characteristic polynomial", k, 4));
                    }
                    match view {
                        View::SuDecode(ext) => {
                            for (i, t) in target.iter().enumerate().take(k) {
                                let c = su_spectral(ext, self.n, |_, cp| cp[i].clone());
                                out.push(c.0.sub(f, &Poly::constant(nv, t.a)));
                                out.push(c.1.sub(f, &Poly::constant(nv, t.b)));
                            }
                        }
                        _ => {
                            let map = view.var_map(self.n);
                            for (i, c) in generic_char_poly(f, k).into_iter().enumerate().take(k) {
                                out.push(c.remap(f, nv, &map)?.sub(f, &Poly::constant(nv, target[i].a)));
                            }
                        }
                    }
                }
            }
        }
        out.retain(|p| !p.is_zero());
        Ok(out)
    }
}

/// Runs a symbolic computation on the char poly of the decoded SU matrix.
fn su_spectral<F>(ext: &QuadExt, n: usize, g: F) -> (Poly, Poly)
where
    F: Fn(&QuadPolyRing, &[(Poly, Poly)]) -> (Poly, Poly),
{
    let f = &ext.base;
    let nv = n * n;
    let k = n / 2;
    let qr = QuadPolyRing { ring: PolyRing { field: f.clone(), nvars: nv }, s: ext.s };
    let z: Vec<(Poly, Poly)> = (0..k * k)
        .map(|v| {
            let (i, j) = (v / k, v % k);
            (Poly::var(nv, 2 * i * n + 2 * j), Poly::var(nv, (2 * i + 1) * n + 2 * j))
        })
        .collect();
    let cp = berkowitz(&qr, k, &z);
    g(&qr, &cp)
}

fn linear(nv: usize, f: &Field, var: usize, c: FieldElem) -> Poly {
    Poly::var(nv, var).sub(f, &Poly::constant(nv, c))
}

fn product_of_vars(nv: usize, f: &Field, vars: &[usize]) -> Poly {
    vars.iter().fold(Poly::constant(nv, FieldElem::ONE), |acc, &v| acc.mul(f, &Poly::var(nv, v)))
}

/// The diagonal maximal torus T, of dimension r. Declared degrees: r+1 for
/// usual SL (one hypersurface of degree r+1 in the diagonal), 2^r for the
/// other split families (r quadrics t_i·t_i' = 1), (r+1)·2^{r+1} for block SL,
/// and 2^m·m² for SU_m (m norm quadrics, two determinant equations of
/// degree m).
pub fn diagonal_torus(spec: &GroupSpec) -> VarietySpec {
    let f = &spec.field;
    let n = spec.n;
    let nv = n * n;
    let r = spec.rank as usize;
    let one = FieldElem::ONE;
    let d = |i: usize| i * n + i;
    let mut eqs = Vec::new();
    let degree;
    match spec.family {
        Family::SUTwisted => {
            let ext = spec.ext.as_ref().expect("SU carries its extension");
            let m = spec.su_size();
            for bi in 0..m {
                for bj in 0..m {
                    let at = |a: usize, b: usize| (2 * bi + a) * n + 2 * bj + b;
                    if bi != bj {
                        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                            eqs.push(Poly::var(nv, at(a, b)));
                        }
                    } else {
                        eqs.push(Poly::var(nv, at(0, 0)).sub(f, &Poly::var(nv, at(1, 1))));
                        eqs.push(Poly::var(nv, at(0, 1)).sub(f, &Poly::var(nv, at(1, 0)).scale(f, ext.s)));
                        let a = Poly::var(nv, at(0, 0));
                        let b = Poly::var(nv, at(1, 0));
                        let norm = a.mul(f, &a).sub(f, &b.mul(f, &b).scale(f, ext.s));
                        eqs.push(norm.sub(f, &Poly::constant(nv, one)));
                    }
                }
            }
            let qr = QuadPolyRing { ring: PolyRing { field: f.clone(), nvars: nv }, s: ext.s };
            let prod = (0..m).fold(qr.one(), |acc, i| {
                qr.mul(&acc, &(Poly::var(nv, 2 * i * n + 2 * i), Poly::var(nv, (2 * i + 1) * n + 2 * i)))
            });
            eqs.push(prod.0.sub(f, &Poly::constant(nv, one)));
            eqs.push(prod.1);
            degree = LedgerTerm::from_u64(2).pow_u64(m as u64).mul(&LedgerTerm::from_u64((m * m) as u64));
        }
        _ => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        eqs.push(Poly::var(nv, i * n + j));
                    }
                }
            }
            match (spec.family, spec.embedding) {
                (Family::SL, Embedding::Usual) => {
                    let vars: Vec<usize> = (0..n).map(d).collect();
                    eqs.push(product_of_vars(nv, f, &vars).sub(f, &Poly::constant(nv, one)));
                    degree = LedgerTerm::from_u64(r as u64 + 1);
                }
                (Family::SL, Embedding::BlockContragredient) => {
                    let h = n / 2;
                    for i in 0..h {
                        eqs.push(product_of_vars(nv, f, &[d(i), d(h + i)]).sub(f, &Poly::constant(nv, one)));
                    }
                    let vars: Vec<usize> = (0..h).map(d).collect();
                    eqs.push(product_of_vars(nv, f, &vars).sub(f, &Poly::constant(nv, one)));
                    degree = LedgerTerm::from_u64(2).pow_u64(h as u64).mul(&LedgerTerm::from_u64(h as u64));
                }
                _ => {
                    for i in 0..r {
                        eqs.push(product_of_vars(nv, f, &[d(i), d(r + i)]).sub(f, &Poly::constant(nv, one)));
                    }
                    if spec.family == Family::SOOdd {
                        eqs.push(linear(nv, f, d(2 * r), one));
                    }
                    degree = LedgerTerm::from_u64(2).pow_u64(r as u64);
                }
            }
        }
    }
    let equations = eqs.into_iter().map(Equation::Poly).collect();
    VarietySpec { label: format!("torus({})", spec.label()), n, field: f.clone(), equations, dim: r as u64, degree }
}

/// The locus 𝔅 of elements of G that are not regular semisimple:
/// G ∩ {disc(char_poly) = 0}, d = δ − 1, D = n(n − 1).
pub fn nonregular_locus(spec: &GroupSpec) -> VarietySpec {
    let n = spec.n as u64;
    VarietySpec {
        label: format!("nonregular({})", spec.label()),
        n: spec.n,
        field: spec.field.clone(),
        equations: vec![Equation::InGroup(Box::new(spec.clone())), Equation::Discriminant(View::of(spec))],
        dim: spec.delta - 1,
        degree: LedgerTerm::from_u64(n * (n - 1)),
    }
}

/// Cl(g) for regular semisimple g: elements of G with the same characteristic
/// polynomial, d = δ − r, D = n!·Δ_bound.
pub fn conjugacy_class_variety(spec: &GroupSpec, g: &Matrix) -> Result<VarietySpec> {
    if !is_regular_semisimple(spec, g)? {
        return Err(Error::NotRegularSemisimple);
    }
    let view = View::of(spec);
    let cp = view.char_poly(&spec.field, g)?;
    let fact = (1..=spec.n as u64).fold(LedgerTerm::one(), |acc, i| acc.mul(&LedgerTerm::from_u64(i)));
    Ok(VarietySpec {
        label: format!("class({})", g.codes().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")),
        n: spec.n,
        field: spec.field.clone(),
        equations: vec![Equation::InGroup(Box::new(spec.clone())), Equation::CharPoly(view, cp)],
        dim: spec.delta - spec.rank as u64,
        degree: fact.mul(&spec.degree_bound()),
    })
}

/// The single point {x}: d = 0, D = 1.
pub fn point_variety(field: &Field, x: &Matrix) -> VarietySpec {
    let n = x.n();
    let eqs = (0..n * n).map(|v| Equation::Poly(linear(n * n, field, v, x.entries()[v]))).collect();
    VarietySpec { label: "point".into(), n, field: field.clone(), equations: eqs, dim: 0, degree: LedgerTerm::one() }
}

/// The hyperplane Σ c_v x_v = c in Mat_n: d = n² − 1, D = 1.
pub fn hyperplane(field: &Field, n: usize, coeffs: &[FieldElem], c: FieldElem) -> Result<VarietySpec> {
    let nv = n * n;
    if coeffs.len() != nv {
        return Err(Error::DimensionMismatch { expected: nv, found: coeffs.len() });
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::OutOfRange("hyperplane needs a nonzero linear form".into()));
    }
    let p = coeffs
        .iter()
        .enumerate()
        .fold(Poly::constant(nv, field.neg(c)), |acc, (v, &a)| acc.add(field, &Poly::var(nv, v).scale(field, a)));
    Ok(VarietySpec {
        label: "hyperplane".into(),
        n,
        field: field.clone(),
        equations: vec![Equation::Poly(p)],
        dim: nv as u64 - 1,
        degree: LedgerTerm::one(),
    })
}

/// G itself as a variety of dimension δ with degree bound Δ_bound.
pub fn whole_group(spec: &GroupSpec) -> VarietySpec {
    VarietySpec {
        label: spec.label(),
        n: spec.n,
        field: spec.field.clone(),
        equations: vec![Equation::InGroup(Box::new(spec.clone()))],
        dim: spec.delta,
        degree: spec.degree_bound(),
    }
}

pub fn is_regular_semisimple(spec: &GroupSpec, m: &Matrix) -> Result<bool> {
    if !spec.contains(m)? {
        return Err(Error::NotInGroup);
    }
    let d = View::of(spec).discriminant(&spec.field, m)?;
    Ok(!(d.a.is_zero() && d.b.is_zero()))
}

/// An unordered set of lines in F_q^k, each given by its normalized
/// coordinate codes (first nonzero coordinate 1). A split maximal torus is
/// determined by its set of weight lines.
pub type LineSet = Vec<Vec<u32>>;

fn normalize_line(f: &Field, v: &[FieldElem]) -> Vec<u32> {
    let lead = v.iter().copied().find(|c| !c.is_zero()).expect("nonzero vector");
    let inv = f.inv(lead).expect("nonzero lead");
    v.iter().map(|&c| f.mul(c, inv).code()).collect()
}

fn split_view(spec: &GroupSpec, m: &Matrix) -> Result<Matrix> {
    match View::of(spec) {
        View::Full => Ok(m.clone()),
        View::UpperLeft(k) => Ok(m.block(0, 0, k)),
        View::SuDecode(_) => Err(Error::UnsupportedFamily("SU has no split diagonal torus".into())),
    }
}

/// Weight lines of the conjugate torus hTh⁻¹: the columns of h (inner block
/// for block SL).
pub fn conjugate_torus_key(spec: &GroupSpec, h: &Matrix) -> Result<LineSet> {
    let v = split_view(spec, h)?;
    let mut lines: Vec<Vec<u32>> = (0..v.n()).map(|j| normalize_line(&spec.field, &v.col(j))).collect();
    lines.sort();
    Ok(lines)
}

/// For a regular semisimple element whose eigenvalues all lie in F_q, the
/// weight lines of the unique maximal torus containing it; `None` when some
/// eigenvalue lies outside F_q.
pub fn split_torus_key(spec: &GroupSpec, g: &Matrix) -> Result<Option<LineSet>> {
    if !is_regular_semisimple(spec, g)? {
        return Err(Error::NotRegularSemisimple);
    }
    let f = &spec.field;
    let v = split_view(spec, g)?;
    let k = v.n();
    let mut lines = Vec::with_capacity(k);
    for lambda in f.elements() {
        let shifted = v.sub(f, &Matrix::identity(k).scale(f, lambda));
        for vec in kernel(f, k, k, shifted.entries()) {
            lines.push(normalize_line(f, &vec));
        }
    }
    if lines.len() < k {
        return Ok(None);
    }
    lines.sort();
    Ok(Some(lines))
}

/// Whether g ∈ G preserves every line of `key`, i.e. lies in that torus.
pub fn torus_contains(spec: &GroupSpec, key: &LineSet, g: &Matrix) -> Result<bool> {
    if !spec.contains(g)? {
        return Ok(false);
    }
    let f = &spec.field;
    let v = split_view(spec, g)?;
    for line in key {
        let x: Vec<FieldElem> = line.iter().map(|&c| f.from_code(c)).collect::<Result<_>>()?;
        let y = v.mul_vec(f, &x);
        let lead = x.iter().position(|c| !c.is_zero()).expect("nonzero line");
        let lambda = y[lead];
        if x.iter().zip(&y).any(|(&a, &b)| f.mul(a, lambda) != b) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact point set of the diagonal torus: the group elements that are
/// diagonal in the standard weight basis.
pub fn torus_points(spec: &GroupSpec, elements: &[Matrix]) -> Result<Vec<Matrix>> {
    let t = diagonal_torus(spec);
    let mut out = Vec::new();
    for m in elements {
        if t.contains(m)? {
            out.push(m.clone());
        }
    }
    Ok(out)
}

/// Distinct values in a set of keys.
pub fn distinct<T: Ord + Clone>(keys: impl IntoIterator<Item = T>) -> BTreeSet<T> {
    keys.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_group, EnumMethod};
    use crate::field::make_field;
    use crate::groups::{make_group, su_embed, GroupSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sl2(p: u64) -> GroupSpec {
        make_group(Family::SL, 1, &make_field(p, 1).unwrap(), Embedding::Usual).unwrap()
    }

    fn all(spec: &GroupSpec) -> Vec<Matrix> {
        enumerate_group(spec, EnumMethod::BfsClosure, 1_000_000).unwrap()
    }

    fn m(f: &Field, n: usize, v: &[i64]) -> Matrix {
        Matrix::from_ints(f, n, v).unwrap()
    }

    #[test]
    fn det_minus_one_at_identity() {
        let g = sl2(5);
        let p = &g.defining_polys()[0];
        assert!(p.eval(&g.field, Matrix::identity(2).entries()).unwrap().is_zero());
    }

    #[test]
    fn torus_examples() {
        let g = sl2(5);
        let f = &g.field;
        let t = diagonal_torus(&g);
        assert_eq!((t.dim, t.degree.to_u64()), (1, Some(2)));
        assert!(!t.contains(&m(f, 2, &[1, 1, 0, 1])).unwrap());
        assert_eq!(torus_points(&g, &all(&g)).unwrap().len(), 4);
        let sp = make_group(Family::Sp, 2, &make_field(3, 1).unwrap(), Embedding::Usual).unwrap();
        let t = diagonal_torus(&sp);
        assert_eq!((t.dim, t.degree.to_u64()), (2, Some(4)));
        assert_eq!(torus_points(&sp, &all(&sp)).unwrap().len(), 4);
        let so = GroupSpec::new_relaxed(Family::SOOdd, 2, &make_field(3, 1).unwrap(), Embedding::Usual).unwrap();
        let t = diagonal_torus(&so);
        assert_eq!(t.dim, 2);
        let mut corner = Matrix::identity(5);
        corner.set(4, 4, so.field.from_int(-1));
        assert!(!t.contains(&corner).unwrap());
        assert_eq!(torus_points(&so, &all(&so)).unwrap().len(), 4);
    }

    #[test]
    fn torus_sizes_are_split_or_anisotropic_counts() {
        let f5 = make_field(5, 1).unwrap();
        let b = make_group(Family::SL, 1, &f5, Embedding::BlockContragredient).unwrap();
        assert_eq!(torus_points(&b, &all(&b)).unwrap().len(), 4);
        let su = su_embed(2, &make_field(3, 1).unwrap()).unwrap();
        assert_eq!(torus_points(&su, &all(&su)).unwrap().len(), 4); // q + 1
        let su3 = su_embed(3, &make_field(3, 1).unwrap()).unwrap();
        assert_eq!(torus_points(&su3, &all(&su3)).unwrap().len(), 16); // (q + 1)²
    }

    #[test]
    fn discriminant_examples() {
        let g = sl2(5);
        let f = &g.field;
        assert!(!is_regular_semisimple(&g, &m(f, 2, &[1, 1, 0, 1])).unwrap());
        assert!(!is_regular_semisimple(&g, &Matrix::identity(2)).unwrap());
        let d = m(f, 2, &[2, 0, 0, 3]);
        assert_eq!(d.char_poly(f).iter().map(|c| c.code()).collect::<Vec<_>>(), vec![1, 0, 1]);
        assert_eq!(View::Full.discriminant(f, &d).unwrap().a, FieldElem::ONE);
        assert!(is_regular_semisimple(&g, &d).unwrap());
        assert!(matches!(is_regular_semisimple(&g, &m(f, 2, &[2, 0, 0, 2])), Err(Error::NotInGroup)));
    }

    #[test]
    fn nonregular_locus_sl2() {
        let g = sl2(5);
        let w = nonregular_locus(&g);
        assert_eq!((w.dim, w.degree.to_u64()), (2, Some(2)));
        let pts = all(&g);
        let count = pts.iter().filter(|x| w.contains(x).unwrap()).count();
        let by_trace = pts.iter().filter(|x| {
            let t = x.trace(&g.field);
            t == g.field.from_int(2) || t == g.field.from_int(-2)
        });
        assert_eq!(count, by_trace.count());
        assert_eq!(count, 50);
        let sp = make_group(Family::Sp, 2, &make_field(3, 1).unwrap(), Embedding::Usual).unwrap();
        assert_eq!(nonregular_locus(&sp).degree.to_u64(), Some(12));
    }

    #[test]
    fn symbolic_nonregular_equation_is_tr2_minus_4() {
        let g = sl2(7);
        let f = &g.field;
        let polys = nonregular_locus(&g).polys().unwrap();
        let disc = polys.last().unwrap();
        assert_eq!(disc.degree(), 2);
        for x in all(&g) {
            let t = x.trace(f);
            let expect = f.sub(f.mul(t, t), f.from_int(4));
            assert_eq!(disc.eval(f, x.entries()).unwrap(), expect);
        }
    }

    #[test]
    fn locus_complements_regularity() {
        let specs = [
            sl2(3),
            sl2(5),
            sl2(7),
            make_group(Family::SL, 1, &make_field(2, 2).unwrap(), Embedding::Usual).unwrap(),
            make_group(Family::SL, 1, &make_field(5, 1).unwrap(), Embedding::BlockContragredient).unwrap(),
            make_group(Family::SL, 2, &make_field(2, 1).unwrap(), Embedding::Usual).unwrap(),
            su_embed(2, &make_field(5, 1).unwrap()).unwrap(),
            GroupSpec::new_relaxed(Family::SOOdd, 1, &make_field(5, 1).unwrap(), Embedding::Usual).unwrap(),
        ];
        for g in &specs {
            let w = nonregular_locus(g);
            for x in all(g) {
                assert_eq!(w.contains(&x).unwrap(), !is_regular_semisimple(g, &x).unwrap(), "{}", g.label());
            }
        }
    }

    #[test]
    fn symbolic_and_implicit_equations_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let specs = [sl2(5), su_embed(2, &make_field(3, 1).unwrap()).unwrap()];
        for g in &specs {
            let pts = all(g);
            let rs = pts.iter().find(|x| is_regular_semisimple(g, x).unwrap()).unwrap();
            for v in [diagonal_torus(g), nonregular_locus(g), conjugacy_class_variety(g, rs).unwrap()] {
                let polys = v.polys().unwrap();
                let check = |x: &Matrix| {
                    assert_eq!(
                        v.contains(x).unwrap(),
                        polys.iter().all(|p| p.eval(&g.field, x.entries()).unwrap().is_zero()),
                        "{} on {}",
                        v.label,
                        g.label()
                    );
                };
                pts.iter().for_each(check);
                for _ in 0..300 {
                    let data = (0..g.n * g.n).map(|_| g.field.from_int(rng.random_range(0..g.q() as i64))).collect();
                    check(&Matrix::from_entries(&g.field, g.n, data).unwrap());
                }
            }
        }
    }

    #[test]
    fn conjugacy_class_examples() {
        let g = sl2(5);
        let f = &g.field;
        let d = m(f, 2, &[2, 0, 0, 3]);
        let cl = conjugacy_class_variety(&g, &d).unwrap();
        assert!(cl.contains(&d).unwrap());
        let pts = all(&g);
        let members: Vec<&Matrix> = pts.iter().filter(|x| cl.contains(x).unwrap()).collect();
        assert_eq!(members.len(), 30);
        assert!(members.iter().all(|x| x.trace(f).is_zero()));
        assert!(matches!(conjugacy_class_variety(&g, &Matrix::identity(2)), Err(Error::NotRegularSemisimple)));
    }

    #[test]
    fn conjugation_orbits_lie_in_class_varieties() {
        for g in [sl2(3), sl2(5)] {
            let f = &g.field;
            let pts = all(&g);
            for x in pts.iter().filter(|x| is_regular_semisimple(&g, x).unwrap()) {
                let cl = conjugacy_class_variety(&g, x).unwrap();
                let members: BTreeSet<&Matrix> = pts.iter().filter(|y| cl.contains(y).unwrap()).collect();
                for h in &pts {
                    let c = h.mul(f, x).mul(f, &h.inverse(f).unwrap());
                    assert!(members.contains(&c));
                }
                // closed under conjugation
                for y in &members {
                    for h in pts.iter().step_by(7) {
                        let c = h.mul(f, y).mul(f, &h.inverse(f).unwrap());
                        assert!(members.contains(&c));
                    }
                }
            }
        }
    }

    #[test]
    fn split_elements_lie_in_exactly_one_conjugate_torus() {
        let g = sl2(5);
        let pts = all(&g);
        let keys: BTreeSet<LineSet> = pts.iter().map(|h| conjugate_torus_key(&g, h).unwrap()).collect();
        assert_eq!(keys.len(), 15);
        for x in pts.iter().filter(|x| is_regular_semisimple(&g, x).unwrap()) {
            let hits = keys.iter().filter(|k| torus_contains(&g, k, x).unwrap()).count();
            match split_torus_key(&g, x).unwrap() {
                Some(k) => {
                    assert_eq!(hits, 1);
                    assert!(torus_contains(&g, &k, x).unwrap());
                }
                None => assert_eq!(hits, 0),
            }
        }
    }

    #[test]
    fn point_and_hyperplane() {
        let f = make_field(5, 1).unwrap();
        let e = point_variety(&f, &Matrix::identity(2));
        assert!(e.contains(&Matrix::identity(2)).unwrap());
        assert!(!e.contains(&m(&f, 2, &[1, 1, 0, 1])).unwrap());
        assert_eq!(e.point_bound().to_u64(), Some(1));
        let h = hyperplane(&f, 2, &[f.from_int(1), FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO], FieldElem::ONE).unwrap();
        assert!(h.contains(&Matrix::identity(2)).unwrap());
        assert_eq!(h.dim, 3);
        assert!(matches!(e.contains(&Matrix::identity(3)), Err(Error::DimensionMismatch { .. })));
    }
}
