//! The classical groups SL, Sp, SO (odd and split even), and the twisted SU
//! realised inside Mat_{2n}(F_q); their Lie algebras, the Cayley map, exact
//! orders and fixed generating sets.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::enumerate::{closure, Limits};
use crate::error::{Error, Result};
use crate::field::{Arith, Field, FieldElem, QuadElem, QuadExt};
use crate::ledger::LedgerTerm;
use crate::matrix::{det_division_free, det_generic, kernel, Matrix};
use crate::poly::{generic_matrix, Poly, PolyRing};

/// Generating sets are checked against the exact order by BFS closure when
/// the group has at most this many elements.
pub const GENERATOR_VERIFY_LIMIT: u64 = 250_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "SL")]
    SL,
    #[serde(rename = "Sp")]
    Sp,
    #[serde(rename = "SO_odd")]
    SOOdd,
    #[serde(rename = "SO_even_plus")]
    SOEvenPlus,
    #[serde(rename = "SU_twisted")]
    SUTwisted,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::SL, Family::Sp, Family::SOOdd, Family::SOEvenPlus, Family::SUTwisted];

    pub fn name(self) -> &'static str {
        match self {
            Family::SL => "SL",
            Family::Sp => "Sp",
            Family::SOOdd => "SO_odd",
            Family::SOEvenPlus => "SO_even_plus",
            Family::SUTwisted => "SU_twisted",
        }
    }

    /// Smallest admissible rank.
    pub fn min_rank(self) -> u32 {
        match self {
            Family::SL | Family::SUTwisted => 1,
            Family::Sp => 2,
            Family::SOOdd => 3,
            Family::SOEvenPlus => 4,
        }
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::SOOdd | Family::SOEvenPlus)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '+'], "_").as_str() {
            "sl" => Ok(Family::SL),
            "sp" => Ok(Family::Sp),
            "so_odd" | "so" => Ok(Family::SOOdd),
            "so_even_plus" | "so_even" | "so_plus" => Ok(Family::SOEvenPlus),
            "su" | "su_twisted" => Ok(Family::SUTwisted),
            _ => Err(Error::UnsupportedFamily(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Embedding {
    #[default]
    Usual,
    BlockContragredient,
}

impl FromStr for Embedding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "usual" => Ok(Embedding::Usual),
            "block" | "block_contragredient" => Ok(Embedding::BlockContragredient),
            _ => Err(Error::UnsupportedFamily(format!("embedding {s}"))),
        }
    }
}

/// A classical group over F_q together with its numerical data.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub family: Family,
    pub rank: u32,
    pub field: Field,
    pub embedding: Embedding,
    /// Ambient matrix size.
    pub n: usize,
    /// Dimension δ.
    pub delta: u64,
    /// Maximal degree ι of the inversion map.
    pub iota: u64,
    /// The form M with xᵀMx = M, for Sp and SO.
    pub form: Option<Matrix>,
    /// M[k][σ(k)] = c_k, since every form used here is monomial.
    form_perm: Vec<(usize, FieldElem)>,
    /// F_{q²} = F_q[ζ]/(ζ² − s), for SU.
    pub ext: Option<QuadExt>,
    /// Built with the rank restrictions lifted.
    pub relaxed: bool,
}

impl PartialEq for GroupSpec {
    fn eq(&self, o: &Self) -> bool {
        self.family == o.family && self.rank == o.rank && self.field == o.field && self.embedding == o.embedding
    }
}

/// Serializable description of a group spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub label: String,
    pub family: Family,
    pub rank: u32,
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub embedding: Embedding,
    pub n: usize,
    pub delta: u64,
    pub iota: u64,
    pub order: String,
    pub degree_bound: String,
}

pub fn make_group(family: Family, rank: u32, field: &Field, embedding: Embedding) -> Result<GroupSpec> {
    build(family, rank, field, embedding, false)
}

/// The SU_n realisation inside Mat_{2n}(F_q).
pub fn su_embed(n: usize, field: &Field) -> Result<GroupSpec> {
    if n < 2 {
        return Err(Error::RankTooSmall { family: "SU_twisted".into(), rank: n as u32 - 1, min: 1 });
    }
    make_group(Family::SUTwisted, n as u32 - 1, field, Embedding::Usual)
}

impl GroupSpec {
    /// Same as [`make_group`] but without the rank restrictions (Sp₂, SO₅ and
    /// friends are handy small test cases). Characteristic restrictions stay.
    pub fn new_relaxed(family: Family, rank: u32, field: &Field, embedding: Embedding) -> Result<GroupSpec> {
        build(family, rank, field, embedding, true)
    }
}

fn build(family: Family, rank: u32, field: &Field, embedding: Embedding, relaxed: bool) -> Result<GroupSpec> {
    let min = if relaxed {
        if family == Family::SOEvenPlus {
            2
        } else {
            1
        }
    } else {
        family.min_rank()
    };
    if rank < min {
        return Err(Error::RankTooSmall { family: family.name().into(), rank, min });
    }
    if family.is_orthogonal() && field.p() == 2 {
        return Err(Error::CharacteristicTwoOrthogonal);
    }
    if family == Family::SUTwisted && field.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if embedding == Embedding::BlockContragredient && family != Family::SL {
        return Err(Error::UnsupportedFamily(format!("{} has no block contragredient embedding", family.name())));
    }
    let r = rank as u64;
    let ru = rank as usize;
    let (n, delta, iota) = match (family, embedding) {
        (Family::SL, Embedding::Usual) => (ru + 1, r * r + 2 * r, r),
        (Family::SL, Embedding::BlockContragredient) => (2 * (ru + 1), r * r + 2 * r, 1),
        (Family::Sp, _) => (2 * ru, 2 * r * r + r, 1),
        (Family::SOOdd, _) => (2 * ru + 1, 2 * r * r + r, 1),
        (Family::SOEvenPlus, _) => (2 * ru, 2 * r * r - r, 1),
        (Family::SUTwisted, _) => (2 * (ru + 1), r * r + 2 * r, 1),
    };
    let form = match family {
        Family::Sp => Some(form_m3(field, ru)),
        Family::SOOdd => Some(form_m2(field, ru)),
        Family::SOEvenPlus => Some(form_m1(field, ru)),
        _ => None,
    };
    let form_perm = form
        .as_ref()
        .map(|m| {
            (0..n)
                .map(|k| {
                    let j = (0..n).find(|&j| !m.get(k, j).is_zero()).expect("forms are monomial");
                    (j, m.get(k, j))
                })
                .collect()
        })
        .unwrap_or_default();
    let ext = if family == Family::SUTwisted { Some(QuadExt::new(field)?) } else { None };
    Ok(GroupSpec { family, rank, field: field.clone(), embedding, n, delta, iota, form, form_perm, ext, relaxed })
}

/// M1 = (0, I; I, 0).
pub fn form_m1(f: &Field, r: usize) -> Matrix {
    let mut m = Matrix::zero(2 * r);
    for i in 0..r {
        m.set(i, r + i, FieldElem::ONE);
        m.set(r + i, i, FieldElem::ONE);
    }
    let _ = f;
    m
}

/// M2 = (0, I, 0; I, 0, 0; 0, 0, 1).
pub fn form_m2(f: &Field, r: usize) -> Matrix {
    let mut m = Matrix::zero(2 * r + 1);
    m.set_block(0, 0, &form_m1(f, r));
    m.set(2 * r, 2 * r, FieldElem::ONE);
    m
}

/// M3 = (0, I; −I, 0).
pub fn form_m3(f: &Field, r: usize) -> Matrix {
    let mut m = Matrix::zero(2 * r);
    for i in 0..r {
        m.set(i, r + i, FieldElem::ONE);
        m.set(r + i, i, f.neg(FieldElem::ONE));
    }
    m
}

fn q_pow(q: &BigUint, e: u64) -> BigUint {
    q.pow(e as u32)
}

impl GroupSpec {
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Size m of the SU_m being modelled (SU only).
    pub fn su_size(&self) -> usize {
        self.rank as usize + 1
    }

    pub fn label(&self) -> String {
        let q = self.q();
        let r = self.rank as usize;
        let base = match self.family {
            Family::SL => format!("SL_{}(F_{q})", r + 1),
            Family::Sp => format!("Sp_{}(F_{q})", 2 * r),
            Family::SOOdd => format!("SO_{}(F_{q})", 2 * r + 1),
            Family::SOEvenPlus => format!("SO+_{}(F_{q})", 2 * r),
            Family::SUTwisted => format!("SU_{}(F_{q})", r + 1),
        };
        if self.embedding == Embedding::BlockContragredient {
            format!("{base}[block]")
        } else {
            base
        }
    }

    /// Δ_bound = 2^{n²}·n.
    pub fn degree_bound(&self) -> LedgerTerm {
        let n = self.n as u64;
        LedgerTerm::from_u64(2).pow_u64(n * n).mul(&LedgerTerm::from_u64(n))
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            label: self.label(),
            family: self.family,
            rank: self.rank,
            p: self.field.p(),
            k: self.field.k(),
            q: self.q(),
            embedding: self.embedding,
            n: self.n,
            delta: self.delta,
            iota: self.iota,
            order: self.order().to_string(),
            degree_bound: self.degree_bound().to_string(),
        }
    }

    /// Exact |G(F_q)| from the classical order formulas.
    pub fn order(&self) -> BigUint {
        let q = BigUint::from(self.q());
        let r = self.rank as u64;
        let one = BigUint::one();
        let prod = |range: std::ops::RangeInclusive<u64>, f: &dyn Fn(u64) -> BigUint| range.fold(BigUint::one(), |acc, i| acc * f(i));
        match self.family {
            Family::SL => {
                let n = r + 1;
                q_pow(&q, n * (n - 1) / 2) * prod(2..=n, &|i| q_pow(&q, i) - &one)
            }
            Family::Sp | Family::SOOdd => q_pow(&q, r * r) * prod(1..=r, &|i| q_pow(&q, 2 * i) - &one),
            Family::SOEvenPlus => {
                q_pow(&q, r * (r - 1)) * (q_pow(&q, r) - &one) * prod(1..=r - 1, &|i| q_pow(&q, 2 * i) - &one)
            }
            Family::SUTwisted => {
                let m = r + 1;
                q_pow(&q, m * (m - 1) / 2)
                    * prod(2..=m, &|i| if i % 2 == 0 { q_pow(&q, i) - &one } else { q_pow(&q, i) + &one })
            }
        }
    }

    fn check_dim(&self, m: &Matrix) -> Result<()> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: m.n() });
        }
        Ok(())
    }

    /// Membership in G(F_q).
    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        self.check_dim(m)?;
        for &e in m.entries() {
            self.field.check(e)?;
        }
        Ok(self.contains_unchecked(m))
    }

    /// Membership without dimension or field checks (hot path).
    pub fn contains_unchecked(&self, m: &Matrix) -> bool {
        let f = &self.field;
        match self.family {
            Family::SL => match self.embedding {
                Embedding::Usual => m.det(f) == FieldElem::ONE,
                Embedding::BlockContragredient => {
                    let h = self.n / 2;
                    if !off_blocks_zero(m, h) {
                        return false;
                    }
                    let x1 = m.block(0, 0, h);
                    let x2 = m.block(h, h, h);
                    x1.mul(f, &x2.transpose()).is_identity() && x1.det(f) == FieldElem::ONE
                }
            },
            Family::Sp | Family::SOOdd | Family::SOEvenPlus => {
                self.preserves_form(m) && (self.family == Family::Sp || m.det(f) == FieldElem::ONE)
            }
            Family::SUTwisted => {
                let ext = self.ext.as_ref().expect("SU carries its extension");
                let Some(z) = self.su_decode(m) else {
                    return false;
                };
                let k = self.su_size();
                // Z* Z = I
                for i in 0..k {
                    for j in 0..k {
                        let mut acc = ext.zero();
                        for l in 0..k {
                            acc = ext.add(&acc, &ext.mul(&ext.conj(z[l * k + i]), &z[l * k + j]));
                        }
                        if acc != if i == j { ext.one() } else { ext.zero() } {
                            return false;
                        }
                    }
                }
                det_generic(ext, k, z) == ext.one()
            }
        }
    }

    /// xᵀ M x = M, entry by entry with early exit.
    fn preserves_form(&self, x: &Matrix) -> bool {
        let f = &self.field;
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let mut acc = FieldElem::ZERO;
                for (k, &(s, c)) in self.form_perm.iter().enumerate() {
                    let a = x.get(k, i);
                    if a.is_zero() {
                        continue;
                    }
                    acc = f.add(acc, f.mul(f.mul(a, c), x.get(s, j)));
                }
                let target = if self.form_perm[i].0 == j { self.form_perm[i].1 } else { FieldElem::ZERO };
                if acc != target {
                    return false;
                }
            }
        }
        true
    }

    /// Membership in the Lie algebra 𝔤(F_q).
    pub fn lie_contains(&self, x: &Matrix) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.lie_residual(x).iter().all(|c| c.is_zero()))
    }

    /// An F_q-linear map of X that vanishes exactly on 𝔤(F_q).
    pub fn lie_residual(&self, x: &Matrix) -> Vec<FieldElem> {
        let f = &self.field;
        let n = self.n;
        let mut out = Vec::new();
        match self.family {
            Family::SL => match self.embedding {
                Embedding::Usual => out.push(x.trace(f)),
                Embedding::BlockContragredient => {
                    let h = n / 2;
                    for i in 0..n {
                        for j in 0..n {
                            if (i < h) != (j < h) {
                                out.push(x.get(i, j));
                            }
                        }
                    }
                    for i in 0..h {
                        for j in 0..h {
                            out.push(f.add(x.get(h + i, h + j), x.get(j, i)));
                        }
                    }
                    out.push((0..h).fold(FieldElem::ZERO, |acc, i| f.add(acc, x.get(i, i))));
                }
            },
            Family::Sp | Family::SOOdd | Family::SOEvenPlus => {
                // (XᵀM)_{ij} = c_k X_{k,i} with σ(k) = j; (MX)_{ij} = c_i X_{σ(i),j}
                let mut inv = vec![0usize; n];
                for (k, &(s, _)) in self.form_perm.iter().enumerate() {
                    inv[s] = k;
                }
                for i in 0..n {
                    for j in 0..n {
                        let k = inv[j];
                        let a = f.mul(self.form_perm[k].1, x.get(k, i));
                        let (s, c) = self.form_perm[i];
                        out.push(f.add(a, f.mul(c, x.get(s, j))));
                    }
                }
            }
            Family::SUTwisted => {
                let ext = self.ext.as_ref().expect("SU carries its extension");
                let k = self.su_size();
                let mut w = Vec::with_capacity(k * k);
                for bi in 0..k {
                    for bj in 0..k {
                        let at = |a: usize, b: usize| x.get(2 * bi + a, 2 * bj + b);
                        out.push(f.sub(at(0, 0), at(1, 1)));
                        out.push(f.sub(at(0, 1), f.mul(ext.s, at(1, 0))));
                        w.push(QuadElem { a: at(0, 0), b: at(1, 0) });
                    }
                }
                for i in 0..k {
                    for j in 0..k {
                        let r = ext.add(&w[i * k + j], &ext.conj(w[j * k + i]));
                        out.extend([r.a, r.b]);
                    }
                }
                let tr = (0..k).fold(ext.zero(), |acc, i| ext.add(&acc, &w[i * k + i]));
                out.extend([tr.a, tr.b]);
            }
        }
        out
    }

    /// dim_{F_q} 𝔤(F_q), as the nullity of [`Self::lie_residual`].
    pub fn lie_dimension(&self) -> usize {
        let f = &self.field;
        let nn = self.n * self.n;
        let cols: Vec<Vec<FieldElem>> = (0..nn)
            .map(|v| {
                let mut e = Matrix::zero(self.n);
                e.set(v / self.n, v % self.n, FieldElem::ONE);
                self.lie_residual(&e)
            })
            .collect();
        let rows = cols[0].len();
        let mut data = vec![FieldElem::ZERO; rows * nn];
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                data[i * nn + j] = v;
            }
        }
        kernel(f, rows, nn, &data).len()
    }

    /// gXg⁻¹ for g ∈ G.
    pub fn adjoint(&self, g: &Matrix, x: &Matrix) -> Result<Matrix> {
        self.check_dim(x)?;
        if !self.contains(g)? {
            return Err(Error::NotInGroup);
        }
        let f = &self.field;
        Ok(g.mul(f, x).mul(f, &g.inverse(f)?))
    }

    /// λ(X) = (I − X)(I + X)⁻¹, for Sp and SO.
    pub fn cayley(&self, x: &Matrix) -> Result<Matrix> {
        self.check_dim(x)?;
        if !matches!(self.family, Family::Sp | Family::SOOdd | Family::SOEvenPlus) {
            return Err(Error::UnsupportedFamily(format!("no Cayley map for {}", self.family)));
        }
        cayley_map(&self.field, x)
    }

    /// Decodes an SU point of Mat_{2m}(F_q) into an m×m matrix over F_{q²};
    /// `None` when some 2×2 block is not of the form (a, sb; b, a).
    pub fn su_decode(&self, m: &Matrix) -> Option<Vec<QuadElem>> {
        let ext = self.ext.as_ref()?;
        su_decode(ext, m)
    }

    /// Fixed generating set, verified by closure when |G| ≤ the verify limit.
    pub fn standard_generators(&self) -> Result<GenSet> {
        let gens = self.standard_generators_unverified()?;
        let order = self.order();
        if order <= BigUint::from(GENERATOR_VERIFY_LIMIT) {
            let limit = GENERATOR_VERIFY_LIMIT as usize + 1;
            let ball = closure(&self.field, gens.elements(), &Limits::elements(limit))?;
            if BigUint::from(ball.len()) != order {
                return Err(Error::GeneratorVerificationFailed { expected: order.to_string(), found: ball.len() });
            }
        }
        Ok(gens)
    }

    /// The generating set without the closure check: e first, then each root
    /// element followed by its inverse.
    pub fn standard_generators_unverified(&self) -> Result<GenSet> {
        let f = &self.field;
        let mut out = vec![Matrix::identity(self.n)];
        let basis = f.basis();
        let push_root = |out: &mut Vec<Matrix>, x: &Matrix| {
            for &b in &basis {
                let g = exp_nilpotent(f, &x.scale(f, b));
                let gi = exp_nilpotent(f, &x.scale(f, f.neg(b)));
                out.push(g);
                out.push(gi);
            }
        };
        match self.family {
            Family::SL => {
                let k = self.rank as usize + 1;
                let mut base = vec![Matrix::identity(k)];
                for (up, down) in sl_simple_roots(f, k) {
                    push_root(&mut base, &up);
                    push_root(&mut base, &down);
                }
                match self.embedding {
                    Embedding::Usual => out = base,
                    Embedding::BlockContragredient => {
                        out = base.iter().map(|m| contragredient_embed(f, m)).collect::<Result<_>>()?;
                    }
                }
            }
            Family::Sp | Family::SOOdd | Family::SOEvenPlus => {
                for (up, down) in self.simple_root_lie_elements() {
                    push_root(&mut out, &up);
                    push_root(&mut out, &down);
                }
                if self.family.is_orthogonal() {
                    let g = self.spinor_element()?;
                    let gi = g.inverse(f)?;
                    out.push(g);
                    out.push(gi);
                }
            }
            Family::SUTwisted => {
                let ext = self.ext.as_ref().expect("SU carries its extension");
                let k = self.su_size();
                for z in su2_generators(ext)? {
                    for i in 0..k - 1 {
                        let mut big = identity_quad(ext, k);
                        big[i * k + i] = z[0];
                        big[i * k + i + 1] = z[1];
                        big[(i + 1) * k + i] = z[2];
                        big[(i + 1) * k + i + 1] = z[3];
                        let g = su_encode(ext, k, &big);
                        let gi = g.inverse(f)?;
                        out.push(g);
                        out.push(gi);
                    }
                }
            }
        }
        GenSet::new(self, out, "standard")
    }

    /// Nilpotent Lie elements for the simple roots and their negatives.
    pub fn simple_root_lie_elements(&self) -> Vec<(Matrix, Matrix)> {
        let f = &self.field;
        let n = self.n;
        let r = self.rank as usize;
        let e = |entries: &[(usize, usize, i64)]| {
            let mut m = Matrix::zero(n);
            for &(i, j, c) in entries {
                m.set(i, j, f.add(m.get(i, j), f.from_int(c)));
            }
            m
        };
        let mut out = Vec::new();
        if !matches!(self.family, Family::Sp | Family::SOOdd | Family::SOEvenPlus) {
            return out;
        }
        // e_i − e_{i+1}
        for i in 0..r.saturating_sub(1) {
            out.push((e(&[(i, i + 1, 1), (r + i + 1, r + i, -1)]), e(&[(i + 1, i, 1), (r + i, r + i + 1, -1)])));
        }
        match self.family {
            // 2e_r
            Family::Sp => out.push((e(&[(r - 1, 2 * r - 1, 1)]), e(&[(2 * r - 1, r - 1, 1)]))),
            // e_r
            Family::SOOdd => {
                let z = 2 * r;
                out.push((e(&[(r - 1, z, 1), (z, 2 * r - 1, -1)]), e(&[(2 * r - 1, z, 1), (z, r - 1, -1)])));
            }
            // e_{r−1} + e_r
            Family::SOEvenPlus => {
                let (a, b) = (r - 2, r - 1);
                out.push((e(&[(a, r + b, 1), (b, r + a, -1)]), e(&[(r + b, a, 1), (r + a, b, -1)])));
            }
            _ => unreachable!(),
        }
        out
    }

    /// r_v r_w with v = e_0 + e_r, w = e_0 + s·e_r: a product of two
    /// reflections with non-square spinor norm, so it lies outside Ω.
    fn spinor_element(&self) -> Result<Matrix> {
        let f = &self.field;
        let m = self.form.as_ref().expect("form present");
        let s = f.quadratic_nonresidue()?;
        let r = self.rank as usize;
        let mut v = vec![FieldElem::ZERO; self.n];
        v[0] = FieldElem::ONE;
        v[r] = FieldElem::ONE;
        let mut w = v.clone();
        w[r] = s;
        Ok(reflection(f, m, &v)?.mul(f, &reflection(f, m, &w)?))
    }

    /// Coordinate polynomials cutting out G in Mat_n (variable `i*n + j` is
    /// x_{ij}). Determinants are expanded symbolically, so this is meant for
    /// export and cross-checks at small n.
    pub fn defining_polys(&self) -> Vec<Poly> {
        let f = &self.field;
        let n = self.n;
        let nv = n * n;
        let x = generic_matrix(n);
        let ring = PolyRing { field: f.clone(), nvars: nv };
        let c = |v: FieldElem| Poly::constant(nv, v);
        let one = c(FieldElem::ONE);
        let det_of = |rows: &[usize], cols: &[usize]| {
            let k = rows.len();
            let xr = &x;
            let sub: Vec<Poly> = rows.iter().flat_map(|&i| cols.iter().map(move |&j| xr[i * n + j].clone())).collect();
            det_division_free(&ring, k, &sub)
        };
        let mut out = Vec::new();
        match self.family {
            Family::SL if self.embedding == Embedding::Usual => {
                let all: Vec<usize> = (0..n).collect();
                out.push(det_of(&all, &all).sub(f, &one));
            }
            Family::SL => {
                let h = n / 2;
                for i in 0..n {
                    for j in 0..n {
                        if (i < h) != (j < h) {
                            out.push(x[i * n + j].clone());
                        }
                    }
                }
                for i in 0..h {
                    for j in 0..h {
                        let mut acc = Poly::zero(nv);
                        for l in 0..h {
                            acc = acc.add(f, &x[i * n + l].mul(f, &x[(h + j) * n + h + l]));
                        }
                        if i == j {
                            acc = acc.sub(f, &one);
                        }
                        out.push(acc);
                    }
                }
                let top: Vec<usize> = (0..h).collect();
                out.push(det_of(&top, &top).sub(f, &one));
            }
            Family::Sp | Family::SOOdd | Family::SOEvenPlus => {
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = Poly::zero(nv);
                        for (k, &(s, cf)) in self.form_perm.iter().enumerate() {
                            acc = acc.add(f, &x[k * n + i].mul(f, &x[s * n + j]).scale(f, cf));
                        }
                        let target = if self.form_perm[i].0 == j { self.form_perm[i].1 } else { FieldElem::ZERO };
                        out.push(acc.sub(f, &c(target)));
                    }
                }
                if self.family.is_orthogonal() {
                    let all: Vec<usize> = (0..n).collect();
                    out.push(det_of(&all, &all).sub(f, &one));
                }
            }
            Family::SUTwisted => {
                let ext = self.ext.as_ref().expect("SU carries its extension");
                let k = self.su_size();
                let s = c(ext.s);
                // block shape
                for bi in 0..k {
                    for bj in 0..k {
                        let at = |a: usize, b: usize| x[(2 * bi + a) * n + 2 * bj + b].clone();
                        out.push(at(0, 0).sub(f, &at(1, 1)));
                        out.push(at(0, 1).sub(f, &s.mul(f, &at(1, 0))));
                    }
                }
                // Z*Z = I and det Z = 1, with Z's entries (a, b) read off the blocks
                let qr = QuadPolyRing { ring: PolyRing { field: f.clone(), nvars: nv }, s: ext.s };
                let z: Vec<(Poly, Poly)> = (0..k)
                    .flat_map(|bi| (0..k).map(move |bj| (bi, bj)))
                    .map(|(bi, bj)| (x[(2 * bi) * n + 2 * bj].clone(), x[(2 * bi + 1) * n + 2 * bj].clone()))
                    .collect();
                for i in 0..k {
                    for j in 0..k {
                        let mut acc = qr.zero();
                        for l in 0..k {
                            let zc = (z[l * k + i].0.clone(), z[l * k + i].1.neg(f));
                            acc = qr.add(&acc, &qr.mul(&zc, &z[l * k + j]));
                        }
                        if i == j {
                            acc.0 = acc.0.sub(f, &one);
                        }
                        out.push(acc.0);
                        out.push(acc.1);
                    }
                }
                let d = det_division_free(&qr, k, &z);
                out.push(d.0.sub(f, &one));
                out.push(d.1);
            }
        }
        out.retain(|p| !p.is_zero());
        out
    }
}

fn off_blocks_zero(m: &Matrix, h: usize) -> bool {
    let n = m.n();
    (0..n).all(|i| (0..n).all(|j| (i < h) == (j < h) || m.get(i, j).is_zero()))
}

/// λ(X) = (I − X)(I + X)⁻¹; an involution off det(I + X) = 0.
pub fn cayley_map(f: &Field, x: &Matrix) -> Result<Matrix> {
    let id = Matrix::identity(x.n());
    let plus = id.add(f, x);
    if plus.det(f).is_zero() {
        return Err(Error::OnSingularLocus);
    }
    Ok(id.sub(f, x).mul(f, &plus.inverse(f)?))
}

/// XY − YX.
pub fn bracket(f: &Field, x: &Matrix, y: &Matrix) -> Result<Matrix> {
    Ok(x.try_mul(f, y)?.sub(f, &y.mul(f, x)))
}

/// diag(M, (M⁻¹)ᵀ) for M ∈ SL_n.
pub fn contragredient_embed(f: &Field, m: &Matrix) -> Result<Matrix> {
    if m.det(f) != FieldElem::ONE {
        return Err(Error::NotInSL);
    }
    let n = m.n();
    let mut out = Matrix::zero(2 * n);
    out.set_block(0, 0, m);
    out.set_block(n, n, &m.inverse(f)?.transpose());
    Ok(out)
}

/// The 2×2 block of a + bζ: (a, s·b; b, a).
pub fn su_block(ext: &QuadExt, z: QuadElem) -> [FieldElem; 4] {
    [z.a, ext.base.mul(ext.s, z.b), z.b, z.a]
}

/// Replaces each entry of an m×m matrix over F_{q²} by its 2×2 block.
pub fn su_encode(ext: &QuadExt, m: usize, z: &[QuadElem]) -> Matrix {
    let n = 2 * m;
    let mut out = Matrix::zero(n);
    for i in 0..m {
        for j in 0..m {
            let b = su_block(ext, z[i * m + j]);
            out.set(2 * i, 2 * j, b[0]);
            out.set(2 * i, 2 * j + 1, b[1]);
            out.set(2 * i + 1, 2 * j, b[2]);
            out.set(2 * i + 1, 2 * j + 1, b[3]);
        }
    }
    out
}

pub fn su_decode(ext: &QuadExt, m: &Matrix) -> Option<Vec<QuadElem>> {
    let f = &ext.base;
    if m.n() % 2 != 0 {
        return None;
    }
    let k = m.n() / 2;
    let mut z = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let (a, sb, b, d) = (m.get(2 * i, 2 * j), m.get(2 * i, 2 * j + 1), m.get(2 * i + 1, 2 * j), m.get(2 * i + 1, 2 * j + 1));
            if a != d || sb != f.mul(ext.s, b) {
                return None;
            }
            z.push(QuadElem { a, b });
        }
    }
    Some(z)
}

fn identity_quad(ext: &QuadExt, k: usize) -> Vec<QuadElem> {
    (0..k * k).map(|i| if i % (k + 1) == 0 { ext.one() } else { ext.zero() }).collect()
}

/// Greedy generating set for SU₂(q) with respect to the identity Hermitian
/// form: scan (α, β; −β̄, ᾱ) in code order and keep an element whenever it
/// enlarges the generated subgroup. Each entry is returned as [z00, z01, z10, z11].
fn su2_generators(ext: &QuadExt) -> Result<Vec<[QuadElem; 4]>> {
    let f = &ext.base;
    let q = f.q() as usize;
    let target = q * q * q - q;
    let mut chosen: Vec<[QuadElem; 4]> = Vec::new();
    let mut size = 1usize;
    let elems: Vec<QuadElem> = ext.elements().collect();
    for &alpha in &elems {
        for &beta in &elems {
            if f.add(ext.norm(alpha), ext.norm(beta)) != FieldElem::ONE {
                continue;
            }
            let z = [alpha, beta, ext.neg(&ext.conj(beta)), ext.conj(alpha)];
            let mut trial = chosen.clone();
            trial.push(z);
            let mats: Vec<Matrix> = std::iter::once(Matrix::identity(4))
                .chain(trial.iter().flat_map(|z| {
                    let m = su_encode(ext, 2, z);
                    let mi = m.inverse(f).expect("unitary matrices are invertible");
                    [m, mi]
                }))
                .collect();
            let ball = closure(f, &mats, &Limits::elements(target + 1))?;
            if ball.len() > size {
                size = ball.len();
                chosen = trial;
                if size == target {
                    return Ok(chosen);
                }
            }
        }
    }
    Err(Error::GeneratorVerificationFailed { expected: target.to_string(), found: size })
}

/// Adjacent-transvection Lie elements (E_{i,i+1}, E_{i+1,i}) for SL_k.
fn sl_simple_roots(f: &Field, k: usize) -> Vec<(Matrix, Matrix)> {
    (0..k - 1)
        .map(|i| {
            let mut up = Matrix::zero(k);
            up.set(i, i + 1, FieldElem::ONE);
            let mut down = Matrix::zero(k);
            down.set(i + 1, i, FieldElem::ONE);
            let _ = f;
            (up, down)
        })
        .collect()
}

/// exp(X) = Σ X^j / j! for nilpotent X with X^p = 0.
pub fn exp_nilpotent(f: &Field, x: &Matrix) -> Matrix {
    let n = x.n();
    let mut acc = Matrix::identity(n);
    let mut power = Matrix::identity(n);
    let mut fact = FieldElem::ONE;
    for j in 1..f.p() as u64 {
        power = power.mul(f, x);
        if power.is_zero() {
            return acc;
        }
        fact = f.mul(fact, f.from_int(j as i64));
        acc = acc.add(f, &power.scale(f, f.inv(fact).expect("j < p")));
    }
    debug_assert!(power.mul(f, x).is_zero(), "exp needs X^p = 0");
    acc
}

/// The reflection x ↦ x − 2 B(x, v)/B(v, v) · v for B(x, y) = xᵀMy.
fn reflection(f: &Field, m: &Matrix, v: &[FieldElem]) -> Result<Matrix> {
    let mv = m.mul_vec(f, v);
    let bvv = v.iter().zip(&mv).fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
    let c = f.div(f.from_int(2), bvv)?;
    let n = v.len();
    let mut out = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, f.sub(out.get(i, j), f.mul(c, f.mul(v[i], mv[j]))));
        }
    }
    Ok(out)
}

/// Pairs of polynomials (a, b) standing for a + bζ with ζ² = s; lets the
/// symbolic determinant run over F_{q²}-valued coordinates.
pub(crate) struct QuadPolyRing {
    pub(crate) ring: PolyRing,
    pub(crate) s: FieldElem,
}

impl Arith for QuadPolyRing {
    type E = (Poly, Poly);
    fn zero(&self) -> Self::E {
        (self.ring.zero(), self.ring.zero())
    }
    fn one(&self) -> Self::E {
        (self.ring.one(), self.ring.zero())
    }
    fn add(&self, x: &Self::E, y: &Self::E) -> Self::E {
        (self.ring.add(&x.0, &y.0), self.ring.add(&x.1, &y.1))
    }
    fn sub(&self, x: &Self::E, y: &Self::E) -> Self::E {
        (self.ring.sub(&x.0, &y.0), self.ring.sub(&x.1, &y.1))
    }
    fn mul(&self, x: &Self::E, y: &Self::E) -> Self::E {
        let f = &self.ring.field;
        let a = x.0.mul(f, &y.0).add(f, &x.1.mul(f, &y.1).scale(f, self.s));
        let b = x.0.mul(f, &y.1).add(f, &x.1.mul(f, &y.0));
        (a, b)
    }
    fn neg(&self, x: &Self::E) -> Self::E {
        (self.ring.neg(&x.0), self.ring.neg(&x.1))
    }
    fn inv(&self, _: &Self::E) -> Result<Self::E> {
        Err(Error::DivisionByZero)
    }
}

/// A finite set A ⊆ G(F_q) in a fixed order. The order matters: BFS and
/// escape searches break ties by generator index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSet {
    elements: Vec<Matrix>,
    pub label: String,
}

impl GenSet {
    /// Validates membership and drops repeats, keeping first occurrences.
    pub fn new(spec: &GroupSpec, elems: Vec<Matrix>, label: &str) -> Result<GenSet> {
        let mut seen = std::collections::HashSet::new();
        let mut elements = Vec::with_capacity(elems.len());
        for m in elems {
            if !spec.contains(&m)? {
                return Err(Error::NotInGroup);
            }
            if seen.insert(m.clone()) {
                elements.push(m);
            }
        }
        Ok(GenSet { elements, label: label.to_string() })
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains_e(&self) -> bool {
        self.elements.iter().any(|m| m.is_identity())
    }

    pub fn is_symmetric(&self, f: &Field) -> bool {
        let set: std::collections::HashSet<&Matrix> = self.elements.iter().collect();
        self.elements.iter().all(|m| m.inverse(f).map(|mi| set.contains(&mi)).unwrap_or(false))
    }

    /// Puts e in front if missing.
    pub fn with_identity(mut self) -> GenSet {
        if !self.contains_e() {
            let n = self.elements.first().map(|m| m.n()).unwrap_or(0);
            self.elements.insert(0, Matrix::identity(n));
        }
        self
    }

    /// Appends missing inverses, each right after its element.
    pub fn symmetrized(&self, f: &Field) -> GenSet {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for m in &self.elements {
            for x in [m.clone(), m.inverse(f).expect("group elements are invertible")] {
                if seen.insert(x.clone()) {
                    out.push(x);
                }
            }
        }
        GenSet { elements: out, label: format!("{}+inverses", self.label) }
    }

    pub fn from_trusted(elements: Vec<Matrix>, label: &str) -> GenSet {
        GenSet { elements, label: label.to_string() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::matrix::Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Field {
        make_field(p, 1).unwrap()
    }

    #[test]
    fn make_group_examples() {
        let g = make_group(Family::SL, 1, &f(5), Embedding::Usual).unwrap();
        assert_eq!((g.n, g.delta, g.iota, g.rank), (2, 3, 1, 1));
        let g = make_group(Family::Sp, 2, &f(3), Embedding::Usual).unwrap();
        assert_eq!((g.n, g.delta), (4, 10));
        assert_eq!(g.form.as_ref().unwrap(), &form_m3(&f(3), 2));
        assert!(matches!(
            make_group(Family::SOEvenPlus, 4, &make_field(2, 1).unwrap(), Embedding::Usual),
            Err(Error::CharacteristicTwoOrthogonal)
        ));
        assert!(matches!(make_group(Family::Sp, 1, &f(3), Embedding::Usual), Err(Error::RankTooSmall { .. })));
        assert!(matches!(make_group(Family::SOOdd, 2, &f(3), Embedding::Usual), Err(Error::RankTooSmall { .. })));
        assert!(matches!(make_group(Family::Sp, 2, &f(3), Embedding::BlockContragredient), Err(Error::UnsupportedFamily(_))));
        let b = make_group(Family::SL, 2, &f(5), Embedding::BlockContragredient).unwrap();
        assert_eq!((b.n, b.delta, b.iota), (6, 8, 1));
        let u = make_group(Family::SL, 2, &f(5), Embedding::Usual).unwrap();
        assert_eq!(u.iota, 2);
    }

    #[test]
    fn dimension_table() {
        for r in 1..6u64 {
            let sl = GroupSpec::new_relaxed(Family::SL, r as u32, &f(3), Embedding::Usual).unwrap();
            assert_eq!(sl.delta, r * r + 2 * r);
            let sp = GroupSpec::new_relaxed(Family::Sp, r as u32, &f(3), Embedding::Usual).unwrap();
            let so = GroupSpec::new_relaxed(Family::SOOdd, r as u32, &f(3), Embedding::Usual).unwrap();
            assert_eq!(sp.delta, 2 * r * r + r);
            assert_eq!(so.delta, sp.delta);
            if r >= 2 {
                let se = GroupSpec::new_relaxed(Family::SOEvenPlus, r as u32, &f(3), Embedding::Usual).unwrap();
                assert_eq!(se.delta, 2 * r * r - r);
            }
        }
    }

    #[test]
    fn contains_examples() {
        let g = make_group(Family::SL, 1, &f(5), Embedding::Usual).unwrap();
        assert!(g.contains(&Matrix::identity(2)).unwrap());
        assert!(!g.contains(&Matrix::from_ints(&f(5), 2, &[2, 0, 0, 2]).unwrap()).unwrap());
        assert!(g.contains(&Matrix::identity(3)).is_err());
        let sp = make_group(Family::Sp, 2, &f(3), Embedding::Usual).unwrap();
        assert!(sp.contains(sp.form.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn orders_match_brute_force_for_sl2() {
        for p in [2u64, 3, 5, 7] {
            let field = f(p);
            let g = make_group(Family::SL, 1, &field, Embedding::Usual).unwrap();
            let mut count = 0u64;
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    for c in 0..p as i64 {
                        for d in 0..p as i64 {
                            if (a * d - b * c).rem_euclid(p as i64) == 1 {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(g.order(), BigUint::from(count));
        }
        assert_eq!(make_group(Family::SL, 1, &f(3), Embedding::Usual).unwrap().order(), BigUint::from(24u32));
        assert_eq!(make_group(Family::SL, 1, &f(5), Embedding::Usual).unwrap().order(), BigUint::from(120u32));
        assert_eq!(make_group(Family::Sp, 2, &f(3), Embedding::Usual).unwrap().order(), BigUint::from(51840u32));
        assert_eq!(su_embed(2, &f(3)).unwrap().order(), BigUint::from(24u32));
    }

    #[test]
    fn sl2_generators_match_listing() {
        let field = f(5);
        let g = make_group(Family::SL, 1, &field, Embedding::Usual).unwrap();
        let gens = g.standard_generators().unwrap();
        let expect: Vec<Matrix> = [[1, 0, 0, 1], [1, 1, 0, 1], [1, -1, 0, 1], [1, 0, 1, 1], [1, 0, -1, 1]]
            .iter()
            .map(|v| Matrix::from_ints(&field, 2, v).unwrap())
            .collect();
        assert_eq!(gens.elements(), expect.as_slice());
        assert!(gens.contains_e());
        assert!(gens.is_symmetric(&field));
    }

    #[test]
    fn generators_verify_by_closure() {
        let cases: Vec<GroupSpec> = vec![
            make_group(Family::SL, 1, &f(3), Embedding::Usual).unwrap(),
            make_group(Family::SL, 1, &make_field(2, 2).unwrap(), Embedding::Usual).unwrap(),
            make_group(Family::SL, 1, &make_field(3, 2).unwrap(), Embedding::Usual).unwrap(),
            make_group(Family::SL, 2, &f(3), Embedding::Usual).unwrap(),
            make_group(Family::SL, 1, &f(5), Embedding::BlockContragredient).unwrap(),
            make_group(Family::Sp, 2, &f(3), Embedding::Usual).unwrap(),
            make_group(Family::Sp, 2, &make_field(2, 1).unwrap(), Embedding::Usual).unwrap(),
            GroupSpec::new_relaxed(Family::Sp, 1, &f(5), Embedding::Usual).unwrap(),
            GroupSpec::new_relaxed(Family::SOOdd, 1, &f(5), Embedding::Usual).unwrap(),
            GroupSpec::new_relaxed(Family::SOOdd, 2, &f(3), Embedding::Usual).unwrap(),
            GroupSpec::new_relaxed(Family::SOEvenPlus, 2, &f(3), Embedding::Usual).unwrap(),
            GroupSpec::new_relaxed(Family::SOEvenPlus, 3, &f(3), Embedding::Usual).unwrap(),
            su_embed(2, &f(3)).unwrap(),
            su_embed(2, &f(5)).unwrap(),
            su_embed(3, &f(3)).unwrap(),
        ];
        for g in cases {
            let gens = g.standard_generators().unwrap_or_else(|e| panic!("{}: {e}", g.label()));
            assert!(gens.contains_e());
            assert!(gens.is_symmetric(&g.field), "{}", g.label());
        }
    }

    #[test]
    fn root_elements_are_in_the_lie_algebra() {
        let specs = [
            make_group(Family::Sp, 3, &f(5), Embedding::Usual).unwrap(),
            make_group(Family::SOOdd, 3, &f(5), Embedding::Usual).unwrap(),
            make_group(Family::SOEvenPlus, 4, &f(5), Embedding::Usual).unwrap(),
        ];
        for g in &specs {
            let roots = g.simple_root_lie_elements();
            assert_eq!(roots.len(), g.rank as usize);
            for (a, b) in roots {
                assert!(g.lie_contains(&a).unwrap() && g.lie_contains(&b).unwrap(), "{}", g.label());
                assert!(g.contains(&exp_nilpotent(&g.field, &a)).unwrap());
            }
            let gens = g.standard_generators_unverified().unwrap();
            assert!(gens.elements().iter().all(|m| g.contains(m).unwrap()));
        }
    }

    #[test]
    fn lie_dimension_is_delta() {
        let specs = [
            make_group(Family::SL, 2, &f(5), Embedding::Usual).unwrap(),
            make_group(Family::SL, 2, &f(5), Embedding::BlockContragredient).unwrap(),
            make_group(Family::Sp, 2, &f(5), Embedding::Usual).unwrap(),
            make_group(Family::SOOdd, 3, &f(3), Embedding::Usual).unwrap(),
            make_group(Family::SOEvenPlus, 4, &f(3), Embedding::Usual).unwrap(),
            su_embed(3, &f(5)).unwrap(),
        ];
        for g in &specs {
            assert_eq!(g.lie_dimension() as u64, g.delta, "{}", g.label());
        }
    }

    #[test]
    fn lie_examples() {
        let field = f(5);
        let sp2 = GroupSpec::new_relaxed(Family::Sp, 1, &field, Embedding::Usual).unwrap();
        let x = Matrix::from_ints(&field, 2, &[1, 0, 0, -1]).unwrap();
        assert!(sp2.lie_contains(&x).unwrap());
        assert!(bracket(&field, &x, &x).unwrap().is_zero());
        assert_eq!(sp2.adjoint(&Matrix::identity(2), &x).unwrap(), x);
        let not_in = Matrix::from_ints(&field, 2, &[2, 0, 0, 2]).unwrap();
        assert_eq!(sp2.adjoint(&not_in, &x).unwrap_err().to_string(), Error::NotInGroup.to_string());
    }

    #[test]
    fn cayley_examples() {
        let field = f(5);
        let sp2 = GroupSpec::new_relaxed(Family::Sp, 1, &field, Embedding::Usual).unwrap();
        assert!(sp2.cayley(&Matrix::zero(2)).unwrap().is_identity());
        let x = Matrix::from_ints(&field, 2, &[1, 0, 0, 4]).unwrap();
        assert!(matches!(sp2.cayley(&x), Err(Error::OnSingularLocus)));
        let y = Matrix::from_ints(&field, 2, &[0, 1, 0, 0]).unwrap();
        let g = sp2.cayley(&y).unwrap();
        assert!(sp2.contains(&g).unwrap());
        assert_eq!(sp2.cayley(&g).unwrap(), y);
        let sl = make_group(Family::SL, 1, &field, Embedding::Usual).unwrap();
        assert!(matches!(sl.cayley(&y), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn contragredient_examples() {
        let field = f(5);
        assert!(contragredient_embed(&field, &Matrix::identity(2)).unwrap().is_identity());
        let u = Matrix::from_ints(&field, 2, &[1, 1, 0, 1]).unwrap();
        let e = contragredient_embed(&field, &u).unwrap();
        assert_eq!(e.block(2, 2, 2), Matrix::from_ints(&field, 2, &[1, 0, -1, 1]).unwrap());
        let block = make_group(Family::SL, 1, &field, Embedding::BlockContragredient).unwrap();
        assert!(block.contains(&e).unwrap());
        assert!(matches!(contragredient_embed(&field, &Matrix::from_ints(&field, 2, &[2, 0, 0, 2]).unwrap()), Err(Error::NotInSL)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sl = make_group(Family::SL, 2, &field, Embedding::Usual).unwrap();
        let gens = sl.standard_generators().unwrap();
        for _ in 0..200 {
            let a = random_word(&field, gens.elements(), &mut rng);
            let b = random_word(&field, gens.elements(), &mut rng);
            let lhs = contragredient_embed(&field, &a.mul(&field, &b)).unwrap();
            let rhs = contragredient_embed(&field, &a).unwrap().mul(&field, &contragredient_embed(&field, &b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    fn random_word(f: &Field, gens: &[Matrix], rng: &mut ChaCha8Rng) -> Matrix {
        let mut m = Matrix::identity(gens[0].n());
        for _ in 0..rng.random_range(0..40) {
            m = m.mul(f, &gens[rng.random_range(0..gens.len())]);
        }
        m
    }

    #[test]
    fn su_block_example() {
        let field = f(3);
        let su = su_embed(2, &field).unwrap();
        let ext = su.ext.as_ref().unwrap();
        assert_eq!(ext.s, FieldElem::from_code_unchecked(2));
        let z = QuadElem { a: FieldElem::ONE, b: FieldElem::ONE };
        let blk = su_block(ext, z);
        assert_eq!(blk.map(|e| e.code()), [1, 2, 1, 1]);
    }

    #[test]
    fn su_encoding_is_multiplicative() {
        let field = make_field(3, 1).unwrap();
        let ext = QuadExt::new(&field).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let elems: Vec<QuadElem> = ext.elements().collect();
        for _ in 0..500 {
            let a: Vec<QuadElem> = (0..4).map(|_| elems[rng.random_range(0..9)]).collect();
            let b: Vec<QuadElem> = (0..4).map(|_| elems[rng.random_range(0..9)]).collect();
            let mut ab = vec![ext.zero(); 4];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        ab[i * 2 + j] = ext.add(&ab[i * 2 + j], &ext.mul(&a[i * 2 + k], &b[k * 2 + j]));
                    }
                }
            }
            let lhs = su_encode(&ext, 2, &ab);
            let rhs = su_encode(&ext, 2, &a).mul(&field, &su_encode(&ext, 2, &b));
            assert_eq!(lhs, rhs);
            assert_eq!(su_decode(&ext, &lhs).unwrap(), ab);
        }
    }

    #[test]
    fn closure_under_products_and_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let specs = [
            make_group(Family::SL, 1, &f(7), Embedding::Usual).unwrap(),
            make_group(Family::SL, 1, &f(5), Embedding::BlockContragredient).unwrap(),
            make_group(Family::Sp, 2, &f(3), Embedding::Usual).unwrap(),
            make_group(Family::SOOdd, 3, &f(3), Embedding::Usual).unwrap(),
            su_embed(3, &f(3)).unwrap(),
        ];
        for g in &specs {
            let gens = g.standard_generators_unverified().unwrap();
            for _ in 0..2_000 {
                let a = random_word(&g.field, gens.elements(), &mut rng);
                let b = random_word(&g.field, gens.elements(), &mut rng);
                assert!(g.contains(&a.mul(&g.field, &b)).unwrap());
                assert!(g.contains(&a.inverse(&g.field).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn defining_polys_agree_with_contains() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let specs = [
            make_group(Family::SL, 1, &f(3), Embedding::Usual).unwrap(),
            make_group(Family::SL, 1, &f(3), Embedding::BlockContragredient).unwrap(),
            GroupSpec::new_relaxed(Family::Sp, 1, &f(3), Embedding::Usual).unwrap(),
            GroupSpec::new_relaxed(Family::SOOdd, 1, &f(3), Embedding::Usual).unwrap(),
            su_embed(2, &f(3)).unwrap(),
        ];
        for g in &specs {
            let polys = g.defining_polys();
            let gens = g.standard_generators_unverified().unwrap();
            let vanish = |m: &Matrix| polys.iter().all(|p| p.eval(&g.field, m.entries()).unwrap().is_zero());
            for _ in 0..300 {
                let m = random_word(&g.field, gens.elements(), &mut rng);
                assert!(vanish(&m), "{}", g.label());
                let data = (0..g.n * g.n).map(|_| g.field.from_int(rng.random_range(0..3))).collect();
                let r = Matrix::from_entries(&g.field, g.n, data).unwrap();
                assert_eq!(vanish(&r), g.contains(&r).unwrap(), "{}", g.label());
            }
        }
    }
}
