//! Exact point counts checked against the counting bounds: the order
//! sandwich, D·q^d for varieties, the escape thresholds, conjugate tori, and
//! the Lie algebra and Cayley-map censuses.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::enumerate::{ambient_walk, enumerate_group, EnumMethod, AMBIENT_CAP};
use crate::error::{Error, Result};
use crate::groups::{cayley_map, Family, GroupSpec};
use crate::ledger::LedgerTerm;
use crate::matrix::Matrix;
use crate::varieties::{conjugate_torus_key, torus_points, VarietySpec};

/// One checked inequality. Counts and bounds are decimal strings so that
/// values beyond u64 survive serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub target: String,
    pub check: String,
    /// The bound in symbols, e.g. "count <= D*q^d".
    pub formula: String,
    pub count: String,
    pub bound: String,
    pub satisfied: bool,
    pub method: EnumMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CensusReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Where points are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// All of Mat_n(F_q), capped at 3^16 matrices.
    Ambient,
    /// Only G(F_q), enumerated by closure.
    Group,
}

fn biguint_of(t: &LedgerTerm) -> BigUint {
    t.to_biguint(1 << 16).expect("desk-scale bounds fit the expansion cap")
}

/// q^{δ−r}(q−1)^r ≤ |G(F_q)| ≤ 2q^δ, with the order from the closed formula.
pub fn check_group_bounds(spec: &GroupSpec) -> CensusReport {
    let q = BigUint::from(spec.q());
    let r = spec.rank as u32;
    let delta = spec.delta as u32;
    let order = spec.order();
    let lower = q.pow(delta - r) * (&q - BigUint::one()).pow(r);
    let upper = BigUint::from(2u32) * q.pow(delta);
    CensusReport {
        target: spec.label(),
        check: "order_sandwich".into(),
        formula: "q^(delta-r)*(q-1)^r <= |G| <= 2*q^delta".into(),
        count: order.to_string(),
        bound: format!("[{lower}, {upper}]"),
        satisfied: lower <= order && order <= upper,
        method: EnumMethod::BfsClosure,
        note: None,
    }
}

/// Number of points of `v` among `points`.
pub fn count_in(v: &VarietySpec, points: &[Matrix]) -> Result<u64> {
    let mut c = 0;
    for m in points {
        if v.contains(m)? {
            c += 1;
        }
    }
    Ok(c)
}

/// Exhaustive |V(F_q)| (inside G(F_q) or all of Mat_n) against D·q^d.
pub fn check_point_upper(v: &VarietySpec, spec: &GroupSpec, scope: Scope, budget: usize) -> Result<CensusReport> {
    let (count, method) = match scope {
        Scope::Group => {
            let pts = enumerate_group(spec, EnumMethod::BfsClosure, budget)?;
            (count_in(v, &pts)?, EnumMethod::BfsClosure)
        }
        Scope::Ambient => {
            let mut c = 0u64;
            let mut err = None;
            ambient_walk(&spec.field, v.n, AMBIENT_CAP.min(budget as u64), |m| match v.contains(m) {
                Ok(true) => c += 1,
                Ok(false) => {}
                Err(e) => err = Some(e),
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            (c, EnumMethod::AmbientFilter)
        }
    };
    Ok(point_report(v, spec, count, method))
}

/// Builds the D·q^d report for a count obtained elsewhere.
pub fn point_report(v: &VarietySpec, spec: &GroupSpec, count: u64, method: EnumMethod) -> CensusReport {
    let bound = v.point_bound();
    let satisfied = count == 0 || LedgerTerm::from_u64(count) <= bound;
    CensusReport {
        target: format!("{} in {}", v.label, spec.label()),
        check: "point_upper".into(),
        formula: "|V(F_q)| <= D*q^d".into(),
        count: count.to_string(),
        bound: biguint_of(&bound).to_string(),
        satisfied,
        method,
        note: Some(format!("d = {}, D = {}", v.dim, v.degree)),
    }
}

/// The three field-size thresholds above which G(F_q) ⊄ V for a proper
/// subvariety V of degree D.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub q: u32,
    pub rank: u32,
    pub degree: String,
    /// q > r + Δ·D, with Δ replaced by Δ_bound = 2^{n²}·n.
    pub langweil: String,
    pub langweil_holds: bool,
    /// q ≥ 5(r + 1)²D.
    pub lwchev: String,
    pub lwchev_holds: bool,
    /// q > r + 4D.
    pub lw4: String,
    pub lw4_holds: bool,
    pub delta_substituted: bool,
    /// For enumerated groups: whether some g ∈ G(F_q) lies outside V.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escapes: Option<bool>,
    /// False when a threshold held but G(F_q) ⊆ V.
    pub consistent: bool,
}

/// Threshold values for degree `big_d`; with `points` given, also the
/// empirical verdict that G(F_q) ⊄ V.
pub fn escape_thresholds(spec: &GroupSpec, v: &VarietySpec, points: Option<&[Matrix]>) -> Result<Thresholds> {
    if v.degree < LedgerTerm::one() {
        return Err(Error::OutOfRange("degree must be at least 1".into()));
    }
    let q = spec.q();
    let r = spec.rank as u64;
    let big_d = biguint_of(&v.degree);
    let langweil = BigUint::from(r) + biguint_of(&spec.degree_bound()) * &big_d;
    let lwchev = BigUint::from(5 * (r + 1) * (r + 1)) * &big_d;
    let lw4 = BigUint::from(r) + BigUint::from(4u32) * &big_d;
    let qb = BigUint::from(q);
    let (h1, h2, h3) = (qb > langweil, qb >= lwchev, qb > lw4);
    let escapes = match points {
        Some(pts) => Some(pts.iter().try_fold(false, |acc, m| Ok::<_, Error>(acc || !v.contains(m)?))?),
        None => None,
    };
    let consistent = !(h1 || h2 || h3) || escapes != Some(false);
    Ok(Thresholds {
        q,
        rank: spec.rank,
        degree: big_d.to_string(),
        langweil: langweil.to_string(),
        langweil_holds: h1,
        lwchev: lwchev.to_string(),
        lwchev_holds: h2,
        lw4: lw4.to_string(),
        lw4_holds: h3,
        delta_substituted: true,
        escapes,
        consistent,
    })
}

/// Conjugates hTh⁻¹ of the diagonal torus over all h ∈ G(F_q).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusCensus {
    pub target: String,
    /// Distinct conjugate tori (as algebraic subgroups, keyed by weight lines).
    pub conjugates: u64,
    /// Distinct point sets hT(F_q)h⁻¹; can be fewer when T(F_q) is small.
    pub point_set_conjugates: u64,
    pub torus_points: u64,
    /// |N(T)(F_q)|: the h fixing the torus.
    pub normalizer: u64,
    /// conjugates·(6r)^r ≥ q^{δ−r}
    pub count_bound: String,
    pub count_ok: bool,
    /// |N|/|T| ≤ r!·2^r, compared as |N| ≤ r!·2^r·|T|
    pub weyl_bound: u64,
    pub weyl_ok: bool,
}

impl TorusCensus {
    pub fn reports(&self) -> Vec<CensusReport> {
        vec![
            CensusReport {
                target: self.target.clone(),
                check: "torus_conjugates".into(),
                formula: "#conjugates >= q^(delta-r)/(6r)^r".into(),
                count: self.conjugates.to_string(),
                bound: self.count_bound.clone(),
                satisfied: self.count_ok,
                method: EnumMethod::BfsClosure,
                note: Some(format!("{} distinct point sets", self.point_set_conjugates)),
            },
            CensusReport {
                target: self.target.clone(),
                check: "weyl_factor".into(),
                formula: "|N(T)|/|T| <= r!*2^r".into(),
                count: format!("{}/{}", self.normalizer, self.torus_points),
                bound: self.weyl_bound.to_string(),
                satisfied: self.weyl_ok,
                method: EnumMethod::BfsClosure,
                note: None,
            },
        ]
    }

    pub fn all_ok(&self) -> bool {
        self.count_ok && self.weyl_ok
    }
}

/// Exhaustive torus census over an enumerated G(F_q). Not available for SU,
/// whose diagonal torus is not split.
pub fn torus_conjugate_census(spec: &GroupSpec, points: &[Matrix]) -> Result<TorusCensus> {
    if spec.family == Family::SUTwisted {
        return Err(Error::UnsupportedFamily("torus census needs a split torus".into()));
    }
    let f = &spec.field;
    let t = torus_points(spec, points)?;
    let base = conjugate_torus_key(spec, &Matrix::identity(spec.n))?;
    let mut keys = BTreeSet::new();
    let mut sets: HashSet<Vec<Matrix>> = HashSet::new();
    let mut normalizer = 0u64;
    for h in points {
        let k = conjugate_torus_key(spec, h)?;
        if k == base {
            normalizer += 1;
        }
        keys.insert(k);
        let hi = h.inverse(f)?;
        let mut set: Vec<Matrix> = t.iter().map(|x| h.mul(f, x).mul(f, &hi)).collect();
        set.sort();
        sets.insert(set);
    }
    let r = spec.rank as u64;
    let q = BigUint::from(spec.q());
    let conjugates = keys.len() as u64;
    let lhs = BigUint::from(conjugates) * BigUint::from(6 * r).pow(r as u32);
    let rhs = q.pow((spec.delta - r) as u32);
    let weyl_bound = (1..=r).product::<u64>() * (1u64 << r);
    Ok(TorusCensus {
        target: spec.label(),
        conjugates,
        point_set_conjugates: sets.len() as u64,
        torus_points: t.len() as u64,
        normalizer,
        count_bound: format!("{rhs}/{}", BigUint::from(6 * r).pow(r as u32)),
        count_ok: lhs >= rhs,
        weyl_bound,
        weyl_ok: normalizer <= weyl_bound * t.len() as u64,
    })
}

/// |𝔤(F_q)| against q^δ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieCensus {
    pub target: String,
    pub count: String,
    pub expected: String,
    /// "exhaustive" or "nullity"
    pub method: String,
    pub satisfied: bool,
}

/// Exhaustive when Mat_n(F_q) fits the ambient cap, otherwise q^{dim} with
/// dim the nullity of the (linear) defining conditions.
pub fn lie_census(spec: &GroupSpec) -> Result<LieCensus> {
    let expected = BigUint::from(spec.q()).pow(spec.delta as u32);
    let q = spec.q() as u64;
    let fits = q.checked_pow((spec.n * spec.n) as u32).is_some_and(|s| s <= AMBIENT_CAP);
    let (count, method) = if fits {
        let mut c = 0u64;
        ambient_walk(&spec.field, spec.n, AMBIENT_CAP, |x| {
            if spec.lie_residual(x).iter().all(|e| e.is_zero()) {
                c += 1;
            }
        })?;
        (BigUint::from(c), "exhaustive")
    } else {
        (BigUint::from(spec.q()).pow(spec.lie_dimension() as u32), "nullity")
    };
    Ok(LieCensus {
        target: format!("Lie({})", spec.label()),
        satisfied: count == expected,
        count: count.to_string(),
        expected: expected.to_string(),
        method: method.into(),
    })
}

/// The Cayley map between 𝔤 ∖ Z and G ∖ Z, Z = {det(I + x) = 0}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyCensus {
    pub target: String,
    pub lie_off_z: u64,
    pub group_off_z: u64,
    /// λ(X) ∈ G for every X ∈ 𝔤 ∖ Z
    pub lands_in_group: bool,
    /// λ(λ(X)) = X
    pub involution: bool,
    /// λ is injective and its image is exactly G ∖ Z
    pub bijection: bool,
}

impl CayleyCensus {
    pub fn all_ok(&self) -> bool {
        self.lands_in_group && self.involution && self.bijection && self.lie_off_z == self.group_off_z
    }
}

pub fn cayley_census(spec: &GroupSpec, group_points: &[Matrix]) -> Result<CayleyCensus> {
    if !matches!(spec.family, Family::Sp | Family::SOOdd | Family::SOEvenPlus) {
        return Err(Error::UnsupportedFamily(format!("no Cayley map for {}", spec.family)));
    }
    let f = &spec.field;
    let mut lie = Vec::new();
    ambient_walk(f, spec.n, AMBIENT_CAP, |x| {
        if spec.lie_residual(x).iter().all(|e| e.is_zero()) {
            lie.push(x.clone());
        }
    })?;
    let mut lands = true;
    let mut involution = true;
    let mut image = HashSet::new();
    let mut lie_off_z = 0u64;
    for x in &lie {
        let g = match cayley_map(f, x) {
            Ok(g) => g,
            Err(Error::OnSingularLocus) => continue,
            Err(e) => return Err(e),
        };
        lie_off_z += 1;
        lands &= spec.contains_unchecked(&g);
        involution &= cayley_map(f, &g).map(|y| &y == x).unwrap_or(false);
        image.insert(g);
    }
    let id = Matrix::identity(spec.n);
    let off_z: HashSet<&Matrix> = group_points.iter().filter(|g| !id.add(f, g).det(f).is_zero()).collect();
    let bijection = image.len() as u64 == lie_off_z && image.len() == off_z.len() && image.iter().all(|g| off_z.contains(g));
    Ok(CayleyCensus {
        target: spec.label(),
        lie_off_z,
        group_off_z: off_z.len() as u64,
        lands_in_group: lands,
        involution,
        bijection,
    })
}
