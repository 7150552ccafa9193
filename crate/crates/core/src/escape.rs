//! Escape from subvarieties: the shortest word g in A with g·x ∉ V, measured
//! against 2D^{d+1} (or d + 1 when D = 1).

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{bfs_until, Limits};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::groups::{Embedding, Family, GenSet, GroupSpec};
use crate::ledger::LedgerTerm;
use crate::matrix::Matrix;
use crate::varieties::{
    conjugacy_class_variety, diagonal_torus, hyperplane, is_regular_semisimple, nonregular_locus, point_variety, View,
    VarietySpec,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeResult {
    pub variety: String,
    /// Row-major entry codes of g.
    pub witness: Vec<u32>,
    /// Generator indices, left to right.
    pub word: Vec<u32>,
    pub k: u64,
    pub bound_k: String,
    pub escaped: bool,
    #[serde(skip)]
    pub witness_matrix: Option<Matrix>,
}

/// d + 1 when D = 1, else 2D^{d+1}.
pub fn escape_bound(dim: u64, degree: &LedgerTerm) -> LedgerTerm {
    if degree.is_one() {
        LedgerTerm::from_u64(dim + 1)
    } else {
        LedgerTerm::from_u64(2).mul(&degree.pow_u64(dim + 1))
    }
}

fn require_identity(a: &GenSet) -> Result<()> {
    if a.contains_e() {
        Ok(())
    } else {
        Err(Error::IdentityMissing)
    }
}

fn product(f: &Field, a: &GenSet, word: &[u32]) -> Matrix {
    let n = a.elements()[0].n();
    word.iter().fold(Matrix::identity(n), |acc, &i| acc.mul(f, &a.elements()[i as usize]))
}

/// Breadth-first search over words in A for the first g (by layer, then by
/// generator order) with g·x ∉ V.
pub fn escape(spec: &GroupSpec, a: &GenSet, v: &VarietySpec, x: &Matrix, limits: &Limits) -> Result<EscapeResult> {
    require_identity(a)?;
    if !spec.contains(x)? {
        return Err(Error::NotInGroup);
    }
    let f = &spec.field;
    let mut err = None;
    let (ball, hit) = bfs_until(f, a.elements(), limits, |_, g| match v.contains(&g.mul(f, x)) {
        Ok(inside) => !inside,
        Err(e) => {
            err.get_or_insert(e);
            true
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let Some(i) = hit else {
        return Err(if ball.is_saturated() {
            Error::NoEscapePossible
        } else {
            Error::BudgetExceeded { what: "escape search".into(), needed: "larger radius".into(), budget: ball.len() as u64 }
        });
    };
    let k = ball.layer_of(i) as u64;
    let bound = escape_bound(v.dim, &v.degree);
    let word = ball.word(i);
    let g = product(f, a, &word);
    debug_assert_eq!(&g, ball.get(i));
    let escaped = !v.contains(&g.mul(f, x))?;
    if LedgerTerm::from_u64(k.max(1)) > bound {
        return Err(Error::BoundViolated { k, bound: bound.to_string() });
    }
    Ok(EscapeResult {
        variety: v.label.clone(),
        witness: g.codes(),
        word,
        k,
        bound_k: bound.to_string(),
        escaped,
        witness_matrix: Some(g),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularSemisimpleResult {
    pub witness: Vec<u32>,
    pub word: Vec<u32>,
    pub k: u64,
    /// 2·(n(n−1))^δ
    pub bound_k: String,
    /// n²·(n(n−1))^{n²}
    pub loose_bound_k: String,
    /// log10(bound_k / k)
    pub log10_slack: f64,
    #[serde(skip)]
    pub witness_matrix: Option<Matrix>,
}

/// First regular semisimple element of ⟨A⟩ in BFS order.
pub fn find_regular_semisimple(spec: &GroupSpec, a: &GenSet, limits: &Limits) -> Result<RegularSemisimpleResult> {
    require_identity(a)?;
    let f = &spec.field;
    let view = View::of(spec);
    let mut err = None;
    let (ball, hit) = bfs_until(f, a.elements(), limits, |_, g| match view.discriminant(f, g) {
        Ok(d) => !(d.a.is_zero() && d.b.is_zero()),
        Err(e) => {
            err.get_or_insert(e);
            true
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let Some(i) = hit else {
        return Err(if ball.is_saturated() {
            Error::NoRegularSemisimple
        } else {
            Error::BudgetExceeded { what: "regular semisimple search".into(), needed: "larger radius".into(), budget: ball.len() as u64 }
        });
    };
    let n = spec.n as u64;
    let w = LedgerTerm::from_u64(n * (n - 1));
    let bound = LedgerTerm::from_u64(2).mul(&w.pow_u64(spec.delta));
    let loose = LedgerTerm::from_u64(n * n).mul(&w.pow_u64(n * n));
    let k = ball.layer_of(i) as u64;
    if LedgerTerm::from_u64(k.max(1)) > bound {
        return Err(Error::BoundViolated { k, bound: bound.to_string() });
    }
    let word = ball.word(i);
    let g = ball.get(i).clone();
    debug_assert!(is_regular_semisimple(spec, &g).unwrap_or(false));
    Ok(RegularSemisimpleResult {
        witness: g.codes(),
        word,
        k,
        bound_k: bound.to_string(),
        loose_bound_k: loose.to_string(),
        log10_slack: bound.log10() - (k.max(1) as f64).log10(),
        witness_matrix: Some(g),
    })
}

/// The specs on which regular semisimple elements are searched for by
/// default: the smallest admissible rank of every family and embedding (and
/// SL₃, SU₃), over every field with q ≤ `max_q` the family allows.
pub fn regular_semisimple_catalog(max_q: u32) -> Result<Vec<GroupSpec>> {
    let mut out = Vec::new();
    let shapes: [(Family, u32, Embedding); 8] = [
        (Family::SL, 1, Embedding::Usual),
        (Family::SL, 2, Embedding::Usual),
        (Family::SL, 1, Embedding::BlockContragredient),
        (Family::Sp, 2, Embedding::Usual),
        (Family::SOOdd, 3, Embedding::Usual),
        (Family::SOEvenPlus, 4, Embedding::Usual),
        (Family::SUTwisted, 1, Embedding::Usual),
        (Family::SUTwisted, 2, Embedding::Usual),
    ];
    for q in 2..=max_q as u64 {
        let Some((p, k)) = prime_power(q) else { continue };
        let field = crate::field::make_field(p, k)?;
        for &(fam, r, emb) in &shapes {
            match crate::groups::make_group(fam, r, &field, emb) {
                Ok(g) => out.push(g),
                Err(Error::CharacteristicTwoOrthogonal | Error::EvenCharacteristic) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// (p, k) with q = p^k, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let fs = crate::field::prime_factors(q);
    let p = *fs.first()?;
    if fs.iter().any(|&x| x != p) {
        return None;
    }
    let mut k = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    Some((p, k))
}

/// A random element of ⟨A⟩: a word of the given length.
pub fn random_element(f: &Field, a: &GenSet, len: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let gens = a.elements();
    (0..len).fold(Matrix::identity(gens[0].n()), |acc, _| acc.mul(f, gens.choose(rng).expect("nonempty")))
}

/// Reproducible (V, x) pairs drawn from the built-in varieties: torus,
/// non-regular locus, a class variety, a random hyperplane of Mat_n, and a
/// single point. Every other round of five picks x inside V (by rejection
/// over random words, else a known point of V), so that escaping is not
/// trivial.
pub fn sample_instances(spec: &GroupSpec, a: &GenSet, count: usize, seed: u64) -> Result<Vec<(VarietySpec, Matrix)>> {
    let f = &spec.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let torus = diagonal_torus(spec);
    let locus = nonregular_locus(spec);
    let e = Matrix::identity(spec.n);
    while out.len() < count {
        let inside = (out.len() / 5) % 2 == 0;
        let mut x = random_element(f, a, 40, &mut rng);
        let (v, known) = match out.len() % 5 {
            0 => (torus.clone(), Some(e.clone())),
            1 => (locus.clone(), Some(e.clone())),
            2 => {
                let y = random_element(f, a, 40, &mut rng);
                if !is_regular_semisimple(spec, &y)? {
                    continue;
                }
                (conjugacy_class_variety(spec, &y)?, Some(y))
            }
            3 => {
                let nn = spec.n * spec.n;
                let coeffs: Vec<FieldElem> = (0..nn).map(|_| random_elem(f, &mut rng)).collect();
                if coeffs.iter().all(|c| c.is_zero()) {
                    continue;
                }
                (hyperplane(f, spec.n, &coeffs, random_elem(f, &mut rng))?, None)
            }
            _ => {
                let y = random_element(f, a, 40, &mut rng);
                (point_variety(f, &y), Some(y))
            }
        };
        if inside && !v.contains(&x)? {
            let mut found = false;
            for _ in 0..INSIDE_TRIES {
                let y = random_element(f, a, 40, &mut rng);
                if v.contains(&y)? {
                    x = y;
                    found = true;
                    break;
                }
            }
            if !found {
                if let Some(k) = known {
                    x = k;
                }
            }
        }
        out.push((v, x));
    }
    Ok(out)
}

const INSIDE_TRIES: usize = 64;

fn random_elem(f: &Field, rng: &mut ChaCha8Rng) -> FieldElem {
    f.from_code(rng.random_range(0..f.q())).expect("code below q")
}
