//! Breadth-first enumeration of products of a generating set, and brute-force
//! enumeration of G(F_q) inside Mat_n(F_q).

use indexmap::IndexSet;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::groups::GroupSpec;
use crate::matrix::Matrix;

/// Largest ambient Mat_n(F_q) the brute-force filter will walk.
pub const AMBIENT_CAP: u64 = 43_046_721; // 3^16

/// Stopping rules for a BFS.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Exceeding this many elements is a [`Error::BudgetExceeded`].
    pub max_elements: usize,
    /// Stop (successfully) after this radius.
    pub max_radius: Option<u32>,
    /// Worker threads for frontier expansion; 0 or 1 runs sequentially.
    pub threads: usize,
}

impl Limits {
    pub fn elements(max_elements: usize) -> Limits {
        Limits { max_elements, max_radius: None, threads: 1 }
    }

    pub fn radius(mut self, r: u32) -> Limits {
        self.max_radius = Some(r);
        self
    }

    pub fn threads(mut self, t: usize) -> Limits {
        self.threads = t;
        self
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::elements(5_000_000)
    }
}

const ROOT: u32 = u32::MAX;

/// The balls A^0 ⊆ A^1 ⊆ ... in discovery order.
///
/// Discovery order is deterministic: layer by layer, and inside a layer by
/// (parent index, generator index), so the first element satisfying a
/// predicate is the lexicographically least shortest word.
#[derive(Clone, Debug)]
pub struct Ball {
    elems: IndexSet<Matrix>,
    parent: Vec<(u32, u32)>,
    /// `layer_ends[m]` = |A^m|.
    layer_ends: Vec<usize>,
    saturated: bool,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// True once a layer added nothing, i.e. the ball is ⟨A⟩.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// |A^m| for m = 0, 1, ..., radius reached.
    pub fn sizes(&self) -> &[usize] {
        &self.layer_ends
    }

    /// Largest radius fully enumerated.
    pub fn radius(&self) -> u32 {
        self.layer_ends.len() as u32 - 1
    }

    pub fn elements(&self) -> impl Iterator<Item = &Matrix> {
        self.elems.iter()
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.elems[i]
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.elems.contains(m)
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.elems.get_index_of(m)
    }

    /// Elements of A^m (the first |A^m| in discovery order).
    pub fn within(&self, m: u32) -> impl ExactSizeIterator<Item = &Matrix> {
        let end = self.layer_ends[(m as usize).min(self.layer_ends.len() - 1)];
        self.elems.as_slice()[..end].iter()
    }

    /// Word length of element `i`.
    pub fn layer_of(&self, i: usize) -> u32 {
        self.layer_ends.partition_point(|&e| e <= i) as u32
    }

    /// Generator indices whose product (left to right) is element `i`.
    pub fn word(&self, mut i: usize) -> Vec<u32> {
        let mut w = Vec::new();
        while self.parent[i].0 != ROOT {
            let (p, g) = self.parent[i];
            w.push(g);
            i = p as usize;
        }
        w.reverse();
        w
    }

    pub fn into_set(self) -> IndexSet<Matrix> {
        self.elems
    }
}

/// Balls of A until saturation or the radius limit.
pub fn closure(f: &Field, gens: &[Matrix], limits: &Limits) -> Result<Ball> {
    Ok(bfs_until(f, gens, limits, |_, _| false)?.0)
}

/// BFS from e by right multiplication, stopping at the first element (in
/// discovery order, e included) for which `hit` is true.
pub fn bfs_until<P>(f: &Field, gens: &[Matrix], limits: &Limits, mut hit: P) -> Result<(Ball, Option<usize>)>
where
    P: FnMut(usize, &Matrix) -> bool,
{
    let n = gens.first().map(|g| g.n()).unwrap_or(0);
    let mut elems = IndexSet::new();
    elems.insert(Matrix::identity(n));
    let mut ball = Ball { elems, parent: vec![(ROOT, ROOT)], layer_ends: vec![1], saturated: false };
    if hit(0, ball.get(0)) {
        return Ok((ball, Some(0)));
    }
    let mut start = 0usize;
    loop {
        if let Some(r) = limits.max_radius {
            if ball.radius() >= r {
                return Ok((ball, None));
            }
        }
        let end = ball.len();
        let frontier: Vec<&Matrix> = ball.elems.as_slice()[start..end].iter().collect();
        let products = expand(f, &frontier, gens, limits.threads);
        let mut found = None;
        for (k, m) in products.into_iter().enumerate() {
            let (parent, g) = (start + k / gens.len(), k % gens.len());
            if ball.elems.contains(&m) {
                continue;
            }
            if ball.len() >= limits.max_elements {
                return Err(Error::BudgetExceeded {
                    what: "BFS closure".into(),
                    needed: format!("> {}", limits.max_elements),
                    budget: limits.max_elements as u64,
                });
            }
            let idx = ball.len();
            ball.elems.insert(m);
            ball.parent.push((parent as u32, g as u32));
            if found.is_none() && hit(idx, ball.get(idx)) {
                found = Some(idx);
                break;
            }
        }
        if let Some(i) = found {
            ball.layer_ends.push(ball.len());
            return Ok((ball, Some(i)));
        }
        if ball.len() == end {
            ball.saturated = true;
            return Ok((ball, None));
        }
        ball.layer_ends.push(ball.len());
        start = end;
    }
}

fn expand(f: &Field, frontier: &[&Matrix], gens: &[Matrix], threads: usize) -> Vec<Matrix> {
    #[cfg(feature = "parallel")]
    if threads > 1 && frontier.len() * gens.len() > 4096 {
        use rayon::prelude::*;
        let run = || frontier.par_iter().flat_map_iter(|x| gens.iter().map(move |g| x.mul(f, g))).collect();
        return match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        };
    }
    let _ = threads;
    frontier.iter().flat_map(|x| gens.iter().map(move |g| x.mul(f, g))).collect()
}

/// How to produce the full list of G(F_q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumMethod {
    BfsClosure,
    AmbientFilter,
}

/// All of G(F_q). BFS closure must reach the exact order; the ambient filter
/// walks Mat_n(F_q) in code order and refuses above [`AMBIENT_CAP`].
pub fn enumerate_group(spec: &GroupSpec, method: EnumMethod, budget: usize) -> Result<Vec<Matrix>> {
    let order = spec.order();
    if order > BigUint::from(budget) {
        return Err(Error::BudgetExceeded { what: format!("|{}|", spec.label()), needed: order.to_string(), budget: budget as u64 });
    }
    match method {
        EnumMethod::BfsClosure => {
            let gens = spec.standard_generators_unverified()?;
            let ball = closure(&spec.field, gens.elements(), &Limits::elements(budget))?;
            if BigUint::from(ball.len()) != order {
                return Err(Error::GeneratorVerificationFailed { expected: order.to_string(), found: ball.len() });
            }
            Ok(ball.into_set().into_iter().collect())
        }
        EnumMethod::AmbientFilter => {
            let mut out = Vec::new();
            ambient_walk(&spec.field, spec.n, AMBIENT_CAP, |m| {
                if spec.contains_unchecked(m) {
                    out.push(m.clone());
                }
            })?;
            Ok(out)
        }
    }
}

/// Calls `visit` on every matrix in Mat_n(F_q), in increasing code order.
pub fn ambient_walk<V: FnMut(&Matrix)>(f: &Field, n: usize, cap: u64, mut visit: V) -> Result<()> {
    let q = f.q() as u64;
    let total = (n * n) as u32;
    let size = q.checked_pow(total).filter(|&s| s <= cap);
    if size.is_none() {
        return Err(Error::BudgetExceeded { what: format!("Mat_{n}(F_{q})"), needed: format!("{q}^{total}"), budget: cap });
    }
    let mut digits = vec![0u32; n * n];
    let mut m = Matrix::zero(n);
    loop {
        visit(&m);
        // odometer, last entry fastest
        let mut i = n * n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] == q as u32 {
                digits[i] = 0;
                m.set(i / n, i % n, FieldElem::ZERO);
            } else {
                m.set(i / n, i % n, f.from_code(digits[i]).expect("code below q"));
                break;
            }
        }
    }
}
