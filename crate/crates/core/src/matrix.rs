//! Square matrices over a finite field, plus generic routines (determinant,
//! Berkowitz characteristic polynomial) over any [`Arith`] ring.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Arith, Field, FieldElem};

/// An n×n matrix stored row-major. Equality and hashing use the canonical
/// element codes, so two matrices compare equal iff they are the same point.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|e| e.code().to_string()).collect();
            write!(f, "{}", row.join(","))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, data: vec![FieldElem::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = FieldElem::ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries already valid in `field`.
    pub fn from_entries(field: &Field, n: usize, data: Vec<FieldElem>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        for &e in &data {
            field.check(e)?;
        }
        Ok(Matrix { n, data })
    }

    /// Row-major element codes.
    pub fn from_codes(field: &Field, n: usize, codes: &[u32]) -> Result<Self> {
        let data = codes.iter().map(|&c| field.from_code(c)).collect::<Result<Vec<_>>>()?;
        Self::from_entries(field, n, data)
    }

    /// Row-major integers, reduced into the prime field.
    pub fn from_ints(field: &Field, n: usize, vals: &[i64]) -> Result<Self> {
        if vals.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: vals.len() });
        }
        Ok(Matrix { n, data: vals.iter().map(|&v| field.from_int(v)).collect() })
    }

    pub fn diag(n: usize, d: &[FieldElem]) -> Self {
        let mut m = Self::zero(n);
        for (i, &x) in d.iter().enumerate() {
            m.data[i * n + i] = x;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn codes(&self) -> Vec<u32> {
        self.data.iter().map(|e| e.code()).collect()
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { FieldElem::ONE } else { FieldElem::ZERO }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    /// The `k`×`k` submatrix starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, k: usize) -> Self {
        let mut b = Self::zero(k);
        for i in 0..k {
            for j in 0..k {
                b.data[i * k + j] = self.get(r0 + i, c0 + j);
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.n {
            for j in 0..b.n {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn trace(&self, f: &Field) -> FieldElem {
        (0..self.n).fold(FieldElem::ZERO, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn add(&self, f: &Field, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.n, other.n);
        Matrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn sub(&self, f: &Field, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.n, other.n);
        Matrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect() }
    }

    pub fn scale(&self, f: &Field, c: FieldElem) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn neg(&self, f: &Field) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn try_mul(&self, f: &Field, other: &Matrix) -> Result<Matrix> {
        self.check_same(other)?;
        Ok(self.mul(f, other))
    }

    /// Matrix product. Over a prime field the inner products are accumulated
    /// in u64 and reduced once.
    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        let mut out = vec![FieldElem::ZERO; n * n];
        if f.is_prime_field() {
            let p = f.p() as u64;
            // p < 2^20, so each product is < 2^40 and up to 2^24 terms fit.
            for i in 0..n {
                let row = &self.data[i * n..(i + 1) * n];
                for j in 0..n {
                    let mut acc = 0u64;
                    for (k, a) in row.iter().enumerate() {
                        acc += a.code() as u64 * other.data[k * n + j].code() as u64;
                    }
                    out[i * n + j] = FieldElem::from_code_unchecked((acc % p) as u32);
                }
            }
        } else {
            for i in 0..n {
                for k in 0..n {
                    let a = self.data[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let idx = i * n + j;
                        out[idx] = f.add(out[idx], f.mul(a, other.data[k * n + j]));
                    }
                }
            }
        }
        Matrix { n, data: out }
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Matrix {
        let mut r = Matrix::identity(self.n);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        r
    }

    pub fn mul_vec(&self, f: &Field, v: &[FieldElem]) -> Vec<FieldElem> {
        (0..self.n)
            .map(|i| (0..self.n).fold(FieldElem::ZERO, |acc, k| f.add(acc, f.mul(self.get(i, k), v[k]))))
            .collect()
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        det_generic(f, self.n, self.data.clone())
    }

    pub fn inverse(&self, f: &Field) -> Result<Matrix> {
        let data = inverse_generic(f, self.n, &self.data)?;
        Ok(Matrix { n: self.n, data })
    }

    /// Characteristic polynomial det(t·I − M), coefficients from t^0 to t^n.
    pub fn char_poly(&self, f: &Field) -> Vec<FieldElem> {
        berkowitz(f, self.n, &self.data)
    }

    /// Kernel basis of the matrix acting on column vectors.
    pub fn kernel(&self, f: &Field) -> Vec<Vec<FieldElem>> {
        kernel(f, self.n, self.n, &self.data)
    }

    /// Rank of the matrix.
    pub fn rank(&self, f: &Field) -> usize {
        self.n - self.kernel(f).len()
    }
}

/// Determinant by Gaussian elimination (needs division).
pub fn det_generic<A: Arith>(ar: &A, n: usize, mut a: Vec<A::E>) -> A::E {
    let mut det = ar.one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !ar.is_zero(&a[r * n + c])) else {
            return ar.zero();
        };
        if piv != c {
            for j in 0..n {
                a.swap(piv * n + j, c * n + j);
            }
            det = ar.neg(&det);
        }
        let pv = a[c * n + c].clone();
        det = ar.mul(&det, &pv);
        let inv = ar.inv(&pv).expect("pivot is nonzero");
        for r in (c + 1)..n {
            let factor = ar.mul(&a[r * n + c], &inv);
            if ar.is_zero(&factor) {
                continue;
            }
            for j in c..n {
                let t = ar.mul(&factor, &a[c * n + j]);
                a[r * n + j] = ar.sub(&a[r * n + j], &t);
            }
        }
    }
    det
}

/// Gauss-Jordan inverse.
pub fn inverse_generic<A: Arith>(ar: &A, n: usize, m: &[A::E]) -> Result<Vec<A::E>> {
    let w = 2 * n;
    let mut a = Vec::with_capacity(n * w);
    for i in 0..n {
        a.extend_from_slice(&m[i * n..(i + 1) * n]);
        for j in 0..n {
            a.push(if i == j { ar.one() } else { ar.zero() });
        }
    }
    for c in 0..n {
        let piv = (c..n).find(|&r| !ar.is_zero(&a[r * w + c])).ok_or(Error::DivisionByZero)?;
        if piv != c {
            for j in 0..w {
                a.swap(piv * w + j, c * w + j);
            }
        }
        let inv = ar.inv(&a[c * w + c])?;
        for j in 0..w {
            a[c * w + j] = ar.mul(&a[c * w + j], &inv);
        }
        for r in 0..n {
            if r == c || ar.is_zero(&a[r * w + c]) {
                continue;
            }
            let factor = a[r * w + c].clone();
            for j in 0..w {
                let t = ar.mul(&factor, &a[c * w + j]);
                a[r * w + j] = ar.sub(&a[r * w + j], &t);
            }
        }
    }
    Ok((0..n).flat_map(|i| a[i * w + n..(i + 1) * w].to_vec()).collect())
}

/// Berkowitz's division-free characteristic polynomial det(t·I − M),
/// returned with coefficients from t^0 up to t^n. Works over any
/// commutative ring, which is what lets the same routine expand
/// characteristic polynomials of symbolic matrices.
pub fn berkowitz<A: Arith>(ar: &A, n: usize, m: &[A::E]) -> Vec<A::E> {
    let at = |i: usize, j: usize| &m[i * n + j];
    // coefficients from highest degree down
    let mut p: Vec<A::E> = vec![ar.one()];
    for r in 1..=n {
        let k = r - 1; // index of the new row/column
        // t_0 = 1, t_1 = -a_kk, t_{j+1} = -R A^{j-1} C
        let mut t = Vec::with_capacity(r + 1);
        t.push(ar.one());
        t.push(ar.neg(at(k, k)));
        let mut v: Vec<A::E> = (0..k).map(|i| at(i, k).clone()).collect();
        for _ in 1..r {
            let dot = (0..k).fold(ar.zero(), |acc, i| ar.add(&acc, &ar.mul(at(k, i), &v[i])));
            t.push(ar.neg(&dot));
            v = (0..k)
                .map(|i| (0..k).fold(ar.zero(), |acc, j| ar.add(&acc, &ar.mul(at(i, j), &v[j]))))
                .collect();
        }
        // new p = T * p, T lower-triangular Toeplitz (r+1)×r
        let mut np = Vec::with_capacity(r + 1);
        for i in 0..=r {
            let mut acc = ar.zero();
            for (j, pj) in p.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    acc = ar.add(&acc, &ar.mul(&t[i - j], pj));
                }
            }
            np.push(acc);
        }
        p = np;
    }
    p.reverse();
    p
}

/// Division-free determinant: (−1)^n times the constant term of the
/// characteristic polynomial.
pub fn det_division_free<A: Arith>(ar: &A, n: usize, m: &[A::E]) -> A::E {
    let c0 = berkowitz(ar, n, m).swap_remove(0);
    if n % 2 == 1 {
        ar.neg(&c0)
    } else {
        c0
    }
}

/// Kernel of a rows×cols matrix, one basis vector per free column.
pub fn kernel(f: &Field, rows: usize, cols: usize, m: &[FieldElem]) -> Vec<Vec<FieldElem>> {
    let mut a = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        for j in 0..cols {
            a.swap(piv * cols + j, r * cols + j);
        }
        let inv = f.inv(a[r * cols + c]).expect("pivot is nonzero");
        for j in 0..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        for i in 0..rows {
            if i != r && !a[i * cols + c].is_zero() {
                let factor = a[i * cols + c];
                for j in 0..cols {
                    a[i * cols + j] = f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![FieldElem::ZERO; cols];
            v[fc] = FieldElem::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a[i * cols + fc]);
            }
            v
        })
        .collect()
}

/// Reduced row echelon form of the span of `vectors`; a canonical key for a
/// subspace.
pub fn span_rref(f: &Field, vectors: &[Vec<FieldElem>]) -> Vec<Vec<FieldElem>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let cols = vectors[0].len();
    let mut a: Vec<Vec<FieldElem>> = vectors.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(piv, r);
        let inv = f.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c];
                for j in 0..cols {
                    let t = f.mul(factor, a[r][j]);
                    a[i][j] = f.sub(a[i][j], t);
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let data = (0..n * n).map(|_| f.from_code(rng.random_range(0..f.q())).unwrap()).collect();
        Matrix::from_entries(f, n, data).unwrap()
    }

    /// Leibniz expansion, the oracle for determinants.
    fn leibniz(f: &Field, m: &Matrix) -> FieldElem {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.n();
        let mut acc = FieldElem::ZERO;
        for p in perms(n) {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let mut term = FieldElem::ONE;
            for i in 0..n {
                term = f.mul(term, m.get(i, p[i]));
            }
            acc = if inversions % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn det_and_inverse_against_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(p, k) in &[(5, 1), (2, 2), (3, 2), (7, 1)] {
            let f = make_field(p, k).unwrap();
            for n in 1..=4 {
                for _ in 0..50 {
                    let m = random(&f, n, &mut rng);
                    let d = m.det(&f);
                    assert_eq!(d, leibniz(&f, &m));
                    assert_eq!(d, det_division_free(&f, n, m.entries()));
                    match m.inverse(&f) {
                        Ok(inv) => {
                            assert!(m.mul(&f, &inv).is_identity());
                            assert!(!d.is_zero());
                        }
                        Err(e) => {
                            assert_eq!(e, Error::DivisionByZero);
                            assert!(d.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn char_poly_small_cases() {
        let f = make_field(5, 1).unwrap();
        let u = Matrix::from_ints(&f, 2, &[1, 1, 0, 1]).unwrap();
        // t^2 - 2t + 1
        assert_eq!(u.char_poly(&f), vec![f.from_int(1), f.from_int(-2), f.from_int(1)]);
        let d = Matrix::from_ints(&f, 2, &[2, 0, 0, 3]).unwrap();
        assert_eq!(d.char_poly(&f), vec![f.from_int(1), f.from_int(0), f.from_int(1)]);
    }

    #[test]
    fn char_poly_cayley_hamilton() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(p, k) in &[(3, 1), (2, 3), (11, 1)] {
            let f = make_field(p, k).unwrap();
            for n in 1..=5 {
                for _ in 0..20 {
                    let m = random(&f, n, &mut rng);
                    let cp = m.char_poly(&f);
                    assert_eq!(cp.len(), n + 1);
                    assert_eq!(cp[n], FieldElem::ONE);
                    // Horner evaluation at M must vanish
                    let mut acc = Matrix::zero(n);
                    for c in cp.iter().rev() {
                        acc = acc.mul(&f, &m).add(&f, &Matrix::identity(n).scale(&f, *c));
                    }
                    assert!(acc.is_zero());
                    let sign = if n % 2 == 0 { cp[0] } else { f.neg(cp[0]) };
                    assert_eq!(sign, m.det(&f));
                }
            }
        }
    }

    #[test]
    fn kernel_and_rref() {
        let f = make_field(3, 1).unwrap();
        let m = Matrix::from_ints(&f, 3, &[1, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        let ker = m.kernel(&f);
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&f, &ker[0]).iter().all(|x| x.is_zero()));
        assert_eq!(m.rank(&f), 2);
        let a = span_rref(&f, &[vec![f.from_int(2), f.from_int(2)]]);
        let b = span_rref(&f, &[vec![f.from_int(1), f.from_int(1)]]);
        assert_eq!(a, b);
    }
}
