//! Dense complex matrices and the Hermitian eigensolver.
//!
//! The eigensolver is a cyclic complex Jacobi method. Each rotation first
//! removes the phase of the pivot `a_pq` and then applies the classical real
//! rotation, so the iterates stay exactly Hermitian. Sweeps stop once the
//! off-diagonal Frobenius norm drops below `JACOBI_THRESHOLD` times the
//! Frobenius norm of the input.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub const JACOBI_THRESHOLD: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        Float::sqrt(self.data.iter().map(|a| a.norm_sqr()).sum::<f64>())
    }

    /// Largest absolute row sum (the induced ∞-norm).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Maximum of `|m[i][j] − conj(m[j][i])|`; `∞` for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Extracts the sub-matrix with rows `r0..r0+nr` and columns `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch { expected: a.rows + d.rows, found: b.rows + c.rows });
        }
        let p = a.rows;
        let q = d.rows;
        let pc = a.cols;
        Ok(Self::from_fn(p + q, a.cols + b.cols, |i, j| match (i < p, j < pc) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - pc)],
            (false, true) => c[(i - p, j)],
            (false, false) => d[(i - p, j - pc)],
        }))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues in ascending order with the matching unit eigenvectors as
/// columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input is symmetrized as `(M + M*)/2` before iterating, so a defect at
/// round-off level is tolerated; anything larger is rejected.
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows, found: m.cols });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.rows;
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let defect = m.hermitian_defect();
    if defect > 1e-8 * scale {
        return Err(Error::NotHermitian { defect });
    }

    let mut a = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);
    let target = JACOBI_THRESHOLD * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::EigenNonConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    Float::sqrt(s)
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible against both diagonal entries: rotating would only add noise.
    if mag < 1e-300 || (app.abs() + aqq.abs() > 0.0 && mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs())) {
        a[(p, q)] = C64::zero();
        a[(q, p)] = C64::zero();
        return;
    }
    // Phase w makes the pivot real: (a_pq · w) = |a_pq|.
    let w = (apq / mag).conj();
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + Float::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + Float::sqrt(theta * theta + 1.0))
    };
    let cs = 1.0 / Float::sqrt(t * t + 1.0);
    let sn = t * cs;

    let n = a.rows;
    // Columns: v_p = cs e_p − sn w e_q, v_q = sn e_p + cs w e_q.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cs - akq * w * sn;
        a[(k, q)] = akp * sn + akq * w * cs;
    }
    let wc = w.conj();
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs - aqk * wc * sn;
        a[(q, k)] = apk * sn + aqk * wc * cs;
    }
    a[(p, q)] = C64::zero();
    a[(q, p)] = C64::zero();
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..v.rows {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs - vkq * w * sn;
        v[(k, q)] = vkp * sn + vkq * w * cs;
    }
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows, found: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = CMatrix::identity(n);
    let scale = m.max_abs();
    if scale == 0.0 && n > 0 {
        return Err(Error::SingularMatrix);
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
            .unwrap_or(col);
        if a[(pivot, col)].norm() <= f64::EPSILON * scale * (n as f64) {
            return Err(Error::SingularMatrix);
        }
        if pivot != col {
            for j in 0..n {
                let t = a[(col, j)];
                a[(col, j)] = a[(pivot, j)];
                a[(pivot, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(pivot, j)];
                inv[(pivot, j)] = t;
            }
        }
        let d = a[(col, col)].inv();
        for j in 0..n {
            a[(col, j)] *= d;
            inv[(col, j)] *= d;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)];
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let acj = a[(col, j)];
                let icj = inv[(col, j)];
                a[(i, j)] -= f * acj;
                inv[(i, j)] -= f * icj;
            }
        }
    }
    Ok(inv)
}

/// Smallest singular value, from the spectrum of `M*M`.
pub fn smallest_singular_value(m: &CMatrix) -> Result<f64> {
    let gram = m.adjoint().mul(m)?;
    let eig = hermitian_eigen(&gram)?;
    Ok(Float::sqrt(eig.min().max(0.0)))
}

/// `g^{−1/2}` for Hermitian positive definite `g` (principal root).
///
/// Eigenvalues at or below `floor` are an error, never clipped.
pub fn hermitian_inverse_sqrt(g: &CMatrix, floor: f64) -> Result<CMatrix> {
    let eig = hermitian_eigen(g)?;
    if eig.min() <= floor {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: eig.min() });
    }
    let n = g.rows;
    let u = &eig.vectors;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| u[(i, k)] * u[(j, k)].conj() / Float::sqrt(eig.values[k])).sum()
    }))
}

pub fn norm(v: &[C64]) -> f64 {
    Float::sqrt(v.iter().map(|x| x.norm_sqr()).sum::<f64>())
}

/// `⟨a, b⟩ = Σ a_k conj(b_k)`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn normalized(v: &[C64]) -> Option<Vec<C64>> {
    let nv = norm(v);
    if nv == 0.0 || !nv.is_finite() {
        return None;
    }
    Some(v.iter().map(|x| x / nv).collect())
}
