//! Pointwise Chern curvature tensors and bundle constructions.
//!
//! A [`CurvatureTensor`] holds `R[i][j][α][β]` for base indices `i, j` and
//! fiber indices `α, β`, all 0-based, in an orthonormal fiber frame at the
//! center of normal coordinates. The curvature symmetry
//! `R[i][j][α][β] = conj(R[j][i][β][α])` says exactly that the `nr×nr`
//! Nakano matrix `M[(i,α)][(j,β)] = R[i][j][α][β]` is Hermitian, which is how
//! tensors are built from and turned into matrices.
//!
//! Fiber products use the lexicographic basis: `(α, γ) ↦ α·r₂ + γ`.

use alloc::vec::Vec;

use num_traits::{Float, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::multiindex::{self, SymIndex};

/// Tolerance for the curvature symmetry checks applied to literal input.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Smallest Gram eigenvalue accepted by [`orthonormalize_frame`].
pub const GRAM_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    base_dim: usize,
    rank: usize,
    values: Vec<C64>,
}

impl CurvatureTensor {
    pub fn zeros(base_dim: usize, rank: usize) -> Result<Self> {
        check_dims(base_dim, rank)?;
        Ok(Self { base_dim, rank, values: alloc::vec![C64::zero(); base_dim * base_dim * rank * rank] })
    }

    pub fn from_fn(
        base_dim: usize,
        rank: usize,
        mut f: impl FnMut(usize, usize, usize, usize) -> C64,
    ) -> Result<Self> {
        let mut t = Self::zeros(base_dim, rank)?;
        for i in 0..base_dim {
            for j in 0..base_dim {
                for a in 0..rank {
                    for b in 0..rank {
                        let k = t.offset(i, j, a, b);
                        t.values[k] = f(i, j, a, b);
                    }
                }
            }
        }
        Ok(t)
    }

    /// Builds a tensor from values in `R[i][j][α][β]` order and checks the
    /// curvature symmetry to [`HERMITIAN_TOLERANCE`] (relative to the largest
    /// entry).
    pub fn from_values(base_dim: usize, rank: usize, values: Vec<C64>) -> Result<Self> {
        check_dims(base_dim, rank)?;
        let expected = base_dim * base_dim * rank * rank;
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: values.len() });
        }
        let t = Self { base_dim, rank, values };
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = t.hermitian_defect();
        if defect > HERMITIAN_TOLERANCE * t.max_abs().max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(t)
    }

    /// Reshapes a Hermitian `nr×nr` Nakano matrix into a tensor.
    pub fn from_nakano_matrix(base_dim: usize, rank: usize, m: &CMatrix) -> Result<Self> {
        check_dims(base_dim, rank)?;
        let size = base_dim * rank;
        if m.rows() != size || m.cols() != size {
            return Err(Error::DimensionMismatch { expected: size, found: m.rows() });
        }
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOLERANCE * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        Self::from_fn(base_dim, rank, |i, j, a, b| m[(i * rank + a, j * rank + b)])
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, a: usize, b: usize) -> usize {
        ((i * self.base_dim + j) * self.rank + a) * self.rank + b
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, a: usize, b: usize) -> C64 {
        self.values[self.offset(i, j, a, b)]
    }

    pub fn set(&mut self, i: usize, j: usize, a: usize, b: usize, value: C64) {
        let k = self.offset(i, j, a, b);
        self.values[k] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |R[i][j][α][β] − conj(R[j][i][β][α])|`.
    pub fn hermitian_defect(&self) -> f64 {
        let (n, r) = (self.base_dim, self.rank);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for a in 0..r {
                    for b in 0..r {
                        worst = worst.max((self.get(i, j, a, b) - self.get(j, i, b, a).conj()).norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest entrywise deviation from `other`; `∞` on shape mismatch.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        if self.base_dim != other.base_dim || self.rank != other.rank {
            return f64::INFINITY;
        }
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `M[(i,α)][(j,β)] = R[i][j][α][β]`, row index `i·r + α`.
    pub fn nakano_matrix(&self) -> CMatrix {
        let r = self.rank;
        let size = self.base_dim * r;
        CMatrix::from_fn(size, size, |row, col| self.get(row / r, col / r, row % r, col % r))
    }

    /// `N[(i,β)][(j,α)] = R[i][j][α][β]`, row index `i·r + β`.
    pub fn dual_nakano_matrix(&self) -> CMatrix {
        let r = self.rank;
        let size = self.base_dim * r;
        CMatrix::from_fn(size, size, |row, col| self.get(row / r, col / r, col % r, row % r))
    }

    /// `Σ R[i][j][α][β] u^{iα} conj(u^{jβ})` with `u` indexed `i·r + α`.
    pub fn nakano_form(&self, u: &[C64]) -> f64 {
        let r = self.rank;
        let mut acc = C64::zero();
        for (p, up) in u.iter().enumerate() {
            for (q, uq) in u.iter().enumerate() {
                acc += self.get(p / r, q / r, p % r, q % r) * up * uq.conj();
            }
        }
        acc.re
    }

    /// `Σ R[i][j][α][β] u^{iβ} conj(u^{jα})` with `u` indexed `i·r + β`.
    pub fn dual_nakano_form(&self, u: &[C64]) -> f64 {
        let r = self.rank;
        let mut acc = C64::zero();
        for (p, up) in u.iter().enumerate() {
            for (q, uq) in u.iter().enumerate() {
                acc += self.get(p / r, q / r, q % r, p % r) * up * uq.conj();
            }
        }
        acc.re
    }

    /// `Σ R[i][j][α][β] u^i conj(u^j) v^α conj(v^β)`.
    pub fn griffiths_form(&self, u: &[C64], v: &[C64]) -> f64 {
        let h = self.fiber_contraction(v);
        let mut acc = C64::zero();
        for i in 0..self.base_dim {
            for j in 0..self.base_dim {
                acc += h[(i, j)] * u[i] * u[j].conj();
            }
        }
        acc.re
    }

    /// `H[i][j] = Σ_{αβ} R[i][j][α][β] v^α conj(v^β)`, Hermitian `n×n`.
    pub fn fiber_contraction(&self, v: &[C64]) -> CMatrix {
        let r = self.rank;
        CMatrix::from_fn(self.base_dim, self.base_dim, |i, j| {
            let mut s = C64::zero();
            for a in 0..r {
                for b in 0..r {
                    s += self.get(i, j, a, b) * v[a] * v[b].conj();
                }
            }
            s
        })
    }

    /// `K[α][β] = Σ_{ij} R[i][j][α][β] u^i conj(u^j)`, Hermitian `r×r`.
    pub fn base_contraction(&self, u: &[C64]) -> CMatrix {
        let n = self.base_dim;
        CMatrix::from_fn(self.rank, self.rank, |a, b| {
            let mut s = C64::zero();
            for i in 0..n {
                for j in 0..n {
                    s += self.get(i, j, a, b) * u[i] * u[j].conj();
                }
            }
            s
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            base_dim: self.base_dim,
            rank: self.rank,
            values: self.values.iter().map(|z| z * factor).collect(),
        }
    }

    /// The `r×r` fiber block `B[α][β] = R[i][j][α][β]`.
    fn fiber_block(&self, i: usize, j: usize) -> CMatrix {
        CMatrix::from_fn(self.rank, self.rank, |a, b| self.get(i, j, a, b))
    }
}

fn check_dims(base_dim: usize, rank: usize) -> Result<()> {
    if base_dim == 0 {
        return Err(Error::ZeroBaseDim);
    }
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    Ok(())
}

fn check_same_base(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::BaseDimMismatch { left, right });
    }
    Ok(())
}

/// Curvature `c[i][j]` of a Hermitian line bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCurvature {
    matrix: CMatrix,
}

impl LineCurvature {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        if matrix.rows() == 0 {
            return Err(Error::ZeroBaseDim);
        }
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOLERANCE * matrix.max_abs().max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { matrix })
    }

    /// `c = m·δ_{ij}`.
    pub fn scalar(base_dim: usize, m: f64) -> Result<Self> {
        if base_dim == 0 {
            return Err(Error::ZeroBaseDim);
        }
        Ok(Self { matrix: CMatrix::from_real_diagonal(&alloc::vec![m; base_dim]) })
    }

    pub fn base_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { matrix: self.matrix.scale(C64::new(factor, 0.0)) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_base(self.base_dim(), other.base_dim())?;
        Ok(Self { matrix: self.matrix.add(&other.matrix)? })
    }

    pub fn to_tensor(&self) -> CurvatureTensor {
        let n = self.base_dim();
        CurvatureTensor {
            base_dim: n,
            rank: 1,
            values: (0..n * n).map(|k| self.matrix[(k / n, k % n)]).collect(),
        }
    }

    pub fn from_tensor(t: &CurvatureTensor) -> Result<Self> {
        if t.rank != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: t.rank });
        }
        Ok(Self { matrix: CMatrix::from_fn(t.base_dim, t.base_dim, |i, j| t.get(i, j, 0, 0)) })
    }
}

/// Hermitian positive definite Gram matrix of a fiber frame.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricGram {
    matrix: CMatrix,
}

impl MetricGram {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let eig = linalg::hermitian_eigen(&matrix)?;
        if matrix.rows() == 0 {
            return Err(Error::ZeroRank);
        }
        if eig.min() <= GRAM_FLOOR {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: eig.min() });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.matrix.scale(C64::new(factor, 0.0)))
    }
}

/// `R*[i][j][α][β] = −R[i][j][β][α]`.
pub fn dual_curvature(r: &CurvatureTensor) -> CurvatureTensor {
    let mut out = r.clone();
    for i in 0..r.base_dim {
        for j in 0..r.base_dim {
            for a in 0..r.rank {
                for b in 0..r.rank {
                    out.set(i, j, a, b, -r.get(i, j, b, a));
                }
            }
        }
    }
    out
}

/// Curvature of `E₁ ⊗ E₂`:
/// `R₁[i][j][α][β]·δ_{γδ} + δ_{αβ}·R₂[i][j][γ][δ]` on `(α,γ)`, `(β,δ)`.
pub fn tensor_curvature(r1: &CurvatureTensor, r2: &CurvatureTensor) -> Result<CurvatureTensor> {
    check_same_base(r1.base_dim, r2.base_dim)?;
    let (p, q) = (r1.rank, r2.rank);
    CurvatureTensor::from_fn(r1.base_dim, p * q, |i, j, x, y| {
        let (a, c) = (x / q, x % q);
        let (b, d) = (y / q, y % q);
        let mut v = C64::zero();
        if c == d {
            v += r1.get(i, j, a, b);
        }
        if a == b {
            v += r2.get(i, j, c, d);
        }
        v
    })
}

/// Fiber trace: the curvature of `det E`.
pub fn det_curvature(r: &CurvatureTensor) -> LineCurvature {
    let n = r.base_dim;
    LineCurvature {
        matrix: CMatrix::from_fn(n, n, |i, j| (0..r.rank).map(|a| r.get(i, j, a, a)).sum()),
    }
}

/// Block-diagonal curvature of `E₁ ⊕ E₂`.
pub fn direct_sum_curvature(r1: &CurvatureTensor, r2: &CurvatureTensor) -> Result<CurvatureTensor> {
    check_same_base(r1.base_dim, r2.base_dim)?;
    let p = r1.rank;
    CurvatureTensor::from_fn(r1.base_dim, p + r2.rank, |i, j, a, b| match (a < p, b < p) {
        (true, true) => r1.get(i, j, a, b),
        (false, false) => r2.get(i, j, a - p, b - p),
        _ => C64::zero(),
    })
}

/// Curvature of `E ⊗ L`: `R[i][j][α][β] + c[i][j]·δ_{αβ}`.
pub fn twist_by_line(r: &CurvatureTensor, c: &LineCurvature) -> Result<CurvatureTensor> {
    check_same_base(r.base_dim, c.base_dim())?;
    let mut out = r.clone();
    for i in 0..r.base_dim {
        for j in 0..r.base_dim {
            for a in 0..r.rank {
                let v = out.get(i, j, a, a) + c.get(i, j);
                out.set(i, j, a, a, v);
            }
        }
    }
    Ok(out)
}

/// Curvature of `S^kE` in the monomial frame together with the frame's Gram
/// matrix.
#[derive(Clone, Debug)]
pub struct SymPower {
    pub basis: Vec<SymIndex>,
    pub tensor: CurvatureTensor,
    pub gram: MetricGram,
}

impl SymPower {
    /// The curvature in an orthonormal frame of `(S^kE, S^kh)`.
    pub fn orthonormalized(&self) -> Result<CurvatureTensor> {
        orthonormalize_frame(&self.tensor, &self.gram)
    }
}

/// Curvature of `S^kE` on the monomial basis `enumerate_sym_indices(r, k)`:
///
/// `R[i][j][A][B] = Σ_{s,t} R[i][j][α_s][β_t] · δ_{A_s B_t}`
///
/// where `A_s` drops the `s`-th entry of `A`. The frame's Gram matrix is
/// `g[A][B] = δ_{AB}`; both carry the same global constant, so composing with
/// [`orthonormalize_frame`] gives the orthonormal-frame curvature of
/// `(S^kE, S^kh)`.
pub fn sym_power_curvature(r: &CurvatureTensor, k: usize) -> Result<SymPower> {
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let basis = multiindex::enumerate_sym_indices(r.rank, k)?;
    let dim = basis.len();

    // Coefficients (α, β, weight) for every basis pair; a pair of positions
    // contributes only when the remaining multisets agree.
    let mut terms: Vec<Vec<(usize, usize, f64)>> = Vec::with_capacity(dim * dim);
    for a_idx in &basis {
        for b_idx in &basis {
            let mut pair: Vec<(usize, usize, f64)> = Vec::new();
            for s in 0..k {
                let a_rest = a_idx.without(s);
                for t in 0..k {
                    let b_rest = b_idx.without(t);
                    let w = multiindex::delta_unchecked(a_rest.entries(), b_rest.entries());
                    if w == 0 {
                        continue;
                    }
                    let key = (a_idx.entries()[s] - 1, b_idx.entries()[t] - 1);
                    match pair.iter_mut().find(|(x, y, _)| (*x, *y) == key) {
                        Some(entry) => entry.2 += w as f64,
                        None => pair.push((key.0, key.1, w as f64)),
                    }
                }
            }
            terms.push(pair);
        }
    }

    let tensor = CurvatureTensor::from_fn(r.base_dim, dim, |i, j, x, y| {
        terms[x * dim + y].iter().map(|&(a, b, w)| r.get(i, j, a, b) * w).sum()
    })?;
    let gram = CMatrix::from_fn(dim, dim, |x, y| {
        C64::new(multiindex::delta_unchecked(basis[x].entries(), basis[y].entries()) as f64, 0.0)
    });
    Ok(SymPower { basis, tensor, gram: MetricGram::new(gram)? })
}

/// Transports a tensor given in a frame with Gram `g` to the orthonormal
/// frame `f = e·g^{−1/2}`:
/// `out[i][j][α][β] = Σ_{γδ} R[i][j][γ][δ]·S[γ][α]·conj(S[δ][β])`.
pub fn orthonormalize_frame(r: &CurvatureTensor, g: &MetricGram) -> Result<CurvatureTensor> {
    if g.dim() != r.rank {
        return Err(Error::DimensionMismatch { expected: r.rank, found: g.dim() });
    }
    let s = linalg::hermitian_inverse_sqrt(g.matrix(), GRAM_FLOOR)?;
    // S is Hermitian, so S^T = conj(S) and each block maps to conj(S)·B·conj(S).
    let sc = CMatrix::from_fn(s.rows(), s.cols(), |i, j| s[(i, j)].conj());
    let mut out = CurvatureTensor::zeros(r.base_dim, r.rank)?;
    for i in 0..r.base_dim {
        for j in 0..r.base_dim {
            let block = sc.mul(&r.fiber_block(i, j))?.mul(&sc)?;
            for a in 0..r.rank {
                for b in 0..r.rank {
                    out.set(i, j, a, b, block[(a, b)]);
                }
            }
        }
    }
    Ok(out)
}

/// Seeded test tensor whose Nakano matrix is `X*X + shift·I`.
///
/// `X` has i.i.d. standard complex Gaussian entries scaled by `1/√(nr)`, so
/// the spectrum of `X*X` stays of order one.
pub fn random_hermitian_curvature(seed: u64, n: usize, r: usize, shift: f64) -> Result<CurvatureTensor> {
    check_dims(n, r)?;
    let size = n * r;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / Float::sqrt(2.0 * size as f64);
    let x = CMatrix::from_fn(size, size, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re * scale, im * scale)
    });
    let mut m = x.adjoint().mul(&x)?;
    for d in 0..size {
        m[(d, d)] += C64::new(shift, 0.0);
    }
    // X*X is Hermitian only up to round-off; symmetrize exactly.
    let m = CMatrix::from_fn(size, size, |p, q| (m[(p, q)] + m[(q, p)].conj()) * 0.5);
    CurvatureTensor::from_nakano_matrix(n, r, &m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fubini_study_tangent;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn dual_is_an_involution_and_flips_fs() {
        let fs1 = fubini_study_tangent(1).unwrap();
        assert_eq!(fs1.get(0, 0, 0, 0), c(2.0));
        assert_eq!(dual_curvature(&fs1).get(0, 0, 0, 0), c(-2.0));
        let z = CurvatureTensor::zeros(2, 3).unwrap();
        assert_eq!(dual_curvature(&z).max_abs(), 0.0);
        for seed in 0..5 {
            let r = random_hermitian_curvature(seed, 2, 3, -0.3).unwrap();
            assert_eq!(dual_curvature(&dual_curvature(&r)), r);
        }
    }

    #[test]
    fn tensor_with_zero_line_is_identity() {
        let r = random_hermitian_curvature(3, 2, 2, 0.1).unwrap();
        let zero = LineCurvature::scalar(2, 0.0).unwrap().to_tensor();
        assert_eq!(tensor_curvature(&r, &zero).unwrap(), r);
        let a = LineCurvature::scalar(2, 1.5).unwrap();
        let b = LineCurvature::scalar(2, -0.25).unwrap();
        let ab = tensor_curvature(&a.to_tensor(), &b.to_tensor()).unwrap();
        assert!(ab.max_deviation(&a.add(&b).unwrap().to_tensor()) < 1e-15);
    }

    #[test]
    fn fs_tensor_det_twist() {
        let fs = fubini_study_tangent(2).unwrap();
        let det = det_curvature(&fs);
        let got = tensor_curvature(&fs, &det.to_tensor()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let d = |x: usize, y: usize| (x == y) as u8 as f64;
                        let want = d(i, j) * d(a, b) + d(i, b) * d(a, j) + 3.0 * d(i, j) * d(a, b);
                        assert_eq!(got.get(i, j, a, b), c(want));
                    }
                }
            }
        }
        assert_eq!(twist_by_line(&fs, &det).unwrap(), got);
    }

    #[test]
    fn twist_by_canonical_and_back() {
        let fs = fubini_study_tangent(2).unwrap();
        let k = LineCurvature::scalar(2, -3.0).unwrap();
        let t = twist_by_line(&fs, &k).unwrap();
        assert_eq!(t.get(0, 0, 0, 0), c(-1.0));
        assert_eq!(t.get(0, 1, 1, 0), c(1.0));
        let back = twist_by_line(&t, &k.scaled(-1.0)).unwrap();
        assert_eq!(back, fs);
        let bad = LineCurvature::scalar(3, 1.0).unwrap();
        assert_eq!(twist_by_line(&fs, &bad), Err(Error::BaseDimMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn det_of_fs_and_direct_sum() {
        for n in 1..=4 {
            let det = det_curvature(&fubini_study_tangent(n).unwrap());
            assert!(det.matrix().sub(&LineCurvature::scalar(n, (n + 1) as f64).unwrap().matrix().clone()).unwrap().max_abs() == 0.0);
        }
        let o1 = LineCurvature::scalar(4, 1.0).unwrap().to_tensor();
        let sum = direct_sum_curvature(&o1, &o1).unwrap();
        assert_eq!(sum.rank(), 2);
        assert_eq!(det_curvature(&sum), LineCurvature::scalar(4, 2.0).unwrap());
        let r1 = random_hermitian_curvature(1, 2, 2, 0.0).unwrap();
        let r2 = random_hermitian_curvature(2, 2, 3, -1.0).unwrap();
        let lhs = det_curvature(&direct_sum_curvature(&r1, &r2).unwrap());
        let rhs = det_curvature(&r1).add(&det_curvature(&r2)).unwrap();
        assert!(lhs.matrix().sub(rhs.matrix()).unwrap().max_abs() < 1e-14);
        assert_eq!(
            direct_sum_curvature(&r1, &fubini_study_tangent(3).unwrap()),
            Err(Error::BaseDimMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn sym_power_degree_one_and_zero() {
        let r = random_hermitian_curvature(7, 2, 3, 0.2).unwrap();
        let s1 = sym_power_curvature(&r, 1).unwrap();
        assert!(s1.tensor.max_deviation(&r) < 1e-15);
        assert_eq!(s1.gram, MetricGram::identity(3));
        assert!(matches!(sym_power_curvature(&r, 0), Err(Error::ZeroDegree)));
    }

    #[test]
    fn sym_square_of_fs_corner_entry() {
        let s2 = sym_power_curvature(&fubini_study_tangent(2).unwrap(), 2).unwrap();
        // A = B = (1,1) sits first in the basis.
        assert_eq!(s2.tensor.get(0, 0, 0, 0), c(8.0));
        assert_eq!(s2.gram.matrix()[(0, 0)], c(2.0));
        assert_eq!(s2.gram.matrix()[(1, 1)], c(1.0));
    }

    #[test]
    fn orthonormalize_identity_gram() {
        let r = random_hermitian_curvature(9, 2, 2, 0.0).unwrap();
        let out = orthonormalize_frame(&r, &MetricGram::identity(2)).unwrap();
        assert!(out.max_deviation(&r) < 1e-14);
        assert!(matches!(
            orthonormalize_frame(&r, &MetricGram::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            MetricGram::new(CMatrix::from_real_diagonal(&[1.0, -1.0])),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn orthonormalize_scales_inverse_to_gram() {
        let r = random_hermitian_curvature(11, 2, 2, 0.0).unwrap();
        let g = MetricGram::new(CMatrix::from_real_diagonal(&[4.0, 4.0])).unwrap();
        let out = orthonormalize_frame(&r, &g).unwrap();
        assert!(out.max_deviation(&r.scaled(0.25)) < 1e-14);
    }

    #[test]
    fn random_tensor_is_seeded_and_shifted() {
        let a = random_hermitian_curvature(42, 2, 3, 0.5).unwrap();
        let b = random_hermitian_curvature(42, 2, 3, 0.5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_hermitian_curvature(43, 2, 3, 0.5).unwrap());
        assert_eq!(a.hermitian_defect(), 0.0);
        let eig = linalg::hermitian_eigen(&a.nakano_matrix()).unwrap();
        assert!(eig.min() >= 0.5 - 1e-12);
        let neg = random_hermitian_curvature(42, 2, 3, -10.0).unwrap();
        assert!(linalg::hermitian_eigen(&neg.nakano_matrix()).unwrap().max() < 0.0);
    }

    #[test]
    fn from_values_rejects_asymmetric_input() {
        let mut v = alloc::vec![C64::zero(); 4];
        v[1] = c(1.0);
        assert!(matches!(CurvatureTensor::from_values(1, 2, v), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            CurvatureTensor::from_values(1, 2, alloc::vec![C64::zero(); 3]),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
    }
}
