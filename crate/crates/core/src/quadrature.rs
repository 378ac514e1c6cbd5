//! Monomial integrals over `P^{r−1}` and the fiber quantities built from them.
//!
//! Integrals are taken against `ω_FS^{r−1}/(r−1)!`, normalized so that
//! `P^{r−1}` has total volume `1/(r−1)!`. With that normalization
//!
//! ```text
//! ∫ W_A W̄_B / |W|^{2k} = δ_{AB} / (r+k−1)!
//! ```
//!
//! for multi-indices of degree `k`, which [`monomial_integral_exact`] returns
//! as a big rational. [`monomial_integral_mc`] is an independent Monte Carlo
//! estimate of the same quantity.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::curvature::{CurvatureTensor, MetricGram};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix, C64};
use crate::multiindex::{delta_unchecked, enumerate_sym_indices, SymIndex};

/// Fewest samples accepted by the Monte Carlo routines.
pub const MIN_MC_SAMPLES: usize = 1000;

/// Samples per independently seeded batch.
pub const MC_BATCH: usize = 4096;

/// Homogeneous coordinates `(W_1, …, W_r)` of a point of `P^{r−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPoint(Vec<C64>);

impl HomogeneousPoint {
    pub fn new(w: Vec<C64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::ZeroRank);
        }
        if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if w.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::ZeroPoint);
        }
        Ok(Self(w))
    }

    pub fn coords(&self) -> &[C64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Horizontal `n×n` Hermitian block of a quotient-metric curvature.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalHessian {
    pub values: CMatrix,
}

impl HorizontalHessian {
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&self.values)?.min())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MCEstimate {
    pub value: C64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Which projectivization carries the quotient metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientVariant {
    /// `O_{P(E*)}(1)`: `φ[i][j] = Σ R[i][j][α][β] W_β W̄_α / |W|²`.
    DualProjectivization,
    /// `O_{P(E)}(1)`: `φ[i][j] = −Σ R[i][j][α][β] W_α W̄_β / |W|²`.
    DirectProjectivization,
}

fn check_pair(a: &SymIndex, b: &SymIndex, r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    if a.degree() != b.degree() {
        return Err(Error::LengthMismatch { left: a.degree(), right: b.degree() });
    }
    if let Some(&entry) = a.entries().iter().chain(b.entries()).find(|&&e| e > r) {
        return Err(Error::IndexOutOfRange { entry, rank: r });
    }
    Ok(())
}

fn big_factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}

/// `δ_{AB} / (r+k−1)!` as an exact rational.
pub fn monomial_integral_exact(a: &SymIndex, b: &SymIndex, r: usize) -> Result<BigRational> {
    check_pair(a, b, r)?;
    let k = a.degree();
    let delta = BigInt::from(delta_unchecked(a.entries(), b.entries()));
    Ok(BigRational::new(delta, big_factorial(r + k - 1)))
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Default)]
struct Moments {
    re: Compensated,
    im: Compensated,
    sq: Compensated,
}

impl Moments {
    fn push(&mut self, x: C64) {
        self.re.add(x.re);
        self.im.add(x.im);
        self.sq.add(x.norm_sqr());
    }

    fn merge(&mut self, other: &Moments) {
        self.re.add(other.re.value());
        self.im.add(other.im.value());
        self.sq.add(other.sq.value());
    }

    fn estimate(&self, samples: usize, scale: f64, seed: u64) -> MCEstimate {
        let n = samples as f64;
        let mean = C64::new(self.re.value() / n, self.im.value() / n);
        let var = ((self.sq.value() - n * mean.norm_sqr()) / (n - 1.0)).max(0.0);
        MCEstimate { value: mean * scale, stderr: Float::sqrt(var / n) * scale, samples, seed }
    }
}

/// Draws `samples` points uniformly on the unit sphere of `C^r` in fixed
/// batches of [`MC_BATCH`], batch `t` using ChaCha8 stream `t` of `seed`.
fn for_each_sphere_sample(r: usize, samples: usize, seed: u64, mut f: impl FnMut(usize, &[C64])) {
    let mut w = alloc::vec![C64::new(0.0, 0.0); r];
    let batches = samples.div_ceil(MC_BATCH);
    for batch in 0..batches {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch as u64);
        let len = MC_BATCH.min(samples - batch * MC_BATCH);
        for _ in 0..len {
            loop {
                for z in w.iter_mut() {
                    *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                }
                let nrm = Float::sqrt(w.iter().map(|z| z.norm_sqr()).sum::<f64>());
                if nrm > 0.0 {
                    w.iter_mut().for_each(|z| *z /= nrm);
                    break;
                }
            }
            f(batch, &w);
        }
    }
}

fn monomial(w: &[C64], a: &[usize]) -> C64 {
    a.iter().fold(C64::new(1.0, 0.0), |acc, &e| acc * w[e - 1])
}

fn inv_factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, t| acc / t as f64)
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_MC_SAMPLES} Monte Carlo samples, got {samples}"
        )));
    }
    Ok(())
}

/// Monte Carlo estimate of `∫ W_A W̄_B / |W|^{2k}` over `P^{r−1}`.
///
/// Deterministic in `(samples, seed)` and bit-identical to the matching
/// entry of [`monomial_integral_mc_table`].
pub fn monomial_integral_mc(a: &SymIndex, b: &SymIndex, r: usize, samples: usize, seed: u64) -> Result<MCEstimate> {
    check_pair(a, b, r)?;
    check_samples(samples)?;
    let mut total = Moments::default();
    let mut batch_acc = Moments::default();
    let mut current = 0;
    for_each_sphere_sample(r, samples, seed, |batch, w| {
        if batch != current {
            total.merge(&batch_acc);
            batch_acc = Moments::default();
            current = batch;
        }
        batch_acc.push(monomial(w, a.entries()) * monomial(w, b.entries()).conj());
    });
    total.merge(&batch_acc);
    Ok(total.estimate(samples, inv_factorial(r - 1), seed))
}

/// All-pairs Monte Carlo table over `enumerate_sym_indices(r, k)`, sharing
/// one sample stream; `table[p][q]` estimates the `(basis[p], basis[q])`
/// integral.
pub fn monomial_integral_mc_table(r: usize, k: usize, samples: usize, seed: u64) -> Result<(Vec<SymIndex>, Vec<Vec<MCEstimate>>)> {
    check_samples(samples)?;
    let basis = enumerate_sym_indices(r, k)?;
    let d = basis.len();
    let mut total = alloc::vec![Moments::default(); d * d];
    let mut batch_acc = total.clone();
    let mut values = alloc::vec![C64::new(0.0, 0.0); d];
    let mut current = 0;
    for_each_sphere_sample(r, samples, seed, |batch, w| {
        if batch != current {
            for (t, b) in total.iter_mut().zip(batch_acc.iter_mut()) {
                t.merge(b);
                *b = Moments::default();
            }
            current = batch;
        }
        for (v, a) in values.iter_mut().zip(&basis) {
            *v = monomial(w, a.entries());
        }
        for p in 0..d {
            for q in 0..d {
                batch_acc[p * d + q].push(values[p] * values[q].conj());
            }
        }
    });
    for (t, b) in total.iter_mut().zip(&batch_acc) {
        t.merge(b);
    }
    let scale = inv_factorial(r - 1);
    let table = (0..d)
        .map(|p| (0..d).map(|q| total[p * d + q].estimate(samples, scale, seed)).collect())
        .collect();
    Ok((basis, table))
}

/// Induced `L²` metric on `S^kE` over the fiber `P^{r−1}` with Kähler form
/// `(k+r)ω_FS`, as exact rationals over `enumerate_sym_indices(r, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct L2Metric {
    pub basis: Vec<SymIndex>,
    /// Row-major `basis.len() × basis.len()`.
    pub entries: Vec<BigRational>,
}

impl L2Metric {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn get(&self, p: usize, q: usize) -> &BigRational {
        &self.entries[p * self.dim() + q]
    }

    pub fn to_metric_gram(&self) -> Result<MetricGram> {
        let d = self.dim();
        let m = CMatrix::from_fn(d, d, |p, q| C64::new(self.get(p, q).to_f64().unwrap_or(f64::NAN), 0.0));
        MetricGram::new(m)
    }
}

/// `g[A][B] = (k+r)^{r−1} · δ_{AB} / (r+k−1)!`.
pub fn l2_induced_metric(r: usize, k: usize) -> Result<L2Metric> {
    let basis = enumerate_sym_indices(r, k)?;
    let volume = BigRational::from_integer(BigInt::from(k + r).pow((r - 1) as u32));
    let mut entries = Vec::with_capacity(basis.len() * basis.len());
    for a in &basis {
        for b in &basis {
            entries.push(&volume * monomial_integral_exact(a, b, r)?);
        }
    }
    Ok(L2Metric { basis, entries })
}

/// Max deviation between `R[i][j][α][β] + δ_{αβ} Σ_γ R[i][j][γ][γ]` and
/// `r! ∫ (W_α W̄_β / |W|²) φ_{ij}` with
/// `φ_{ij} = (r+1) Σ R[i][j][γ][δ] W_δ W̄_γ / |W|²`, the integral expanded
/// into degree-2 monomials and evaluated exactly.
pub fn demailly_skoda_identity_residual(t: &CurvatureTensor) -> Result<f64> {
    let (n, r) = (t.base_dim(), t.rank());
    // weight[α][β][γ][δ] = r!(r+1) ∫ W_α W_δ · conj(W_β W_γ).
    let prefactor = BigRational::from_integer(big_factorial(r + 1));
    let mut weight = alloc::vec![0.0f64; r * r * r * r];
    for a in 0..r {
        for b in 0..r {
            for g in 0..r {
                for d in 0..r {
                    let left = SymIndex::from_unsorted(alloc::vec![a + 1, d + 1], r)?;
                    let right = SymIndex::from_unsorted(alloc::vec![b + 1, g + 1], r)?;
                    let exact = &prefactor * monomial_integral_exact(&left, &right, r)?;
                    weight[((a * r + b) * r + g) * r + d] = exact.to_f64().unwrap_or(f64::NAN);
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let trace: C64 = (0..r).map(|g| t.get(i, j, g, g)).sum();
            for a in 0..r {
                for b in 0..r {
                    let mut lhs = t.get(i, j, a, b);
                    if a == b {
                        lhs += trace;
                    }
                    let mut rhs = C64::new(0.0, 0.0);
                    for g in 0..r {
                        for d in 0..r {
                            let w = weight[((a * r + b) * r + g) * r + d];
                            if w != 0.0 {
                                rhs += t.get(i, j, g, d) * w;
                            }
                        }
                    }
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    if worst.is_nan() {
        return Err(Error::NonFinite);
    }
    Ok(worst)
}

/// Horizontal curvature of the quotient metric on the tautological line
/// bundle at the fiber point `W`.
pub fn quotient_horizontal_curvature(
    t: &CurvatureTensor,
    w: &HomogeneousPoint,
    variant: QuotientVariant,
) -> Result<HorizontalHessian> {
    if w.rank() != t.rank() {
        return Err(Error::DimensionMismatch { expected: t.rank(), found: w.rank() });
    }
    let s = 1.0 / w.norm_sqr();
    let values = match variant {
        QuotientVariant::DualProjectivization => {
            let conj: Vec<C64> = w.coords().iter().map(|z| z.conj()).collect();
            t.fiber_contraction(&conj).scale(C64::new(s, 0.0))
        }
        QuotientVariant::DirectProjectivization => t.fiber_contraction(w.coords()).scale(C64::new(-s, 0.0)),
    };
    Ok(HorizontalHessian { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::random_hermitian_curvature;
    use crate::models::fubini_study_tangent;
    use alloc::vec;

    fn idx(e: &[usize], r: usize) -> SymIndex {
        SymIndex::new(e.to_vec(), r).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_small_values() {
        assert_eq!(monomial_integral_exact(&idx(&[1], 2), &idx(&[1], 2), 2), Ok(q(1, 2)));
        assert_eq!(monomial_integral_exact(&idx(&[1], 2), &idx(&[2], 2), 2), Ok(q(0, 1)));
        assert_eq!(monomial_integral_exact(&idx(&[1, 2], 2), &idx(&[1, 2], 2), 2), Ok(q(1, 6)));
        assert_eq!(monomial_integral_exact(&idx(&[1, 1], 2), &idx(&[1, 1], 2), 2), Ok(q(1, 3)));
        assert_eq!(monomial_integral_exact(&idx(&[], 3), &idx(&[], 3), 3), Ok(q(1, 2)));
        assert_eq!(monomial_integral_exact(&idx(&[1, 2, 3], 3), &idx(&[1, 2, 3], 3), 3), Ok(q(1, 120)));
    }

    #[test]
    fn exact_rejects_bad_input() {
        assert_eq!(
            monomial_integral_exact(&idx(&[1], 2), &idx(&[1, 1], 2), 2),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        );
        assert_eq!(
            monomial_integral_exact(&idx(&[3], 3), &idx(&[3], 3), 2),
            Err(Error::IndexOutOfRange { entry: 3, rank: 2 })
        );
        assert_eq!(monomial_integral_exact(&idx(&[], 1), &idx(&[], 1), 0), Err(Error::ZeroRank));
    }

    #[test]
    fn mc_matches_exact_on_small_cases() {
        let est = monomial_integral_mc(&idx(&[1], 2), &idx(&[1], 2), 2, 100_000, 7).unwrap();
        assert!((est.value.re - 0.5).abs() < 4.0 * est.stderr);
        assert!(est.value.im.abs() < 1e-15);
        let off = monomial_integral_mc(&idx(&[1], 2), &idx(&[2], 2), 2, 100_000, 7).unwrap();
        assert!(off.value.norm() < 4.0 * off.stderr);
        let e3 = monomial_integral_mc(&idx(&[1, 2, 3], 3), &idx(&[1, 2, 3], 3), 3, 200_000, 11).unwrap();
        assert!((e3.value.re - 1.0 / 120.0).abs() < 4.0 * e3.stderr);
    }

    #[test]
    fn mc_is_deterministic_and_table_consistent() {
        let a = idx(&[1, 2], 3);
        let b = idx(&[1, 2], 3);
        let one = monomial_integral_mc(&a, &b, 3, 5000, 3).unwrap();
        assert_eq!(one, monomial_integral_mc(&a, &b, 3, 5000, 3).unwrap());
        assert_ne!(one.value, monomial_integral_mc(&a, &b, 3, 5000, 4).unwrap().value);
        let (basis, table) = monomial_integral_mc_table(3, 2, 5000, 3).unwrap();
        let p = basis.iter().position(|s| *s == a).unwrap();
        assert_eq!(table[p][p], one);
        assert!(matches!(monomial_integral_mc(&a, &b, 3, 999, 3), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn mc_degree_zero_has_no_variance() {
        let e = monomial_integral_mc(&idx(&[], 3), &idx(&[], 3), 3, 2000, 1).unwrap();
        assert_eq!(e.stderr, 0.0);
        assert!((e.value.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn l2_metric_examples() {
        let g = l2_induced_metric(2, 1).unwrap();
        assert_eq!(g.entries, vec![q(3, 2), q(0, 1), q(0, 1), q(3, 2)]);
        let g = l2_induced_metric(2, 2).unwrap();
        assert_eq!(*g.get(0, 0), q(4, 3));
        assert_eq!(*g.get(1, 1), q(2, 3));
        assert_eq!(*g.get(0, 1), q(0, 1));
        for k in 0..5 {
            let g = l2_induced_metric(1, k).unwrap();
            assert_eq!(g.entries, vec![q(1, 1)]);
        }
        let gram = l2_induced_metric(3, 2).unwrap().to_metric_gram().unwrap();
        assert_eq!(gram.dim(), 6);
    }

    #[test]
    fn demailly_skoda_on_models() {
        assert!(demailly_skoda_identity_residual(&fubini_study_tangent(2).unwrap()).unwrap() < 1e-12);
        assert_eq!(demailly_skoda_identity_residual(&CurvatureTensor::zeros(2, 3).unwrap()), Ok(0.0));
        let t = random_hermitian_curvature(5, 3, 4, 0.0).unwrap();
        assert!(demailly_skoda_identity_residual(&t).unwrap() < 1e-10);
    }

    #[test]
    fn quotient_curvature_fs_example() {
        let fs = fubini_study_tangent(2).unwrap();
        let w = HomogeneousPoint::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let h = quotient_horizontal_curvature(&fs, &w, QuotientVariant::DualProjectivization).unwrap();
        assert_eq!(h.values, CMatrix::from_real_diagonal(&[1.0, 2.0]));
    }

    #[test]
    fn quotient_variants_and_scaling() {
        let t = random_hermitian_curvature(9, 3, 2, 0.0).unwrap();
        let w = HomogeneousPoint::new(vec![C64::new(0.3, -1.0), C64::new(0.5, 0.2)]).unwrap();
        let conj = HomogeneousPoint::new(w.coords().iter().map(|z| z.conj()).collect()).unwrap();
        let scaled = HomogeneousPoint::new(w.coords().iter().map(|z| z * C64::new(2.0, -3.0)).collect()).unwrap();
        let dual = quotient_horizontal_curvature(&t, &w, QuotientVariant::DualProjectivization).unwrap();
        let direct = quotient_horizontal_curvature(&t, &conj, QuotientVariant::DirectProjectivization).unwrap();
        assert!(dual.values.add(&direct.values).unwrap().max_abs() < 1e-14);
        let again = quotient_horizontal_curvature(&t, &scaled, QuotientVariant::DualProjectivization).unwrap();
        assert!(dual.values.sub(&again.values).unwrap().max_abs() < 1e-13);
        assert!(dual.values.hermitian_defect() < 1e-14);
    }

    #[test]
    fn homogeneous_point_validation() {
        assert_eq!(HomogeneousPoint::new(vec![C64::new(0.0, 0.0); 2]), Err(Error::ZeroPoint));
        assert_eq!(HomogeneousPoint::new(Vec::new()), Err(Error::ZeroRank));
        assert_eq!(HomogeneousPoint::new(vec![C64::new(f64::NAN, 0.0)]), Err(Error::NonFinite));
        let t = fubini_study_tangent(2).unwrap();
        let w = HomogeneousPoint::new(vec![C64::new(1.0, 0.0)]).unwrap();
        assert!(quotient_horizontal_curvature(&t, &w, QuotientVariant::DualProjectivization).is_err());
    }
}
