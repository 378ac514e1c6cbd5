//! Nakano, dual-Nakano and Griffiths positivity of curvature tensors, and the
//! Schur complement block lemma.
//!
//! Nakano and dual-Nakano positivity are decided exactly from the spectrum of
//! a Hermitian `nr×nr` matrix. Griffiths positivity asks for the minimum of
//! the biquadratic form `f(u, v)` over `|u| = |v| = 1`, which is only solved
//! exactly when `n = 1` or `r = 1`; otherwise the search is a multistart
//! alternating minimization and the verdict is marked
//! [`Method::MultistartHeuristic`]. A heuristic margin is an upper bound on
//! the true minimum: a non-positive value is a genuine witness, a positive one
//! is not a certificate.
//!
//! Tolerances are relative. The absolute threshold recorded in
//! [`Verdict::tolerance`] is `tol × ρ`, where `ρ` is the largest absolute
//! eigenvalue of the Nakano matrix (or `tol` itself for the zero tensor).

use alloc::vec::Vec;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianEigen, C64};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Positive,
    SemiPositive,
    Indefinite,
    SemiNegative,
    Negative,
}

impl Classification {
    /// Classifies a form from its minimum and maximum on the unit sphere.
    ///
    /// A form that vanishes to tolerance is reported as semi-positive.
    pub fn from_range(min: f64, max: f64, tol: f64) -> Self {
        if min > tol {
            Self::Positive
        } else if max < -tol {
            Self::Negative
        } else if min >= -tol {
            Self::SemiPositive
        } else if max <= tol {
            Self::SemiNegative
        } else {
            Self::Indefinite
        }
    }

    pub fn is_positive(self) -> bool {
        self == Self::Positive
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Positive => "positive",
            Self::SemiPositive => "semi_positive",
            Self::Indefinite => "indefinite",
            Self::SemiNegative => "semi_negative",
            Self::Negative => "negative",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ExactEigen,
    MultistartHeuristic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ExactEigen => "exact_eigen",
            Self::MultistartHeuristic => "multistart_heuristic",
        }
    }
}

/// Outcome of a positivity test.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub classification: Classification,
    /// Minimum of the form on the unit sphere (best found, for heuristics).
    pub margin: f64,
    /// Maximum of the form on the unit sphere (best found, for heuristics).
    pub max_value: f64,
    /// Unit vector `u^{iα}` (index `i·r + α`) at which the form equals
    /// `margin`. Griffiths witnesses are the decomposable `u ⊗ v`.
    pub witness: Vec<C64>,
    pub method: Method,
    /// Absolute threshold used for the classification.
    pub tolerance: f64,
    /// Number of initializations, heuristic search only.
    pub starts_used: Option<usize>,
    /// Set when no start of a heuristic search converged.
    pub inconclusive: bool,
}

fn absolute_tolerance(rel: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        rel * scale
    } else {
        rel
    }
}

fn conj_vec(v: &[C64]) -> Vec<C64> {
    v.iter().map(|z| z.conj()).collect()
}

fn exact_verdict(eig: &HermitianEigen, tol: f64) -> Verdict {
    let tolerance = absolute_tolerance(tol, eig.spectral_radius());
    let (margin, max_value) = (eig.min(), eig.max());
    Verdict {
        classification: Classification::from_range(margin, max_value, tolerance),
        margin,
        max_value,
        // Σ M_pq u_p conj(u_q) = x* M x for x = conj(u).
        witness: conj_vec(&eig.vector(0)),
        method: Method::ExactEigen,
        tolerance,
        starts_used: None,
        inconclusive: false,
    }
}

/// Nakano positivity: spectrum of `M[(i,α)][(j,β)] = R[i][j][α][β]`.
pub fn nakano_test(r: &CurvatureTensor, tol: f64) -> Result<Verdict> {
    Ok(exact_verdict(&linalg::hermitian_eigen(&r.nakano_matrix())?, tol))
}

/// Dual-Nakano positivity: spectrum of `N[(i,β)][(j,α)] = R[i][j][α][β]`.
pub fn dual_nakano_test(r: &CurvatureTensor, tol: f64) -> Result<Verdict> {
    Ok(exact_verdict(&linalg::hermitian_eigen(&r.dual_nakano_matrix())?, tol))
}

/// Nakano spectrum, ascending.
pub fn nakano_eigenvalues(r: &CurvatureTensor) -> Result<Vec<f64>> {
    Ok(linalg::hermitian_eigen(&r.nakano_matrix())?.values)
}

/// Dual-Nakano spectrum, ascending.
pub fn dual_nakano_eigenvalues(r: &CurvatureTensor) -> Result<Vec<f64>> {
    Ok(linalg::hermitian_eigen(&r.dual_nakano_matrix())?.values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GriffithsOptions {
    /// Seeded random initializations, in addition to the `n·r` coordinate
    /// pairs.
    pub starts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for GriffithsOptions {
    fn default() -> Self {
        Self { starts: 32, max_iters: 500, seed: 0 }
    }
}

/// Griffiths positivity: minimum of
/// `f(u, v) = Σ R[i][j][α][β] u^i conj(u^j) v^α conj(v^β)` over unit `u, v`.
pub fn griffiths_test(r: &CurvatureTensor, tol: f64, opts: &GriffithsOptions) -> Result<Verdict> {
    if opts.starts == 0 {
        return Err(Error::InvalidParameter("griffiths search needs at least one start".into()));
    }
    let scale = linalg::hermitian_eigen(&r.nakano_matrix())?.spectral_radius();
    let tolerance = absolute_tolerance(tol, scale);
    let (n, rank) = (r.base_dim(), r.rank());

    if n == 1 || rank == 1 {
        // A single Hermitian eigenproblem in the free factor.
        let unit = [C64::new(1.0, 0.0)];
        let m = if rank == 1 { r.fiber_contraction(&unit) } else { r.base_contraction(&unit) };
        let eig = linalg::hermitian_eigen(&m)?;
        // The witness is u ⊗ v with one factor the scalar 1.
        let witness = conj_vec(&eig.vector(0));
        return Ok(Verdict {
            classification: Classification::from_range(eig.min(), eig.max(), tolerance),
            margin: eig.min(),
            max_value: eig.max(),
            witness,
            method: Method::ExactEigen,
            tolerance,
            starts_used: None,
            inconclusive: false,
        });
    }

    let search = AlternatingSearch { tensor: r, scale, opts };
    let low = search.minimize(false)?;
    let max_value = -search.minimize(true)?.value;
    let classification = Classification::from_range(low.value, max_value, tolerance);
    Ok(Verdict {
        classification,
        margin: low.value,
        max_value,
        witness: kron(&low.u, &low.v),
        method: Method::MultistartHeuristic,
        tolerance,
        starts_used: Some(low.starts),
        inconclusive: !low.converged,
    })
}

/// `w[i·r + α] = u[i]·v[α]`.
pub fn kron(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
}

struct SearchResult {
    value: f64,
    u: Vec<C64>,
    v: Vec<C64>,
    starts: usize,
    converged: bool,
}

struct AlternatingSearch<'a> {
    tensor: &'a CurvatureTensor,
    scale: f64,
    opts: &'a GriffithsOptions,
}

impl AlternatingSearch<'_> {
    fn initial_points(&self) -> Vec<(Vec<C64>, Vec<C64>)> {
        let (n, r) = (self.tensor.base_dim(), self.tensor.rank());
        let basis = |dim: usize, k: usize| -> Vec<C64> {
            (0..dim).map(|t| C64::new((t == k) as u8 as f64, 0.0)).collect()
        };
        let mut points = Vec::with_capacity(n * r + self.opts.starts);
        for i in 0..n {
            for a in 0..r {
                points.push((basis(n, i), basis(r, a)));
            }
        }
        for s in 0..self.opts.starts {
            let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
            rng.set_stream(s as u64);
            let mut draw = |dim: usize| -> Vec<C64> {
                let raw: Vec<C64> = (0..dim)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        C64::new(re, im)
                    })
                    .collect();
                linalg::normalized(&raw).unwrap_or_else(|| basis(dim, 0))
            };
            let u = draw(n);
            let v = draw(r);
            points.push((u, v));
        }
        points
    }

    /// Minimizes `±f` from every initial point; ties keep the lowest start
    /// index.
    fn minimize(&self, negate: bool) -> Result<SearchResult> {
        let sign = if negate { -1.0 } else { 1.0 };
        let step_tol = 1e-12 * self.scale.max(1.0);
        let points = self.initial_points();
        let starts = points.len();
        let mut best: Option<SearchResult> = None;
        let mut any_converged = false;

        for (mut u, mut v) in points {
            let mut value = sign * self.tensor.griffiths_form(&u, &v);
            let mut converged = false;
            for _ in 0..self.opts.max_iters {
                let h = self.tensor.fiber_contraction(&v).scale(C64::new(sign, 0.0));
                u = smallest_direction(&h, &u, self.scale)?;
                let k = self.tensor.base_contraction(&u).scale(C64::new(sign, 0.0));
                v = smallest_direction(&k, &v, self.scale)?;
                let next = sign * self.tensor.griffiths_form(&u, &v);
                let decrease = value - next;
                value = next;
                if decrease < step_tol {
                    converged = true;
                    break;
                }
            }
            any_converged |= converged;
            let better = best.as_ref().is_none_or(|b| value < b.value);
            if better {
                best = Some(SearchResult { value, u, v, starts, converged });
            }
        }
        let mut best = best.expect("at least one start");
        best.converged = any_converged;
        Ok(best)
    }
}

/// Unit minimizer of `Σ H_pq w_p conj(w_q)`, i.e. `conj` of the lowest
/// eigenvector of `H`. Within a degenerate lowest eigenspace the vector
/// closest to `previous` is chosen.
fn smallest_direction(h: &CMatrix, previous: &[C64], scale: f64) -> Result<Vec<C64>> {
    let eig = linalg::hermitian_eigen(h)?;
    let degenerate = 1e-10 * scale.max(1.0);
    let prev_x = conj_vec(previous);
    let dim = h.rows();
    let mut proj = alloc::vec![C64::zero(); dim];
    for k in 0..dim {
        if eig.values[k] > eig.min() + degenerate {
            break;
        }
        let e = eig.vector(k);
        // Component of the previous iterate along e.
        let coeff: C64 = e.iter().zip(&prev_x).map(|(a, b)| a.conj() * b).sum();
        for (p, ek) in proj.iter_mut().zip(&e) {
            *p += ek * coeff;
        }
    }
    let x = if linalg::norm(&proj) > 1e-8 {
        linalg::normalized(&proj).expect("nonzero projection")
    } else {
        eig.vector(0)
    };
    Ok(conj_vec(&x))
}

/// `T = [[A, B], [C, D]]` with `A` `p×p` and `D` `q×q`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
}

impl BlockMatrix {
    pub fn new(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self> {
        let (p, q) = (a.rows(), d.rows());
        let ok = a.is_square()
            && d.is_square()
            && b.rows() == p
            && b.cols() == q
            && c.rows() == q
            && c.cols() == p;
        if !ok {
            return Err(Error::DimensionMismatch { expected: p + q, found: b.rows() + c.rows() });
        }
        Ok(Self { a, b, c, d })
    }

    /// Splits a square matrix after its first `p` rows and columns.
    pub fn split(t: &CMatrix, p: usize) -> Result<Self> {
        if !t.is_square() || p > t.rows() {
            return Err(Error::DimensionMismatch { expected: t.rows(), found: p });
        }
        let q = t.rows() - p;
        Self::new(t.block(0, 0, p, p), t.block(0, p, p, q), t.block(p, 0, q, p), t.block(p, p, q, q))
    }

    pub fn assembled(&self) -> CMatrix {
        CMatrix::from_blocks(&self.a, &self.b, &self.c, &self.d).expect("validated block shapes")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchurComplement {
    /// `A − B·D⁻¹·C`.
    pub complement: CMatrix,
    /// `T⁻¹` assembled blockwise from the complement, when requested.
    pub inverse: Option<CMatrix>,
}

/// Schur complement of `D` in `T`, and optionally
///
/// ```text
/// T⁻¹ = [[ S⁻¹,          −S⁻¹·B·D⁻¹               ],
///        [ −D⁻¹·C·S⁻¹,    D⁻¹·C·S⁻¹·B·D⁻¹ + D⁻¹  ]]
/// ```
///
/// with `S = A − B·D⁻¹·C`. `tol` bounds the smallest singular value of `D`
/// (and of `S` when the inverse is requested).
pub fn schur_complement(t: &BlockMatrix, tol: f64, with_inverse: bool) -> Result<SchurComplement> {
    let sigma_min = linalg::smallest_singular_value(&t.d)?;
    if sigma_min <= tol {
        return Err(Error::SingularBlock { sigma_min });
    }
    let d_inv = linalg::inverse(&t.d).map_err(|_| Error::SingularBlock { sigma_min })?;
    let complement = t.a.sub(&t.b.mul(&d_inv)?.mul(&t.c)?)?;
    if !with_inverse {
        return Ok(SchurComplement { complement, inverse: None });
    }
    if linalg::smallest_singular_value(&complement)? <= tol {
        return Err(Error::SingularMatrix);
    }
    let s_inv = linalg::inverse(&complement)?;
    let b_dinv = t.b.mul(&d_inv)?;
    let dinv_c = d_inv.mul(&t.c)?;
    let top_right = s_inv.mul(&b_dinv)?.scale(C64::new(-1.0, 0.0));
    let bottom_left = dinv_c.mul(&s_inv)?.scale(C64::new(-1.0, 0.0));
    let bottom_right = dinv_c.mul(&s_inv)?.mul(&b_dinv)?.add(&d_inv)?;
    let inverse = CMatrix::from_blocks(&s_inv, &top_right, &bottom_left, &bottom_right)?;
    Ok(SchurComplement { complement, inverse: Some(inverse) })
}
