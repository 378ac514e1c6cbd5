//! Model geometries.
//!
//! Line bundles on `P^n` are normalized so that `O(1)` has curvature
//! `δ_{ij}` in the orthonormal frame of the Fubini–Study metric; then
//! `det TP^n = O(n+1)` and `K_{P^n} = O(−n−1)`.

use alloc::format;
use alloc::vec::Vec;

use crate::curvature::{self, CurvatureTensor, LineCurvature};
use crate::error::{Error, Result};
use crate::linalg::C64;

fn delta(a: usize, b: usize) -> f64 {
    (a == b) as u8 as f64
}

/// Named model with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    FubiniStudyTangent { n: usize },
    ProjectiveLineBundle { n: usize, m: i64 },
    CanonicalBundle { n: usize },
    HyperbolicCotangent { n: usize },
    DirectSumLines { n: usize, degrees: Vec<i64> },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::FubiniStudyTangent { .. } => "fubini_study_tangent",
            Self::ProjectiveLineBundle { .. } => "projective_line_bundle",
            Self::CanonicalBundle { .. } => "canonical_bundle",
            Self::HyperbolicCotangent { .. } => "hyperbolic_cotangent",
            Self::DirectSumLines { .. } => "direct_sum_lines",
        }
    }

    /// `(base_dim, rank)` of the model, after validating its parameters.
    pub fn shape(&self) -> Result<(usize, usize)> {
        match self {
            Self::FubiniStudyTangent { n } => positive_dim(*n).map(|n| (n, n)),
            Self::ProjectiveLineBundle { n, .. } | Self::CanonicalBundle { n } => {
                positive_dim(*n).map(|n| (n, 1))
            }
            Self::HyperbolicCotangent { n } => {
                if *n < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "hyperbolic_cotangent needs n >= 2, got {n}"
                    )));
                }
                Ok((*n, *n))
            }
            Self::DirectSumLines { n, degrees } => {
                if degrees.is_empty() {
                    return Err(Error::InvalidParameter("direct_sum_lines needs at least one degree".into()));
                }
                positive_dim(*n).map(|n| (n, degrees.len()))
            }
        }
    }

    /// Curvature tensor of the model; line bundles come out with rank 1.
    pub fn tensor(&self) -> Result<CurvatureTensor> {
        self.shape()?;
        match self {
            Self::FubiniStudyTangent { n } => fubini_study_tangent(*n),
            Self::ProjectiveLineBundle { n, m } => Ok(projective_line_bundle(*n, *m)?.to_tensor()),
            Self::CanonicalBundle { n } => Ok(canonical_bundle(*n)?.to_tensor()),
            Self::HyperbolicCotangent { n } => hyperbolic_cotangent(*n),
            Self::DirectSumLines { n, degrees } => direct_sum_lines(*n, degrees),
        }
    }
}

fn positive_dim(n: usize) -> Result<usize> {
    if n == 0 {
        Err(Error::ZeroBaseDim)
    } else {
        Ok(n)
    }
}

/// `(TP^n, h_FS)`: `R[i][j][k][l] = δ_{ij}δ_{kl} + δ_{il}δ_{kj}`.
pub fn fubini_study_tangent(n: usize) -> Result<CurvatureTensor> {
    CurvatureTensor::from_fn(positive_dim(n)?, n, |i, j, k, l| {
        C64::new(delta(i, j) * delta(k, l) + delta(i, l) * delta(k, j), 0.0)
    })
}

/// `O_{P^n}(m)`: `c = m·δ_{ij}`.
pub fn projective_line_bundle(n: usize, m: i64) -> Result<LineCurvature> {
    LineCurvature::scalar(positive_dim(n)?, m as f64)
}

/// `K_{P^n} = O(−n−1)`.
pub fn canonical_bundle(n: usize) -> Result<LineCurvature> {
    projective_line_bundle(n, -(n as i64) - 1)
}

/// Cotangent bundle of a complex hyperbolic space form, with curvature
/// normalized to `−(FS)`: `R[i][j][α][β] = δ_{ij}δ_{αβ} + δ_{iα}δ_{jβ}`.
pub fn hyperbolic_cotangent(n: usize) -> Result<CurvatureTensor> {
    ModelSpec::HyperbolicCotangent { n }.shape()?;
    CurvatureTensor::from_fn(n, n, |i, j, a, b| {
        C64::new(delta(i, j) * delta(a, b) + delta(i, a) * delta(j, b), 0.0)
    })
}

/// `O(m₁) ⊕ … ⊕ O(m_k)` on `P^n`.
pub fn direct_sum_lines(n: usize, degrees: &[i64]) -> Result<CurvatureTensor> {
    let n = positive_dim(n)?;
    if degrees.is_empty() {
        return Err(Error::InvalidParameter("direct_sum_lines needs at least one degree".into()));
    }
    CurvatureTensor::from_fn(n, degrees.len(), |i, j, a, b| {
        C64::new(degrees[a] as f64 * delta(i, j) * delta(a, b), 0.0)
    })
}

/// `E ⊗ (det E)^{k₀} ⊗ K_S` for the sharpness examples `E = O(1) ⊕ O(1)`
/// on `S = P⁴` or `P³`; only these `(n, r)` pairs are accepted.
pub fn counterexample_adjoint(n: usize, r: usize, k0: i64) -> Result<CurvatureTensor> {
    if r != 2 || !(n == 3 || n == 4) {
        return Err(Error::UnsupportedModel(format!(
            "counterexample_adjoint is defined for (P^4, O(1)+O(1)) and (P^3, O(1)+O(1)), got n={n}, r={r}"
        )));
    }
    let e = direct_sum_lines(n, &[1, 1])?;
    let det = curvature::det_curvature(&e);
    let twisted = curvature::twist_by_line(&e, &det.scaled(k0 as f64))?;
    curvature::twist_by_line(&twisted, &canonical_bundle(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{det_curvature, dual_curvature, twist_by_line};
    use crate::linalg::CMatrix;
    use crate::positivity::{
        dual_nakano_eigenvalues, dual_nakano_test, griffiths_test, nakano_eigenvalues, nakano_test,
        Classification, GriffithsOptions, DEFAULT_TOLERANCE,
    };

    fn count_near(values: &[f64], target: f64) -> usize {
        values.iter().filter(|v| (*v - target).abs() < 1e-9).count()
    }

    #[test]
    fn fs_small_cases() {
        let fs1 = fubini_study_tangent(1).unwrap();
        assert_eq!(fs1.values(), &[C64::new(2.0, 0.0)]);
        let det = det_curvature(&fubini_study_tangent(2).unwrap());
        assert_eq!(det, LineCurvature::scalar(2, 3.0).unwrap());
    }

    #[test]
    fn fs_nakano_form_is_symmetrized_square() {
        // ½ Σ_{j,k} |u^{jk} + u^{kj}|².
        let n = 3;
        let fs = fubini_study_tangent(n).unwrap();
        let u: Vec<C64> = (0..n * n)
            .map(|t| C64::new((t as f64 * 0.7).sin(), (t as f64 * 1.3).cos()))
            .collect();
        let mut want = 0.0;
        for j in 0..n {
            for k in 0..n {
                want += 0.5 * (u[j * n + k] + u[k * n + j]).norm_sqr();
            }
        }
        assert!((fs.nakano_form(&u) - want).abs() < 1e-12);
    }

    #[test]
    fn fs_spectra() {
        // Nakano matrix I + Swap; dual-Nakano matrix I + vec(I)vec(I)*.
        for n in 2..=5 {
            let fs = fubini_study_tangent(n).unwrap();
            let nk = nakano_eigenvalues(&fs).unwrap();
            assert_eq!(count_near(&nk, 0.0), n * (n - 1) / 2);
            assert_eq!(count_near(&nk, 2.0), n * (n + 1) / 2);
            let dn = dual_nakano_eigenvalues(&fs).unwrap();
            assert_eq!(count_near(&dn, 1.0), n * n - 1);
            assert_eq!(count_near(&dn, (n + 1) as f64), 1);
            assert_eq!(nakano_test(&fs, DEFAULT_TOLERANCE).unwrap().classification, Classification::SemiPositive);
            assert_eq!(dual_nakano_test(&fs, DEFAULT_TOLERANCE).unwrap().classification, Classification::Positive);
        }
    }

    #[test]
    fn hyperbolic_cotangent_spectra() {
        for n in 2..=4 {
            let h = hyperbolic_cotangent(n).unwrap();
            assert_eq!(h, dual_curvature(&fubini_study_tangent(n).unwrap().scaled(-1.0)));
            // Nakano: I + vec(I)vec(I)*, eigenvalues 1 and 1 + n.
            let nk = nakano_eigenvalues(&h).unwrap();
            assert_eq!(count_near(&nk, 1.0), n * n - 1);
            assert_eq!(count_near(&nk, (n + 1) as f64), 1);
            // Dual-Nakano: I + Swap, eigenvalues 0 (antisymmetric) and 2.
            let dn = dual_nakano_eigenvalues(&h).unwrap();
            assert_eq!(count_near(&dn, 0.0), n * (n - 1) / 2);
            assert_eq!(count_near(&dn, 2.0), n * (n + 1) / 2);
            let v = dual_nakano_test(&h, DEFAULT_TOLERANCE).unwrap();
            assert!(!v.classification.is_positive());
        }
        assert!(matches!(hyperbolic_cotangent(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn line_bundles() {
        assert_eq!(projective_line_bundle(3, 0).unwrap().matrix().max_abs(), 0.0);
        assert_eq!(canonical_bundle(3).unwrap(), projective_line_bundle(3, -4).unwrap());
        let o11 = direct_sum_lines(4, &[1, 1]).unwrap();
        let v = nakano_test(&o11, DEFAULT_TOLERANCE).unwrap();
        assert!((v.margin - 1.0).abs() < 1e-14);
    }

    #[test]
    fn canonical_twist_trace_identity() {
        for n in 2..=4 {
            let fs = fubini_study_tangent(n).unwrap();
            let k = canonical_bundle(n).unwrap();
            let lhs = det_curvature(&twist_by_line(&fs, &k).unwrap());
            let rhs = det_curvature(&fs).add(&k.scaled(n as f64)).unwrap();
            assert!(lhs.matrix().sub(rhs.matrix()).unwrap().max_abs() < 1e-14);
        }
    }

    #[test]
    fn fs_twisted_by_minus_one_is_semi_griffiths() {
        // TP^n ⊗ O(−1): R = δ_{iβ}δ_{αj}, f(u, v) = |⟨u, v̄⟩|².
        for n in 2..=3 {
            let t = twist_by_line(&fubini_study_tangent(n).unwrap(), &projective_line_bundle(n, -1).unwrap())
                .unwrap();
            let v = griffiths_test(&t, DEFAULT_TOLERANCE, &GriffithsOptions::default()).unwrap();
            assert_eq!(v.classification, Classification::SemiPositive);
            assert!(v.margin.abs() <= v.tolerance);
        }
    }

    #[test]
    fn adjoint_counterexamples() {
        let expect = |k0: i64, degree: f64| {
            let t = counterexample_adjoint(4, 2, k0).unwrap();
            let want = CMatrix::from_real_diagonal(&[degree, degree]);
            for i in 0..4 {
                for a in 0..2 {
                    for b in 0..2 {
                        assert_eq!(t.get(i, i, a, b), want[(a, b)]);
                    }
                }
            }
            nakano_test(&t, DEFAULT_TOLERANCE).unwrap()
        };
        let v2 = expect(2, 0.0);
        assert!(!v2.classification.is_positive());
        assert!(v2.margin <= v2.tolerance);
        let v3 = expect(3, 2.0);
        assert_eq!(v3.classification, Classification::Positive);
        assert!((v3.margin - 2.0).abs() < 1e-14);
        assert_eq!(expect(1, -2.0).classification, Classification::Negative);
        // P^3: O(1)^{⊕2} ⊗ O(2k₀) ⊗ O(−4).
        assert_eq!(counterexample_adjoint(3, 2, 1).unwrap().get(0, 0, 0, 0), C64::new(-1.0, 0.0));
        assert!(matches!(counterexample_adjoint(5, 2, 1), Err(Error::UnsupportedModel(_))));
        assert!(matches!(counterexample_adjoint(4, 3, 1), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn model_spec_shapes() {
        assert_eq!(ModelSpec::FubiniStudyTangent { n: 3 }.shape(), Ok((3, 3)));
        assert_eq!(ModelSpec::DirectSumLines { n: 2, degrees: alloc::vec![1, -1, 0] }.shape(), Ok((2, 3)));
        assert!(ModelSpec::DirectSumLines { n: 2, degrees: Vec::new() }.shape().is_err());
        assert_eq!(ModelSpec::CanonicalBundle { n: 0 }.shape(), Err(Error::ZeroBaseDim));
        let t = ModelSpec::ProjectiveLineBundle { n: 2, m: 3 }.tensor().unwrap();
        assert_eq!(t.rank(), 1);
    }
}
