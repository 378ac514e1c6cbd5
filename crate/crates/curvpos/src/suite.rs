//! Built-in batteries of identity checks and worked examples.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use curvpos_core::curvature::{
    det_curvature, dual_curvature, random_hermitian_curvature, sym_power_curvature, tensor_curvature, twist_by_line,
};
use curvpos_core::linalg::{hermitian_eigen, CMatrix};
use curvpos_core::models::{
    canonical_bundle, counterexample_adjoint, fubini_study_tangent, hyperbolic_cotangent, projective_line_bundle,
};
use curvpos_core::multiindex::{enumerate_sym_indices, generalized_delta};
use curvpos_core::positivity::{
    dual_nakano_test, griffiths_test, nakano_eigenvalues, nakano_test, schur_complement, BlockMatrix,
    GriffithsOptions, Verdict, DEFAULT_TOLERANCE,
};
use curvpos_core::quadrature::{
    demailly_skoda_identity_residual, l2_induced_metric, monomial_integral_exact, monomial_integral_mc_table,
};
use curvpos_core::{CurvatureTensor, Error as CoreError, C64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::CliError;
use crate::report::{sha256_digest, Check, Input, Outcome, Report, Tool, VerdictRecord, REPORT_SCHEMA};

const IDENTITY_TOL: f64 = 1e-10;
const DUALITY_TOL: f64 = 1e-12;
const EXACT_TOL: f64 = 1e-9;
const GRIFFITHS_TOL: f64 = 1e-6;
const MC_SAMPLES: usize = 20_000;
/// Monte Carlo agreement in standard errors; looser than the acceptance
/// suite because the suite seed is user-chosen.
const MC_SIGMAS: f64 = 5.0;
const MC_FLOOR: f64 = 1e-12;
const RANDOM_TENSORS: u64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Identities,
    Examples,
    Counterexamples,
    All,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Identities => "identities",
            Self::Examples => "examples",
            Self::Counterexamples => "counterexamples",
            Self::All => "all",
        }
    }
}

impl FromStr for SuiteName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "identities" => Ok(Self::Identities),
            "examples" => Ok(Self::Examples),
            "counterexamples" => Ok(Self::Counterexamples),
            "all" => Ok(Self::All),
            other => Err(CliError::Usage(format!(
                "unknown suite {other:?}; expected identities, examples, counterexamples or all"
            ))),
        }
    }
}

#[derive(Default)]
struct Battery {
    verdicts: Vec<VerdictRecord>,
    checks: Vec<Check>,
}

impl Battery {
    fn verdict(&mut self, label: String, test: &str, v: &Verdict, rank: usize) {
        self.verdicts.push(VerdictRecord::new(label, test, v, rank));
    }

    fn check(&mut self, name: impl Into<String>, value: f64, expected: impl Into<String>, passed: bool) {
        self.checks.push(Check::new(name, value, expected, passed));
    }

    fn at_most(&mut self, name: impl Into<String>, value: f64, bound: f64) {
        self.check(name, value, format!("<= {bound:e}"), value <= bound);
    }

    fn near(&mut self, name: impl Into<String>, value: f64, target: f64, tol: f64) {
        self.check(name, value, format!("{target} +- {tol:e}"), (value - target).abs() <= tol);
    }
}

pub fn run_suite(name: SuiteName, seed: u64, timings: bool) -> Result<Report, CliError> {
    let mut battery = Battery::default();
    let mut times = BTreeMap::new();
    let parts: &[SuiteName] = match name {
        SuiteName::All => &[SuiteName::Identities, SuiteName::Examples, SuiteName::Counterexamples],
        _ => std::slice::from_ref(&name),
    };
    for part in parts {
        let start = Instant::now();
        match part {
            SuiteName::Identities => identities(&mut battery, seed)?,
            SuiteName::Examples => examples(&mut battery, seed)?,
            SuiteName::Counterexamples => counterexamples(&mut battery)?,
            SuiteName::All => unreachable!("expanded above"),
        }
        times.insert(part.as_str().to_string(), start.elapsed().as_secs_f64());
    }
    let outcome = Outcome::from_checks(&battery.checks);
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        tool: Tool::current(),
        command: "suite".into(),
        input: Input { digest: sha256_digest(format!("suite:{}", name.as_str()).as_bytes()), suite: Some(name.as_str().into()) },
        seed,
        tolerance: DEFAULT_TOLERANCE,
        bundle: None,
        verdicts: battery.verdicts,
        checks: battery.checks,
        timings: timings.then_some(times),
        outcome,
    })
}

fn random_shape(seed: u64, t: u64) -> (usize, usize) {
    let mix = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(t);
    (1 + (mix % 4) as usize, 1 + ((mix / 4) % 4) as usize)
}

fn identities(b: &mut Battery, seed: u64) -> Result<(), CoreError> {
    let mut worst = 0.0f64;
    for n in 1..=4 {
        worst = worst.max(demailly_skoda_identity_residual(&fubini_study_tangent(n)?)?);
    }
    b.at_most("demailly_skoda_residual.fubini_study", worst, IDENTITY_TOL);

    let randoms: Vec<CurvatureTensor> = (0..RANDOM_TENSORS)
        .map(|t| {
            let (n, r) = random_shape(seed, t);
            random_hermitian_curvature(seed.wrapping_add(t), n, r, 0.0)
        })
        .collect::<Result<_, _>>()?;
    let mut worst = 0.0f64;
    for t in &randoms {
        worst = worst.max(demailly_skoda_identity_residual(t)?);
    }
    b.at_most("demailly_skoda_residual.random", worst, IDENTITY_TOL);

    let mut worst = 0.0f64;
    let mut involution_failures = 0;
    for t in &randoms {
        let d = dual_curvature(t);
        if dual_curvature(&d) != *t {
            involution_failures += 1;
        }
        let margin = dual_nakano_test(t, DEFAULT_TOLERANCE)?.margin;
        worst = worst.max((margin + hermitian_eigen(&d.nakano_matrix())?.max()).abs());
    }
    b.at_most("duality.dual_margin_plus_max_dual_eigenvalue", worst, DUALITY_TOL);
    b.check("duality.involution_failures", involution_failures as f64, "== 0", involution_failures == 0);

    let mut mismatches = 0;
    for r in 1..=4usize {
        for k in 0..=4usize {
            let g = l2_induced_metric(r, k)?;
            let fact: BigInt = (1..r + k).product();
            let constant = BigRational::new(BigInt::from(r + k).pow(r as u32 - 1), fact);
            for (p, a) in g.basis.iter().enumerate() {
                for (q, c) in g.basis.iter().enumerate() {
                    if *g.get(p, q) != &constant * BigInt::from(generalized_delta(a, c)?) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    b.check("l2_metric_constant.mismatches", mismatches as f64, "== 0", mismatches == 0);

    let mut worst = 0.0f64;
    let mut passed = true;
    for r in 1..=3usize {
        for k in 0..=2usize {
            let (basis, table) = monomial_integral_mc_table(r, k, MC_SAMPLES, seed.wrapping_add((10 * r + k) as u64))?;
            for (p, x) in basis.iter().enumerate() {
                for (q, y) in basis.iter().enumerate() {
                    let exact = monomial_integral_exact(x, y, r)?.to_f64().unwrap_or(f64::NAN);
                    let est = table[p][q];
                    let err = (est.value - C64::new(exact, 0.0)).norm();
                    passed &= err <= MC_SIGMAS * est.stderr + MC_FLOOR;
                    if est.stderr > 0.0 {
                        worst = worst.max(err / est.stderr);
                    }
                }
            }
        }
    }
    b.check("monomial_integral.mc_worst_stderr_units", worst, format!("<= {MC_SIGMAS} (r <= 3, k <= 2)"), passed);

    let mut worst = 0.0f64;
    let mut min_complement = f64::INFINITY;
    for t in 0..RANDOM_TENSORS {
        let m = 2 + (t % 11) as usize;
        let matrix = random_hermitian_curvature(seed.wrapping_add(1000 + t), 1, m, 0.05)?.nakano_matrix();
        let blocks = BlockMatrix::split(&matrix, 1 + (t as usize % (m - 1)))?;
        let sc = schur_complement(&blocks, DEFAULT_TOLERANCE, true)?;
        min_complement = min_complement.min(hermitian_eigen(&sc.complement)?.min());
        let inv = sc.inverse.expect("inverse requested");
        worst = worst.max(matrix.mul(&inv)?.sub(&CMatrix::identity(m))?.inf_norm());
    }
    b.at_most("schur.block_inverse_residual", worst, IDENTITY_TOL);
    b.check("schur.min_complement_eigenvalue", min_complement, "> 0", min_complement > 0.0);

    let mut worst = 0.0f64;
    for t in &randoms {
        let s = sym_power_curvature(t, 1)?;
        worst = worst.max(s.tensor.max_deviation(t));
        let n = enumerate_sym_indices(t.rank(), 1)?.len();
        worst = worst.max(s.gram.matrix().sub(&CMatrix::identity(n))?.max_abs());
    }
    b.at_most("sym_power.degree_one_is_identity", worst, 0.0);
    Ok(())
}

fn exact_pair(b: &mut Battery, label: &str, t: &CurvatureTensor) -> Result<(Verdict, Verdict), CoreError> {
    let nk = nakano_test(t, DEFAULT_TOLERANCE)?;
    let dn = dual_nakano_test(t, DEFAULT_TOLERANCE)?;
    b.verdict(format!("{label}.nakano"), "nakano", &nk, t.rank());
    b.verdict(format!("{label}.dual_nakano"), "dual_nakano", &dn, t.rank());
    Ok((nk, dn))
}

fn griffiths(b: &mut Battery, label: &str, t: &CurvatureTensor, seed: u64) -> Result<Verdict, CoreError> {
    let v = griffiths_test(t, DEFAULT_TOLERANCE, &GriffithsOptions { seed, ..Default::default() })?;
    b.verdict(format!("{label}.griffiths"), "griffiths", &v, t.rank());
    Ok(v)
}

fn examples(b: &mut Battery, seed: u64) -> Result<(), CoreError> {
    for n in 2..=5usize {
        let label = format!("fubini_study_tangent(n={n})");
        let fs = fubini_study_tangent(n)?;
        let (nk, dn) = exact_pair(b, &label, &fs)?;
        let g = griffiths(b, &label, &fs, seed)?;
        b.near(format!("{label}.nakano_margin"), nk.margin, 0.0, EXACT_TOL);
        let zeros = nakano_eigenvalues(&fs)?.iter().filter(|v| v.abs() <= EXACT_TOL).count();
        let want = n * (n - 1) / 2;
        b.check(format!("{label}.nakano_zero_eigenspace_dim"), zeros as f64, format!("== {want}"), zeros == want);
        b.near(format!("{label}.dual_nakano_margin"), dn.margin, 1.0, EXACT_TOL);
        b.near(format!("{label}.griffiths_margin"), g.margin, 1.0, GRIFFITHS_TOL);
    }

    let fs2 = fubini_study_tangent(2)?;
    for k in 2..=3 {
        let label = format!("S^{k}(fubini_study_tangent(n=2))");
        let s = sym_power_curvature(&fs2, k)?.orthonormalized()?;
        let (nk, dn) = exact_pair(b, &label, &s)?;
        b.check(format!("{label}.nakano_margin"), nk.margin, "> 0", nk.classification.is_positive());
        b.check(format!("{label}.dual_nakano_margin"), dn.margin, "> 0", dn.classification.is_positive());
    }

    let k_p2 = canonical_bundle(2)?;
    for k in 3..=4 {
        let label = format!("S^{k}(fubini_study_tangent(n=2))(x)K");
        let t = twist_by_line(&sym_power_curvature(&fs2, k)?.orthonormalized()?, &k_p2)?;
        let g = griffiths(b, &label, &t, seed)?;
        if k == 3 {
            b.check(format!("{label}.griffiths_margin"), g.margin, "<= tolerance (semi)", g.margin <= g.tolerance);
        } else {
            b.check(format!("{label}.griffiths_margin"), g.margin, "> 0", g.classification.is_positive());
        }
    }

    for n in 2..=3usize {
        let label = format!("hyperbolic_cotangent(n={n})");
        let (nk, dn) = exact_pair(b, &label, &hyperbolic_cotangent(n)?)?;
        b.near(format!("{label}.nakano_margin"), nk.margin, 1.0, EXACT_TOL);
        b.check(format!("{label}.dual_nakano_margin"), dn.margin, "not positive", !dn.classification.is_positive());
    }

    for n in 2..=3usize {
        let label = format!("fubini_study_tangent(n={n})(x)O(-1)");
        let t = twist_by_line(&fubini_study_tangent(n)?, &projective_line_bundle(n, -1)?)?;
        let g = griffiths(b, &label, &t, seed)?;
        b.check(format!("{label}.griffiths_margin"), g.margin, "|margin| <= tolerance (semi)", g.margin.abs() <= g.tolerance);
    }

    let label = "fubini_study_tangent(n=2)(x)det";
    let e_det = tensor_curvature(&fs2, &det_curvature(&fs2).to_tensor())?;
    let (nk, dn) = exact_pair(b, label, &e_det)?;
    b.check(format!("{label}.nakano_margin"), nk.margin, "> 0", nk.classification.is_positive());
    b.check(format!("{label}.dual_nakano_margin"), dn.margin, "> 0", dn.classification.is_positive());

    let label = "S^2(fubini_study_tangent(n=2))(x)det^2(x)K";
    let det2 = det_curvature(&fs2).scaled(2.0);
    let s2 = sym_power_curvature(&fs2, 2)?.orthonormalized()?;
    let adj = twist_by_line(&twist_by_line(&s2, &det2)?, &k_p2)?;
    let (nk, _) = exact_pair(b, label, &adj)?;
    b.check(format!("{label}.nakano_margin"), nk.margin, "> 0", nk.classification.is_positive());
    Ok(())
}

fn counterexamples(b: &mut Battery) -> Result<(), CoreError> {
    // Threshold k0 >= n + 1 - r for E = O(1) + O(1) on P^n.
    for (n, k0s) in [(4usize, [1i64, 2, 3]), (3, [0, 1, 2])] {
        let threshold = (n + 1 - 2) as i64;
        for k0 in k0s {
            let label = format!("counterexample_adjoint(n={n}, r=2, k0={k0})");
            let t = counterexample_adjoint(n, 2, k0)?;
            let v = nakano_test(&t, DEFAULT_TOLERANCE)?;
            b.verdict(format!("{label}.nakano"), "nakano", &v, t.rank());
            let positive = v.classification.is_positive();
            if k0 >= threshold {
                b.check(format!("{label}.nakano_margin"), v.margin, "> 0", positive);
            } else {
                b.check(format!("{label}.nakano_margin"), v.margin, "<= tolerance", !positive && v.margin <= v.tolerance);
            }
        }
    }
    Ok(())
}
