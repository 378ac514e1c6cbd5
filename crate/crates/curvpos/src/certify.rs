use std::collections::BTreeMap;
use std::time::Instant;

use curvpos_core::curvature::HERMITIAN_TOLERANCE;
use curvpos_core::positivity::{dual_nakano_test, griffiths_test, nakano_test, DEFAULT_TOLERANCE};

use crate::error::CliError;
use crate::expr::evaluate;
use crate::report::{sha256_digest, BundleInfo, Check, Input, Outcome, Report, Tool, VerdictRecord, REPORT_SCHEMA};
use crate::spec::{check_tolerance, parse_spec, TestKind};

#[derive(Clone, Copy, Debug, Default)]
pub struct CertifyOptions {
    /// Overrides the spec's tolerance.
    pub tolerance: Option<f64>,
    /// Overrides the spec's seed.
    pub seed: Option<u64>,
    pub timings: bool,
}

/// Parses, evaluates and certifies a spec given as raw bytes.
pub fn certify(bytes: &[u8], opts: CertifyOptions) -> Result<Report, CliError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CliError::Usage(format!("spec is not UTF-8: {e}")))?;
    let (spec, shape) = parse_spec(text)?;
    check_tolerance(opts.tolerance, "--tolerance")?;
    let tolerance = opts.tolerance.or(spec.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    let seed = opts.seed.or(spec.seed).unwrap_or(0);

    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let tensor = evaluate(&spec.bundle)?.tensor;
    timings.insert("evaluate".to_string(), start.elapsed().as_secs_f64());

    let scale = tensor.max_abs().max(1.0);
    let defect = tensor.hermitian_defect();
    let checks = vec![Check::new(
        "curvature_symmetry_defect",
        defect,
        format!("<= {HERMITIAN_TOLERANCE:e} * max(1, max|R|)"),
        defect <= HERMITIAN_TOLERANCE * scale,
    )];

    let mut verdicts = Vec::new();
    for kind in &spec.tests {
        let start = Instant::now();
        let v = match kind {
            TestKind::Nakano => nakano_test(&tensor, tolerance)?,
            TestKind::DualNakano => dual_nakano_test(&tensor, tolerance)?,
            TestKind::Griffiths => griffiths_test(&tensor, tolerance, &spec.griffiths_options(seed))?,
        };
        timings.insert(kind.as_str().to_string(), start.elapsed().as_secs_f64());
        verdicts.push(VerdictRecord::new(kind.as_str(), kind.as_str(), &v, tensor.rank()));
    }

    let outcome = Outcome::from_certification(&verdicts, &checks);
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        tool: Tool::current(),
        command: "certify".into(),
        input: Input { digest: sha256_digest(bytes), suite: None },
        seed,
        tolerance,
        bundle: Some(BundleInfo { base_dim: shape.base_dim, rank: shape.rank }),
        verdicts,
        checks,
        timings: opts.timings.then_some(timings),
        outcome,
    })
}
