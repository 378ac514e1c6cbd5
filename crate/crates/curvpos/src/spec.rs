//! Certification spec files (`curvpos.spec/v1`).

use curvpos_core::positivity::GriffithsOptions;
use serde::{Deserialize, Serialize};

use crate::error::SpecError;
use crate::expr::{self, BundleExpr, Frame, Shape};

pub const SPEC_SCHEMA: &str = "curvpos.spec/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Nakano,
    DualNakano,
    Griffiths,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Nakano => "nakano",
            Self::DualNakano => "dual_nakano",
            Self::Griffiths => "griffiths",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GriffithsSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spec {
    pub schema: String,
    pub bundle: BundleExpr,
    pub tests: Vec<TestKind>,
    /// Relative tolerance; defaults to `DEFAULT_TOLERANCE`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub griffiths: Option<GriffithsSettings>,
}

impl Spec {
    pub fn griffiths_options(&self, seed: u64) -> GriffithsOptions {
        let d = GriffithsOptions::default();
        let g = self.griffiths.clone().unwrap_or_default();
        GriffithsOptions { starts: g.starts.unwrap_or(d.starts), max_iters: g.max_iters.unwrap_or(d.max_iters), seed }
    }
}

/// Parses and validates a spec, returning it with the bundle's shape.
pub fn parse_spec(text: &str) -> Result<(Spec, Shape), SpecError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: Spec = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." || path == "?" { "$".to_string() } else { format!("$.{path}") };
        SpecError::at(&path, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| SpecError::at("$", e.to_string()))?;
    let shape = check_spec(&spec)?;
    Ok((spec, shape))
}

/// Semantic checks on an already deserialized spec.
pub fn check_spec(spec: &Spec) -> Result<Shape, SpecError> {
    if spec.schema != SPEC_SCHEMA {
        return Err(SpecError::at("$.schema", format!("unsupported schema {:?}, expected {SPEC_SCHEMA:?}", spec.schema)));
    }
    if spec.tests.is_empty() {
        return Err(SpecError::at("$.tests", "at least one test is required"));
    }
    for (t, kind) in spec.tests.iter().enumerate() {
        if spec.tests[..t].contains(kind) {
            return Err(SpecError::at(&format!("$.tests[{t}]"), format!("duplicate test {}", kind.as_str())));
        }
    }
    check_tolerance(spec.tolerance, "$.tolerance")?;
    if let Some(g) = &spec.griffiths {
        if g.starts == Some(0) {
            return Err(SpecError::at("$.griffiths.starts", "starts must be at least 1"));
        }
        if g.max_iters == Some(0) {
            return Err(SpecError::at("$.griffiths.max_iters", "max_iters must be at least 1"));
        }
    }
    let shape = expr::validate(&spec.bundle)?;
    if shape.frame == Frame::Monomial {
        return Err(SpecError::at("$.bundle", "the certified bundle is in a monomial frame; wrap it in orthonormalize"));
    }
    Ok(shape)
}

pub fn check_tolerance(tol: Option<f64>, path: &str) -> Result<(), SpecError> {
    match tol {
        Some(t) if !(t.is_finite() && t > 0.0) => Err(SpecError::at(path, "tolerance must be a positive finite number")),
        _ => Ok(()),
    }
}

/// Canonical pretty-printed JSON, newline-terminated.
pub fn print_spec(spec: &Spec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("spec serializes");
    s.push('\n');
    s
}
