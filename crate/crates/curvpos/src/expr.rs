//! Bundle construction expressions.
//!
//! An expression is a tree whose leaves are named models or literal
//! curvature tensors and whose internal nodes are bundle operations. In JSON
//! every node is a single-key object naming the operation:
//!
//! ```json
//! {"orthonormalize": {"sym_power": {"k": 2, "of": {"model": {"name": "fubini_study_tangent", "n": 2}}}}}
//! ```
//!
//! [`validate`] checks shapes bottom-up without doing any arithmetic and
//! reports the first violation together with the JSON path of the offending
//! node; [`evaluate`] then computes the curvature tensor.

use curvpos_core::curvature::{
    self, dual_curvature, orthonormalize_frame, sym_power_curvature, tensor_curvature, twist_by_line, LineCurvature,
    MetricGram,
};
use curvpos_core::models::{self, ModelSpec};
use curvpos_core::multiindex::binomial;
use curvpos_core::{CurvatureTensor, C64};
use serde::{Deserialize, Serialize};

use crate::error::SpecError;

/// Deepest tree accepted; a leaf has depth 1.
pub const MAX_DEPTH: usize = 32;

/// Largest `base_dim · rank` of any node. The dense Jacobi eigensolver is
/// cubic per sweep, so larger Nakano matrices are refused up front.
pub const MAX_NAKANO_DIM: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BundleExpr {
    Model(ModelLeaf),
    Literal(Literal),
    Dual(Box<BundleExpr>),
    /// Left-to-right tensor product of two or more bundles.
    Tensor(Vec<BundleExpr>),
    /// Determinant line bundle.
    Det(Box<BundleExpr>),
    DirectSum(Vec<BundleExpr>),
    /// `bundle ⊗ line`; `line` must have rank 1.
    Twist { bundle: Box<BundleExpr>, line: Box<BundleExpr> },
    /// `S^k` in the monomial frame; wrap in `orthonormalize` before use.
    SymPower { k: usize, of: Box<BundleExpr> },
    Orthonormalize(Box<BundleExpr>),
    /// Multiplies every curvature component by `factor`.
    Scale { factor: f64, of: Box<BundleExpr> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelLeaf {
    FubiniStudyTangent { n: usize },
    ProjectiveLineBundle { n: usize, m: i64 },
    CanonicalBundle { n: usize },
    HyperbolicCotangent { n: usize },
    DirectSumLines { n: usize, degrees: Vec<i64> },
    /// `E ⊗ (det E)^{k0} ⊗ K` for `E = O(1) ⊕ O(1)` on `P^n`, `n ∈ {3, 4}`.
    CounterexampleAdjoint { n: usize, r: usize, k0: i64 },
}

impl ModelLeaf {
    fn spec(&self) -> Option<ModelSpec> {
        Some(match self {
            Self::FubiniStudyTangent { n } => ModelSpec::FubiniStudyTangent { n: *n },
            Self::ProjectiveLineBundle { n, m } => ModelSpec::ProjectiveLineBundle { n: *n, m: *m },
            Self::CanonicalBundle { n } => ModelSpec::CanonicalBundle { n: *n },
            Self::HyperbolicCotangent { n } => ModelSpec::HyperbolicCotangent { n: *n },
            Self::DirectSumLines { n, degrees } => ModelSpec::DirectSumLines { n: *n, degrees: degrees.clone() },
            Self::CounterexampleAdjoint { .. } => return None,
        })
    }

    fn shape(&self) -> Result<(usize, usize), curvpos_core::Error> {
        match self {
            Self::CounterexampleAdjoint { n, r, k0 } => {
                models::counterexample_adjoint(*n, *r, *k0)?;
                Ok((*n, *r))
            }
            other => other.spec().expect("named model").shape(),
        }
    }

    fn tensor(&self) -> Result<CurvatureTensor, curvpos_core::Error> {
        match self {
            Self::CounterexampleAdjoint { n, r, k0 } => models::counterexample_adjoint(*n, *r, *k0),
            other => other.spec().expect("named model").tensor(),
        }
    }
}

/// Inline tensor: `values[i][j][α][β] = [re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Literal {
    pub base_dim: usize,
    pub rank: usize,
    pub values: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
}

impl Literal {
    pub fn from_tensor(t: &CurvatureTensor) -> Self {
        let (n, r) = (t.base_dim(), t.rank());
        let values = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..r)
                            .map(|a| (0..r).map(|b| { let z = t.get(i, j, a, b); [z.re, z.im] }).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self { base_dim: n, rank: r, values }
    }

    fn to_tensor(&self) -> Result<CurvatureTensor, String> {
        let (n, r) = (self.base_dim, self.rank);
        if n == 0 || r == 0 {
            return Err("base_dim and rank must be at least 1".into());
        }
        let shape_ok = self.values.len() == n
            && self.values.iter().all(|row| {
                row.len() == n && row.iter().all(|blk| blk.len() == r && blk.iter().all(|x| x.len() == r))
            });
        if !shape_ok {
            return Err(format!("values must be nested {n}x{n}x{r}x{r} arrays of [re, im]"));
        }
        let flat: Vec<C64> = self
            .values
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        CurvatureTensor::from_values(n, r, flat).map_err(|e| e.to_string())
    }
}

/// Whether a node's tensor is written in an orthonormal frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    Orthonormal,
    /// Monomial frame of a symmetric power; needs `orthonormalize`.
    Monomial,
}

/// Shape of a validated node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub base_dim: usize,
    pub rank: usize,
    pub frame: Frame,
}

/// Checks ranks, base dimensions, frames, parameters and depth.
pub fn validate(expr: &BundleExpr) -> Result<Shape, SpecError> {
    shape_at(expr, "$.bundle", 1)
}

fn child(path: &str, key: &str) -> String {
    format!("{path}.{key}")
}

fn orthonormal(shape: Shape, path: &str) -> Result<Shape, SpecError> {
    if shape.frame == Frame::Monomial {
        return Err(SpecError::at(path, "operand is in the monomial frame of a sym_power; wrap it in orthonormalize"));
    }
    Ok(shape)
}

fn same_base(expected: usize, found: usize, path: &str) -> Result<(), SpecError> {
    if expected != found {
        return Err(SpecError::at(path, format!("base dimension mismatch: expected {expected}, found {found}")));
    }
    Ok(())
}

fn sized(shape: Shape, path: &str) -> Result<Shape, SpecError> {
    let dim = shape.base_dim.saturating_mul(shape.rank);
    if dim > MAX_NAKANO_DIM {
        return Err(SpecError::at(
            path,
            format!("base_dim * rank = {dim} exceeds the supported maximum {MAX_NAKANO_DIM}"),
        ));
    }
    Ok(shape)
}

fn shape_at(expr: &BundleExpr, path: &str, depth: usize) -> Result<Shape, SpecError> {
    if depth > MAX_DEPTH {
        return Err(SpecError::at(path, format!("expression deeper than {MAX_DEPTH} levels")));
    }
    let next = depth + 1;
    let shape = match expr {
        BundleExpr::Model(leaf) => {
            let p = child(path, "model");
            let (base_dim, rank) = leaf.shape().map_err(|e| SpecError::at(&p, e.to_string()))?;
            Shape { base_dim, rank, frame: Frame::Orthonormal }
        }
        BundleExpr::Literal(lit) => {
            let p = child(path, "literal");
            lit.to_tensor().map_err(|e| SpecError::at(&p, e))?;
            Shape { base_dim: lit.base_dim, rank: lit.rank, frame: Frame::Orthonormal }
        }
        BundleExpr::Dual(inner) => {
            let p = child(path, "dual");
            orthonormal(shape_at(inner, &p, next)?, &p)?
        }
        BundleExpr::Tensor(items) | BundleExpr::DirectSum(items) => {
            let is_tensor = matches!(expr, BundleExpr::Tensor(_));
            let key = if is_tensor { "tensor" } else { "direct_sum" };
            let p = child(path, key);
            if items.len() < 2 {
                return Err(SpecError::at(&p, format!("{key} needs at least two operands")));
            }
            let mut acc: Option<Shape> = None;
            for (t, item) in items.iter().enumerate() {
                let ip = format!("{p}[{t}]");
                let s = orthonormal(shape_at(item, &ip, next)?, &ip)?;
                acc = Some(match acc {
                    None => s,
                    Some(a) => {
                        same_base(a.base_dim, s.base_dim, &ip)?;
                        let rank = if is_tensor { a.rank.checked_mul(s.rank) } else { a.rank.checked_add(s.rank) };
                        let rank = rank.unwrap_or(usize::MAX);
                        sized(Shape { base_dim: a.base_dim, rank, frame: Frame::Orthonormal }, &ip)?
                    }
                });
            }
            acc.expect("at least two operands")
        }
        BundleExpr::Det(inner) => {
            let p = child(path, "det");
            let s = orthonormal(shape_at(inner, &p, next)?, &p)?;
            Shape { base_dim: s.base_dim, rank: 1, frame: Frame::Orthonormal }
        }
        BundleExpr::Twist { bundle, line } => {
            let p = child(path, "twist");
            let bp = child(&p, "bundle");
            let lp = child(&p, "line");
            let b = orthonormal(shape_at(bundle, &bp, next)?, &bp)?;
            let l = orthonormal(shape_at(line, &lp, next)?, &lp)?;
            if l.rank != 1 {
                return Err(SpecError::at(&lp, format!("twist line must have rank 1, found rank {}", l.rank)));
            }
            same_base(b.base_dim, l.base_dim, &lp)?;
            b
        }
        BundleExpr::SymPower { k, of } => {
            let p = child(path, "sym_power");
            let op = child(&p, "of");
            let s = orthonormal(shape_at(of, &op, next)?, &op)?;
            if *k == 0 {
                return Err(SpecError::at(&child(&p, "k"), "k must be at least 1"));
            }
            let rank = binomial((s.rank + k - 1) as u64, *k as u64);
            let rank = usize::try_from(rank).unwrap_or(usize::MAX);
            sized(Shape { base_dim: s.base_dim, rank, frame: Frame::Monomial }, &p)?
        }
        BundleExpr::Orthonormalize(inner) => {
            let p = child(path, "orthonormalize");
            let s = shape_at(inner, &p, next)?;
            Shape { frame: Frame::Orthonormal, ..s }
        }
        BundleExpr::Scale { factor, of } => {
            let p = child(path, "scale");
            if !factor.is_finite() {
                return Err(SpecError::at(&child(&p, "factor"), "factor must be finite"));
            }
            let op = child(&p, "of");
            orthonormal(shape_at(of, &op, next)?, &op)?
        }
    };
    sized(shape, path)
}

/// Evaluated node: the curvature and, in the monomial frame, its Gram.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub tensor: CurvatureTensor,
    pub gram: Option<MetricGram>,
}

/// Evaluates a validated expression bottom-up.
pub fn evaluate(expr: &BundleExpr) -> Result<Evaluated, curvpos_core::Error> {
    let plain = |tensor: CurvatureTensor| Evaluated { tensor, gram: None };
    Ok(match expr {
        BundleExpr::Model(leaf) => plain(leaf.tensor()?),
        BundleExpr::Literal(lit) => plain(
            lit.to_tensor().map_err(curvpos_core::Error::InvalidParameter)?,
        ),
        BundleExpr::Dual(inner) => plain(dual_curvature(&evaluate(inner)?.tensor)),
        BundleExpr::Tensor(items) => {
            let mut acc = evaluate(&items[0])?.tensor;
            for item in &items[1..] {
                acc = tensor_curvature(&acc, &evaluate(item)?.tensor)?;
            }
            plain(acc)
        }
        BundleExpr::DirectSum(items) => {
            let mut acc = evaluate(&items[0])?.tensor;
            for item in &items[1..] {
                acc = curvature::direct_sum_curvature(&acc, &evaluate(item)?.tensor)?;
            }
            plain(acc)
        }
        BundleExpr::Det(inner) => plain(curvature::det_curvature(&evaluate(inner)?.tensor).to_tensor()),
        BundleExpr::Twist { bundle, line } => {
            let line = LineCurvature::from_tensor(&evaluate(line)?.tensor)?;
            plain(twist_by_line(&evaluate(bundle)?.tensor, &line)?)
        }
        BundleExpr::SymPower { k, of } => {
            let s = sym_power_curvature(&evaluate(of)?.tensor, *k)?;
            Evaluated { tensor: s.tensor, gram: Some(s.gram) }
        }
        BundleExpr::Orthonormalize(inner) => {
            let e = evaluate(inner)?;
            match e.gram {
                Some(g) => plain(orthonormalize_frame(&e.tensor, &g)?),
                None => plain(e.tensor),
            }
        }
        BundleExpr::Scale { factor, of } => plain(evaluate(of)?.tensor.scaled(*factor)),
    })
}
