//! Problem zoo: constructors for every worked example and counterexample,
//! plus a JSON loader for problem specifications.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::composite::CompositeSpec;
use crate::error::{Error, Result};
use crate::model::{
    Block, CoordPenalty, CriticalSet, CriticalSetDescriptor, ObjectiveModel, Point, SimplePart,
    SmoothPart,
};

/// Largest/smallest eigenvalues of a symmetric matrix.
fn symmetric_eigen_range(m: &DMatrix<f64>) -> (f64, f64) {
    let eig = m.clone().symmetric_eigen();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in eig.eigenvalues.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Least-squares residual of `Ax = b`; used to check `b ∈ range(A)`.
fn range_residual(a: &DMatrix<f64>, b: &DVector<f64>) -> f64 {
    let svd = a.clone().svd(true, true);
    match svd.solve(b, 1e-12) {
        Ok(x) => (a * x - b).norm(),
        Err(_) => f64::INFINITY,
    }
}

/// `f(x) = ½xᵀQx − bᵀx` with SPD `Q`; `μ = λ_min(Q)`, `L = λ_max(Q)`,
/// unique minimizer `Q⁻¹b`. The full-objective prox `(I + λQ)⁻¹(x + λb)`
/// is attached so the proximal point method applies.
pub fn make_strongly_convex_quadratic(q: DMatrix<f64>, b: DVector<f64>) -> Result<ObjectiveModel> {
    let n = q.nrows();
    if q.ncols() != n || b.len() != n || n == 0 {
        return Err(Error::InvalidParameter(
            "Q must be square and match b".into(),
        ));
    }
    let asym = (&q - q.transpose()).norm();
    if asym > 1e-10 * (1.0 + q.norm()) {
        return Err(Error::InvalidParameter("Q must be symmetric".into()));
    }
    let (mu, l) = symmetric_eigen_range(&q);
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Q must be positive definite (λ_min = {mu})"
        )));
    }
    let x_star = q
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("Q must be positive definite".into()))?
        .solve(&b);
    let qv = q.clone();
    let qg = q.clone();
    let bv = b.clone();
    let bg = b.clone();
    let min_value = 0.5 * (&qv * &x_star).dot(&x_star) - bv.dot(&x_star);
    let qp = q.clone();
    let bp = b.clone();
    let model = ObjectiveModel {
        dim: n,
        smooth: SmoothPart {
            value: Arc::new(move |x: &Point| 0.5 * (&qv * x).dot(x) - bv.dot(x)),
            gradient: Arc::new(move |x: &Point| &qg * x - &bg),
            lipschitz: l,
        },
        simple: SimplePart::Zero,
        full_prox: Some(Arc::new(move |x: &Point, lambda: f64| {
            let mut m = qp.scale(lambda);
            for i in 0..m.nrows() {
                m[(i, i)] += 1.0;
            }
            m.cholesky()
                .expect("I + λQ is SPD for λ > 0")
                .solve(&(x + bp.scale(lambda)))
        })),
        blocks: None,
        critical: CriticalSetDescriptor::single(x_star, min_value),
        strong_convexity: Some(mu),
    };
    model.validate()?;
    Ok(model)
}

/// `f(x) = ½‖Ax − b‖²` with `b ∈ range(A)`; the critical set is the affine
/// solution set `{x : Ax = b}` and the minimum value is zero. Not strongly
/// convex when `A` is column-rank deficient.
pub fn make_rank_deficient_least_squares(
    a: DMatrix<f64>,
    b: DVector<f64>,
) -> Result<ObjectiveModel> {
    if a.nrows() != b.len() || a.ncols() == 0 {
        return Err(Error::InvalidParameter(
            "A and b shapes are inconsistent".into(),
        ));
    }
    let resid = range_residual(&a, &b);
    if resid > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "b is not in range(A) (residual {resid:.3e}); the recorded minimum would not be 0"
        )));
    }
    let n = a.ncols();
    let gram = a.transpose() * &a;
    let (lam_min, lam_max) = symmetric_eigen_range(&gram);
    let av = a.clone();
    let bv = b.clone();
    let ag = a.clone();
    let bg = b.clone();
    let gram_p = gram.clone();
    let atb = a.transpose() * &b;
    let model = ObjectiveModel {
        dim: n,
        smooth: SmoothPart {
            value: Arc::new(move |x: &Point| 0.5 * (&av * x - &bv).norm_squared()),
            gradient: Arc::new(move |x: &Point| ag.transpose() * (&ag * x - &bg)),
            lipschitz: lam_max,
        },
        simple: SimplePart::Zero,
        full_prox: Some(Arc::new(move |x: &Point, lambda: f64| {
            let mut m = gram_p.scale(lambda);
            for i in 0..m.nrows() {
                m[(i, i)] += 1.0;
            }
            m.cholesky()
                .expect("I + λAᵀA is SPD")
                .solve(&(x + atb.scale(lambda)))
        })),
        blocks: None,
        critical: CriticalSetDescriptor {
            set: CriticalSet::affine(a, b)?,
            min_value: 0.0,
        },
        strong_convexity: if lam_min > 1e-12 { Some(lam_min) } else { None },
    };
    model.validate()?;
    Ok(model)
}

/// Reference forward-backward solve used to populate numeric critical-set
/// oracles: `x ← prox_{tg}(x − t∇f(x))` with `t = 1/L` until
/// `‖R_t(x)‖ ≤ 1e-12` or 10⁶ iterations.
fn reference_solve(smooth: &SmoothPart, simple: &SimplePart, x0: Point) -> (Point, f64) {
    let t = 1.0 / smooth.lipschitz;
    let mut x = x0;
    let mut resid = f64::INFINITY;
    for _ in 0..1_000_000 {
        let grad = (smooth.gradient)(&x);
        let forward = &x - grad * t;
        let p = simple.prox(&forward, t);
        resid = (&x - &p).norm() / t;
        x = p;
        if resid <= 1e-12 {
            break;
        }
    }
    (x, resid)
}

/// Lasso `φ = ½‖Ax − b‖² + w‖x‖₁`. With `w = 0` and `b ∈ range(A)` this
/// degenerates to rank-deficient least squares; otherwise the critical set
/// is a numeric oracle produced by a high-accuracy forward-backward solve.
pub fn make_lasso(a: DMatrix<f64>, b: DVector<f64>, w: f64) -> Result<ObjectiveModel> {
    if a.nrows() != b.len() || a.ncols() == 0 {
        return Err(Error::InvalidParameter(
            "A and b shapes are inconsistent".into(),
        ));
    }
    if w < 0.0 {
        return Err(Error::InvalidParameter(
            "l1 weight must be nonnegative".into(),
        ));
    }
    if w == 0.0 && range_residual(&a, &b) <= 1e-10 {
        return make_rank_deficient_least_squares(a, b);
    }
    let n = a.ncols();
    let gram = a.transpose() * &a;
    let (lam_min, lam_max) = symmetric_eigen_range(&gram);
    let av = a.clone();
    let bv = b.clone();
    let ag = a.clone();
    let bg = b.clone();
    let smooth = SmoothPart {
        value: Arc::new(move |x: &Point| 0.5 * (&av * x - &bv).norm_squared()),
        gradient: Arc::new(move |x: &Point| ag.transpose() * (&ag * x - &bg)),
        lipschitz: lam_max,
    };
    let simple = SimplePart::uniform(n, CoordPenalty::l1(w));
    let (x_ref, _resid) = reference_solve(&smooth, &simple, Point::zeros(n));
    let min_value = (smooth.value)(&x_ref) + simple.value(&x_ref);
    let model = ObjectiveModel {
        dim: n,
        smooth,
        simple,
        full_prox: None,
        blocks: None,
        critical: CriticalSetDescriptor {
            set: CriticalSet::NumericOracle {
                x_ref,
                solve_tolerance: 1e-12,
            },
            min_value,
        },
        strong_convexity: if lam_min > 1e-12 { Some(lam_min) } else { None },
    };
    model.validate()?;
    Ok(model)
}

/// The scalar box-plus-l1 problem: `n = 1`, `f ≡ 0`,
/// `g(x) = |x| + δ_{[−2,2]}(x)`; prox is shrink-then-clamp.
pub fn make_box_l1_scalar() -> ObjectiveModel {
    let penalty = CoordPenalty::l1_boxed(1.0, -2.0, 2.0);
    ObjectiveModel {
        dim: 1,
        smooth: SmoothPart::zero(1),
        simple: SimplePart::uniform(1, penalty),
        full_prox: Some(Arc::new(move |x: &Point, t: f64| {
            Point::from_element(1, penalty.prox(x[0], t))
        })),
        blocks: None,
        critical: CriticalSetDescriptor::single(Point::from_element(1, 0.0), 0.0),
        strong_convexity: None,
    }
}

/// The composite counterexample `e(x) = (x₁, x₁)`, `f = ½‖·‖²`, `g ≡ 0`:
/// strong convexity of the outer map alone does not yield the composite
/// error-bound inequality.
pub fn make_composite_counterexample() -> CompositeSpec {
    CompositeSpec::quadratic_composition(
        "composite_counterexample",
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 0.0]),
    )
}

/// The rank-one quadratic `e(x) = ½(aᵀx)²` as a composite spec; used to
/// exhibit failure of the smooth composite inequality along directions
/// orthogonal to `a`.
pub fn make_rank_one_quadratic_composite(a: DVector<f64>) -> Result<CompositeSpec> {
    if a.norm() == 0.0 {
        return Err(Error::InvalidParameter(
            "direction a must be nonzero".into(),
        ));
    }
    let n = a.len();
    let l = a.norm_squared();
    let a1 = a.clone();
    let a2 = a.clone();
    let crit = CriticalSetDescriptor {
        set: CriticalSet::affine(
            DMatrix::from_row_slice(1, n, a.as_slice()),
            DVector::zeros(1),
        )?,
        min_value: 0.0,
    };
    let model = ObjectiveModel {
        dim: n,
        smooth: SmoothPart {
            value: Arc::new(move |x: &Point| 0.5 * a1.dot(x).powi(2)),
            gradient: Arc::new(move |x: &Point| a2.scale(a2.dot(x))),
            lipschitz: l,
        },
        simple: SimplePart::Zero,
        full_prox: None,
        blocks: None,
        critical: crit,
        strong_convexity: None,
    };
    Ok(CompositeSpec::smooth_plus_simple(
        "rank_one_quadratic",
        model,
    ))
}

/// Box-plus-l1 with a strongly convex smooth term `(μ/2)x²` added; the
/// desk-scale composite problem for the accelerated scheme.
pub fn make_composite_desk(mu_smooth: f64) -> Result<CompositeSpec> {
    if !(mu_smooth > 0.0) {
        return Err(Error::InvalidParameter(
            "smooth modulus must be positive".into(),
        ));
    }
    let penalty = CoordPenalty::l1_boxed(1.0, -2.0, 2.0);
    let model = ObjectiveModel {
        dim: 1,
        smooth: SmoothPart {
            value: Arc::new(move |x: &Point| 0.5 * mu_smooth * x[0] * x[0]),
            gradient: Arc::new(move |x: &Point| Point::from_element(1, mu_smooth * x[0])),
            lipschitz: mu_smooth,
        },
        simple: SimplePart::uniform(1, penalty),
        full_prox: None,
        blocks: None,
        critical: CriticalSetDescriptor::single(Point::from_element(1, 0.0), 0.0),
        strong_convexity: Some(mu_smooth),
    };
    Ok(CompositeSpec::smooth_plus_simple("composite_desk", model))
}

/// Per-block simple-part kind for block-structured problems.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GKind {
    Zero,
    L1 { w: f64 },
    Box { lo: f64, hi: f64 },
}

impl GKind {
    fn penalty(&self) -> CoordPenalty {
        match *self {
            GKind::Zero => CoordPenalty::free(),
            GKind::L1 { w } => CoordPenalty::l1(w),
            GKind::Box { lo, hi } => CoordPenalty::boxed(lo, hi),
        }
    }
}

/// Block-structured least squares `½‖Ax − b‖² + Σ_j g_j(x_j)` with exact
/// block moduli `L_j = λ_max(AⱼᵀAⱼ)`.
pub fn make_palm_problem(
    a: DMatrix<f64>,
    b: DVector<f64>,
    block_sizes: &[usize],
    g_kinds: &[GKind],
) -> Result<ObjectiveModel> {
    let n = a.ncols();
    if block_sizes.iter().sum::<usize>() != n || block_sizes.contains(&0) {
        return Err(Error::InvalidParameter(
            "block sizes must partition the dimension".into(),
        ));
    }
    if g_kinds.len() != block_sizes.len() {
        return Err(Error::InvalidParameter(
            "one simple-part kind per block required".into(),
        ));
    }
    if a.nrows() != b.len() {
        return Err(Error::InvalidParameter(
            "A and b shapes are inconsistent".into(),
        ));
    }
    let gram = a.transpose() * &a;
    let (_, lam_max) = symmetric_eigen_range(&gram);

    let mut blocks = Vec::with_capacity(block_sizes.len());
    let mut penalties = Vec::with_capacity(n);
    let mut offset = 0;
    for (&len, kind) in block_sizes.iter().zip(g_kinds) {
        let aj = a.columns(offset, len).into_owned();
        let block_l = spectral_norm(&aj).powi(2);
        if !(block_l > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "block at offset {offset} has a zero column block"
            )));
        }
        blocks.push(Block {
            offset,
            len,
            lipschitz: block_l,
        });
        penalties.extend(std::iter::repeat_n(kind.penalty(), len));
        offset += len;
    }

    let all_zero = g_kinds.iter().all(|k| matches!(k, GKind::Zero));
    let av = a.clone();
    let bv = b.clone();
    let ag = a.clone();
    let bg = b.clone();
    let smooth = SmoothPart {
        value: Arc::new(move |x: &Point| 0.5 * (&av * x - &bv).norm_squared()),
        gradient: Arc::new(move |x: &Point| ag.transpose() * (&ag * x - &bg)),
        lipschitz: lam_max,
    };
    let simple = SimplePart::Separable(penalties);
    let critical = if all_zero && range_residual(&a, &b) <= 1e-10 {
        CriticalSetDescriptor {
            set: CriticalSet::affine(a, b)?,
            min_value: 0.0,
        }
    } else {
        let (x_ref, _) = reference_solve(&smooth, &simple, Point::zeros(n));
        let min_value = (smooth.value)(&x_ref) + simple.value(&x_ref);
        CriticalSetDescriptor {
            set: CriticalSet::NumericOracle {
                x_ref,
                solve_tolerance: 1e-12,
            },
            min_value,
        }
    };
    let model = ObjectiveModel {
        dim: n,
        smooth,
        simple,
        full_prox: None,
        blocks: Some(blocks),
        critical,
        strong_convexity: None,
    };
    model.validate()?;
    Ok(model)
}

/// Sublinear toy `f(x) = x⁴`: gradient descent crawls toward 0 with
/// per-step ratios approaching 1, so no linear-rate certificate exists.
/// `L = 12` bounds `f″` on the unit sublevel neighborhood.
pub fn make_quartic_1d() -> ObjectiveModel {
    ObjectiveModel {
        dim: 1,
        smooth: SmoothPart {
            value: Arc::new(|x: &Point| x[0].powi(4)),
            gradient: Arc::new(|x: &Point| Point::from_element(1, 4.0 * x[0].powi(3))),
            lipschitz: 12.0,
        },
        simple: SimplePart::Zero,
        full_prox: None,
        blocks: None,
        critical: CriticalSetDescriptor::single(Point::from_element(1, 0.0), 0.0),
        strong_convexity: None,
    }
}

/// The one-dimensional invex (nonconvex, critical set = argmin) example
/// `f(x) = x² + 3 sin²(x)` with `crit f = {0}` and `sup|f″| ≤ 8`.
pub fn make_invex_1d() -> ObjectiveModel {
    ObjectiveModel {
        dim: 1,
        smooth: SmoothPart {
            value: Arc::new(|x: &Point| x[0] * x[0] + 3.0 * x[0].sin().powi(2)),
            gradient: Arc::new(|x: &Point| {
                Point::from_element(1, 2.0 * x[0] + 3.0 * (2.0 * x[0]).sin())
            }),
            lipschitz: 8.0,
        },
        simple: SimplePart::Zero,
        full_prox: None,
        blocks: None,
        critical: CriticalSetDescriptor::single(Point::from_element(1, 0.0), 0.0),
        strong_convexity: None,
    }
}

// ---------------------------------------------------------------------------
// JSON problem specifications
// ---------------------------------------------------------------------------

/// A loadable problem description: `{"name": ..., "constructor": ...,
/// "params": {...}}` with dense row-major matrices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    #[serde(flatten)]
    pub constructor: Constructor,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "constructor", content = "params", rename_all = "snake_case")]
pub enum Constructor {
    StronglyConvexQuadratic {
        q: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    RankDeficientLeastSquares {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    Lasso {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        w: f64,
    },
    BoxL1Scalar {},
    Palm {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        block_sizes: Vec<usize>,
        g_kinds: Vec<GKind>,
    },
    #[serde(rename = "invex_1d")]
    Invex1d {},
    #[serde(rename = "quartic_1d")]
    Quartic1d {},
    CompositeCounterexample {},
    CompositeDesk {
        mu_smooth: f64,
    },
    Dual {
        primal: crate::dual::PrimalKind,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter(
            "matrix must have at least one row".into(),
        ));
    }
    let ncols = rows[0].len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidParameter(
            "matrix rows must be nonempty and rectangular".into(),
        ));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(rows.len(), ncols, &flat))
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Builds the objective model; composite-only and dual constructors are
    /// handled by [`ProblemSpec::build_composite`] and the dual module.
    pub fn build_model(&self) -> Result<ObjectiveModel> {
        match &self.constructor {
            Constructor::StronglyConvexQuadratic { q, b } => {
                make_strongly_convex_quadratic(matrix_from_rows(q)?, DVector::from_vec(b.clone()))
            }
            Constructor::RankDeficientLeastSquares { a, b } => make_rank_deficient_least_squares(
                matrix_from_rows(a)?,
                DVector::from_vec(b.clone()),
            ),
            Constructor::Lasso { a, b, w } => {
                make_lasso(matrix_from_rows(a)?, DVector::from_vec(b.clone()), *w)
            }
            Constructor::BoxL1Scalar {} => Ok(make_box_l1_scalar()),
            Constructor::Palm {
                a,
                b,
                block_sizes,
                g_kinds,
            } => make_palm_problem(
                matrix_from_rows(a)?,
                DVector::from_vec(b.clone()),
                block_sizes,
                g_kinds,
            ),
            Constructor::Invex1d {} => Ok(make_invex_1d()),
            Constructor::Quartic1d {} => Ok(make_quartic_1d()),
            Constructor::CompositeCounterexample {} => Err(Error::UnsupportedComposite(
                "the counterexample has no plain objective model; use build_composite".into(),
            )),
            Constructor::CompositeDesk { .. } => Ok(self
                .build_composite()?
                .model()
                .expect("desk composite wraps a model")
                .clone()),
            Constructor::Dual { primal, a, b } => Ok(crate::dual::build_dual_spec(
                primal,
                matrix_from_rows(a)?,
                DVector::from_vec(b.clone()),
            )?
            .model),
        }
    }

    pub fn build_composite(&self) -> Result<CompositeSpec> {
        match &self.constructor {
            Constructor::CompositeCounterexample {} => Ok(make_composite_counterexample()),
            Constructor::CompositeDesk { mu_smooth } => make_composite_desk(*mu_smooth),
            Constructor::BoxL1Scalar {} => Ok(CompositeSpec::smooth_plus_simple(
                "box_l1_scalar",
                make_box_l1_scalar(),
            )),
            Constructor::StronglyConvexQuadratic { .. }
            | Constructor::RankDeficientLeastSquares { .. }
            | Constructor::Lasso { .. } => Ok(CompositeSpec::smooth_plus_simple(
                self.name.clone(),
                self.build_model()?,
            )),
            _ => Err(Error::UnsupportedComposite(format!(
                "no composite form for constructor of {}",
                self.name
            ))),
        }
    }

    /// Canonical JSON (sorted keys) of this spec; hashes of this string
    /// identify the problem in report headers.
    pub fn canonical_json(&self) -> String {
        let value: serde_json::Value =
            serde_json::to_value(self).expect("problem specs serialize infallibly");
        value.to_string()
    }
}

/// An analytically known error-bound constant shipped with a problem.
#[derive(Clone, Debug, Serialize)]
pub struct ExpectedConstant {
    pub condition: crate::eb::EBConditionKind,
    pub operator: crate::residual::ResidualOp,
    pub value: f64,
    pub region_r: f64,
    pub note: &'static str,
}

/// The documented desk-scale zoo with its analytically known constants.
pub fn shipped_zoo() -> Vec<(ProblemSpec, Vec<ExpectedConstant>)> {
    use crate::eb::EBConditionKind::*;
    use crate::residual::ResidualOp::*;
    vec![
        (
            ProblemSpec {
                name: "quad_diag14".into(),
                constructor: Constructor::StronglyConvexQuadratic {
                    q: vec![vec![1.0, 0.0], vec![0.0, 4.0]],
                    b: vec![0.0, 0.0],
                },
            },
            vec![
                ExpectedConstant {
                    condition: ResEB,
                    operator: Gradient,
                    value: 1.0,
                    region_r: 1.0,
                    note: "min ‖Qx‖/‖x‖ = λ_min",
                },
                ExpectedConstant {
                    condition: CorEB,
                    operator: Gradient,
                    value: 1.0,
                    region_r: 1.0,
                    note: "min ⟨Qx,x⟩/‖x‖² = λ_min",
                },
                ExpectedConstant {
                    condition: ObjEB,
                    operator: Gradient,
                    value: 1.0,
                    region_r: 1.0,
                    note: "gap = ½xᵀQx ≥ (λ_min/2)‖x‖²",
                },
                ExpectedConstant {
                    condition: ResObjEB,
                    operator: Gradient,
                    value: std::f64::consts::SQRT_2,
                    region_r: 1.0,
                    note: "η² = 2·min xᵀQ²x/xᵀQx = 2λ_min",
                },
            ],
        ),
        (
            ProblemSpec {
                name: "ls_line".into(),
                constructor: Constructor::RankDeficientLeastSquares {
                    a: vec![vec![1.0, 1.0]],
                    b: vec![1.0],
                },
            },
            vec![
                ExpectedConstant {
                    condition: CorEB,
                    operator: Gradient,
                    value: 2.0,
                    region_r: 1.0,
                    note: "⟨∇f, x−x_p⟩ = 2 d² along the normal direction",
                },
                ExpectedConstant {
                    condition: ResEB,
                    operator: Gradient,
                    value: 2.0,
                    region_r: 1.0,
                    note: "‖∇f‖ = √2·|s| = 2 d",
                },
                ExpectedConstant {
                    condition: ObjEB,
                    operator: Gradient,
                    value: 2.0,
                    region_r: 1.0,
                    note: "gap = s²/2 = d²",
                },
                ExpectedConstant {
                    condition: CorResEB,
                    operator: Gradient,
                    value: 0.5,
                    region_r: 1.0,
                    note: "co-coercivity ratio equals 1/L exactly here",
                },
            ],
        ),
        (
            ProblemSpec {
                name: "invex_1d".into(),
                constructor: Constructor::Invex1d {},
            },
            vec![ExpectedConstant {
                condition: CorEB,
                operator: Gradient,
                value: 6.9935,
                region_r: 1.0,
                note: "grid minimum of (2x + 3sin2x)/x over {f ≤ 1}",
            }],
        ),
    ]
}
