//! Rate measurement and the necessity pipeline.
//!
//! `measure_rate` turns traces into Q-linear ratio summaries;
//! `predicted_rate` tabulates the guaranteed rates per convergence theorem;
//! `necessity_check` inverts an observed rate into the error-bound constant
//! it implies and re-checks that condition on samples.

use serde::Serialize;

use crate::eb::{self, BasicConditionReport, EBCheckReport, EBConditionKind};
use crate::error::{Error, Result};
use crate::model::ObjectiveModel;
use crate::residual::ResidualOp;
use crate::sample::SamplePlan;
use crate::solvers::{SolverTrace, TraceAux};

/// Which per-iteration quantity a rate is measured on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RateMetric {
    /// Squared distance to the critical set.
    #[serde(rename = "dist2")]
    DistSq,
    /// Objective gap.
    #[serde(rename = "gap")]
    Gap,
    /// Tail sums of squared residuals (forward-backward traces).
    #[serde(rename = "stail")]
    STail,
    /// Lyapunov value of the accelerated method.
    #[serde(rename = "phi")]
    Phi,
}

impl std::str::FromStr for RateMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dist2" | "dist-sq" => Ok(RateMetric::DistSq),
            "gap" => Ok(RateMetric::Gap),
            "stail" | "s-tail" => Ok(RateMetric::STail),
            "phi" => Ok(RateMetric::Phi),
            other => Err(Error::InvalidParameter(format!(
                "unknown rate metric `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateStatus {
    Measured,
    /// The metric was (numerically) zero over the whole window.
    AlreadyConverged,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    pub metric: RateMetric,
    pub ratios: Vec<f64>,
    /// Worst per-step ratio (the Q-linear certificate).
    pub tau_hat_max: f64,
    /// Geometric-mean ratio over the window (robust summary).
    pub tau_hat_geo: f64,
    pub predicted_tau: Option<f64>,
    pub burn_in: usize,
    pub status: RateStatus,
}

fn metric_series(trace: &SolverTrace, metric: RateMetric) -> Result<Vec<f64>> {
    trace
        .rows
        .iter()
        .map(|r| match metric {
            RateMetric::DistSq => Ok(r.dist * r.dist),
            RateMetric::Gap => Ok(r.gap),
            RateMetric::STail => match &r.aux {
                TraceAux::Fbs { tail_sq_sum } => Ok(*tail_sq_sum),
                _ => Err(Error::InvalidParameter(
                    "s-tail metric requires a forward-backward trace".into(),
                )),
            },
            RateMetric::Phi => match &r.aux {
                TraceAux::Nesterov { phi, .. } => Ok(*phi),
                _ => Err(Error::InvalidParameter(
                    "phi metric requires an accelerated-method trace".into(),
                )),
            },
        })
        .collect()
}

/// Per-step ratios `m_{k+1}/m_k` after `burn_in`, their maximum, and the
/// geometric mean `(m_K/m_b)^{1/(K−b)}`. Ratios are formed only where the
/// denominator exceeds `1e-14`.
pub fn measure_rate(trace: &SolverTrace, metric: RateMetric, burn_in: usize) -> Result<RateReport> {
    if trace.rows.len() < burn_in + 3 {
        return Err(Error::InvalidParameter(format!(
            "trace length {} is too short for burn-in {burn_in} (need ≥ {})",
            trace.rows.len(),
            burn_in + 3
        )));
    }
    let m = metric_series(trace, metric)?;
    let window = &m[burn_in..];
    if window.iter().all(|&v| v <= 1e-14) {
        return Ok(RateReport {
            metric,
            ratios: Vec::new(),
            tau_hat_max: 0.0,
            tau_hat_geo: 0.0,
            predicted_tau: None,
            burn_in,
            status: RateStatus::AlreadyConverged,
        });
    }
    let mut ratios = Vec::new();
    for w in window.windows(2) {
        if w[0] > 1e-14 {
            ratios.push(w[1] / w[0]);
        }
    }
    let tau_hat_max = ratios.iter().cloned().fold(0.0, f64::max);
    // Geometric mean between the first and last usable entries.
    let first = window.iter().position(|&v| v > 1e-14).unwrap_or(0);
    let last = window.iter().rposition(|&v| v > 1e-14).unwrap_or(first);
    let tau_hat_geo = if last > first {
        (window[last] / window[first]).powf(1.0 / (last - first) as f64)
    } else {
        tau_hat_max
    };
    Ok(RateReport {
        metric,
        ratios,
        tau_hat_max,
        tau_hat_geo,
        predicted_tau: None,
        burn_in,
        status: RateStatus::Measured,
    })
}

/// Guaranteed linear rate per convergence result, named by the setting.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(tag = "formula", rename_all = "kebab-case")]
pub enum RateFormula {
    /// Gradient descent on a smooth strongly convex objective at the
    /// optimal step `2/(μ+L)`: `((L−μ)/(L+μ))²`.
    SmoothStronglyConvex { mu: f64, l: f64 },
    /// Gradient descent under restricted secant / correlation constant ν
    /// at step `1/L`: `1 − ν/L`.
    Rsc { nu: f64, l: f64 },
    /// Local regularity condition with constants (α, β) at step `2/β`:
    /// `1 − 4/(αβ)`, requires `αβ > 4`.
    Regularity { alpha: f64, beta: f64 },
    /// Abstract gradient method at `h = β`, `θ = ½`: `1 − βν`.
    AbstractGradient { beta: f64, nu: f64 },
    /// Gradient descent objective-gap rate at `h = 1/L`: `1 − (ν/L)²`.
    GdGap { nu: f64, l: f64 },
    /// Gradient descent squared-distance rate at `h = 1/L`: `1 − ν/L`.
    GdDist { nu: f64, l: f64 },
    /// Proximal point method: `1 − min{αλ/4, ¼}`.
    Ppa { alpha: f64, lambda: f64 },
    /// Forward-backward splitting at `t = 1/L`: `1 − ν/(2L)`, `ν < 2L`.
    Fbs { nu: f64, l: f64 },
    /// Alternating block method per sweep:
    /// `(η²·L_min/(4pL² + 4L_max²) + 1)⁻¹`.
    Palm {
        eta: f64,
        l_min: f64,
        l_max: f64,
        l: f64,
        p: usize,
    },
    /// Accelerated gradient Lyapunov contraction: `1 − √(μ/L)`.
    NesterovLyapunov { mu: f64, l: f64 },
    /// Accelerated forward-backward Φ contraction: `max{α, θ}`.
    NesterovPhi { alpha_coef: f64, theta: f64 },
}

pub fn predicted_rate(formula: &RateFormula) -> Result<f64> {
    let positive = |name: &str, v: f64| -> Result<()> {
        if v > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{name} must be positive (got {v})"
            )))
        }
    };
    match *formula {
        RateFormula::SmoothStronglyConvex { mu, l } => {
            positive("mu", mu)?;
            if mu > l {
                return Err(Error::InvalidParameter("mu must not exceed L".into()));
            }
            Ok(((l - mu) / (l + mu)).powi(2))
        }
        RateFormula::Rsc { nu, l } | RateFormula::GdDist { nu, l } => {
            positive("nu", nu)?;
            if nu > l {
                return Err(Error::InvalidParameter("nu must not exceed L".into()));
            }
            Ok(1.0 - nu / l)
        }
        RateFormula::Regularity { alpha, beta } => {
            positive("alpha", alpha)?;
            positive("beta", beta)?;
            if alpha * beta <= 4.0 {
                return Err(Error::InvalidParameter(
                    "regularity rate requires alpha*beta > 4".into(),
                ));
            }
            Ok(1.0 - 4.0 / (alpha * beta))
        }
        RateFormula::AbstractGradient { beta, nu } => {
            positive("beta", beta)?;
            positive("nu", nu)?;
            if beta * nu > 1.0 {
                return Err(Error::InvalidParameter("requires nu ≤ 1/beta".into()));
            }
            Ok(1.0 - beta * nu)
        }
        RateFormula::GdGap { nu, l } => {
            positive("nu", nu)?;
            if nu > l {
                return Err(Error::InvalidParameter("nu must not exceed L".into()));
            }
            Ok(1.0 - (nu / l).powi(2))
        }
        RateFormula::Ppa { alpha, lambda } => {
            positive("alpha", alpha)?;
            positive("lambda", lambda)?;
            Ok(1.0 - (alpha * lambda / 4.0).min(0.25))
        }
        RateFormula::Fbs { nu, l } => {
            positive("nu", nu)?;
            if nu >= 2.0 * l {
                return Err(Error::InvalidParameter("requires nu < 2L".into()));
            }
            Ok(1.0 - nu / (2.0 * l))
        }
        RateFormula::Palm {
            eta,
            l_min,
            l_max,
            l,
            p,
        } => {
            positive("eta", eta)?;
            positive("l_min", l_min)?;
            positive("l_max", l_max)?;
            positive("l", l)?;
            if p == 0 {
                return Err(Error::InvalidParameter("p must be positive".into()));
            }
            Ok(1.0 / (eta * eta * l_min / (4.0 * p as f64 * l * l + 4.0 * l_max * l_max) + 1.0))
        }
        RateFormula::NesterovLyapunov { mu, l } => {
            positive("mu", mu)?;
            if mu > l {
                return Err(Error::InvalidParameter("mu must not exceed L".into()));
            }
            Ok(1.0 - (mu / l).sqrt())
        }
        RateFormula::NesterovPhi { alpha_coef, theta } => {
            if !(0.0..1.0).contains(&alpha_coef) || !(0.0..1.0).contains(&theta) {
                return Err(Error::InvalidParameter(
                    "alpha and theta must lie in [0, 1)".into(),
                ));
            }
            Ok(alpha_coef.max(theta))
        }
    }
}

/// Admissible step window of the abstract gradient method at mixing
/// weight `θ`: `τ = 1 − 4θ(1−θ)βν`, `lo = (1−τ)/(2θν)`, `hi = 2(1−θ)β`.
pub fn stepsize_window(theta: f64, nu: f64, beta: f64) -> Result<(f64, f64, f64)> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter("theta must lie in (0, 1)".into()));
    }
    if !(nu > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParameter(
            "nu and beta must be positive".into(),
        ));
    }
    if nu >= 1.0 / beta {
        return Err(Error::InvalidParameter("requires nu < 1/beta".into()));
    }
    let tau_bound = 1.0 - 4.0 * theta * (1.0 - theta) * beta * nu;
    let hi = 2.0 * (1.0 - theta) * beta;
    let lo = ((1.0 - tau_bound) / (2.0 * theta * nu)).min(hi);
    Ok((lo, hi, tau_bound))
}

/// Observed linear rates at or above this are treated as "no linear
/// convergence" by the necessity pipeline.
pub const NECESSITY_TAU_CAP: f64 = 0.999;

/// Which convergence statement's necessity direction to invert.
#[derive(Clone, Debug)]
pub enum NecessityCase {
    /// Gradient descent at small steps `h ≤ (1−√τ)/L`: the two-term
    /// correlation bound must hold with `c_dist = (1−τ)/(2h)`,
    /// `c_grad = h/2`.
    GradientBasic { h: f64 },
    /// Abstract gradient method: `ν = β(1−√τ)²/h²` (correlation condition
    /// for the method's operator).
    AbstractGradient { op: ResidualOp, h: f64, beta: f64 },
    /// Gradient descent at `h = 1/L`: `ν = L(1−√τ)²`.
    GradientDescent,
    /// Proximal point method: `α = (1−√τ)²/(2λ)` (objective condition).
    Ppa { lambda: f64 },
    /// Forward-backward at `t = 1/L`: `ν = (L/2)(1−√τ)²`.
    Fbs,
}

impl NecessityCase {
    pub fn label(&self) -> String {
        match self {
            NecessityCase::GradientBasic { h } => format!("gd-basic(h={h})"),
            NecessityCase::AbstractGradient { op, h, beta } => {
                format!("abstract({op}, h={h}, beta={beta})")
            }
            NecessityCase::GradientDescent => "gd".into(),
            NecessityCase::Ppa { lambda } => format!("ppa(lambda={lambda})"),
            NecessityCase::Fbs => "fbs".into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum NecessityOutcome {
    Condition(EBCheckReport),
    Basic(BasicConditionReport),
}

impl NecessityOutcome {
    pub fn passed(&self) -> bool {
        match self {
            NecessityOutcome::Condition(r) => r.verdict.passed(),
            NecessityOutcome::Basic(r) => r.verdict.passed(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NecessityReport {
    pub case: String,
    pub observed_tau: f64,
    pub condition: String,
    pub implied_constant: f64,
    pub check: NecessityOutcome,
}

/// Inverts an observed Q-linear rate into the error-bound constant the
/// necessity direction guarantees, then re-checks that condition on
/// samples from the given plan.
pub fn necessity_check(
    model: &ObjectiveModel,
    case: &NecessityCase,
    observed_tau: f64,
    plan: &SamplePlan,
) -> Result<NecessityReport> {
    if !(observed_tau >= 0.0) || observed_tau >= NECESSITY_TAU_CAP {
        return Err(Error::NecessityNotApplicable { tau: observed_tau });
    }
    let root = observed_tau.sqrt();
    let l = model.smooth.lipschitz;
    match case {
        NecessityCase::GradientBasic { h } => {
            let h_max = (1.0 - root) / l;
            if *h > h_max * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "necessity of the two-term bound requires h ≤ (1−√τ)/L = {h_max}"
                )));
            }
            let c_dist = (1.0 - observed_tau) / (2.0 * h);
            let c_grad = h / 2.0;
            let check = eb::check_basic_condition(model, c_dist, c_grad, plan)?;
            Ok(NecessityReport {
                case: case.label(),
                observed_tau,
                condition: "basic".into(),
                implied_constant: c_dist,
                check: NecessityOutcome::Basic(check),
            })
        }
        NecessityCase::AbstractGradient { op, h, beta } => {
            let nu = beta * (1.0 - root).powi(2) / (h * h);
            let check = eb::check_condition(model, op, EBConditionKind::CorEB, nu, plan)?;
            Ok(NecessityReport {
                case: case.label(),
                observed_tau,
                condition: "cor-eb".into(),
                implied_constant: nu,
                check: NecessityOutcome::Condition(check),
            })
        }
        NecessityCase::GradientDescent => {
            let nu = l * (1.0 - root).powi(2);
            let check = eb::check_condition(
                model,
                &ResidualOp::Gradient,
                EBConditionKind::CorEB,
                nu,
                plan,
            )?;
            Ok(NecessityReport {
                case: case.label(),
                observed_tau,
                condition: "cor-eb".into(),
                implied_constant: nu,
                check: NecessityOutcome::Condition(check),
            })
        }
        NecessityCase::Ppa { lambda } => {
            let alpha = (1.0 - root).powi(2) / (2.0 * lambda);
            let check = eb::check_condition(
                model,
                &ResidualOp::MoreauGradient { lambda: *lambda },
                EBConditionKind::ObjEB,
                alpha,
                plan,
            )?;
            Ok(NecessityReport {
                case: case.label(),
                observed_tau,
                condition: "obj-eb".into(),
                implied_constant: alpha,
                check: NecessityOutcome::Condition(check),
            })
        }
        NecessityCase::Fbs => {
            let nu = 0.5 * l * (1.0 - root).powi(2);
            let t = 1.0 / l;
            let check = eb::check_condition(
                model,
                &ResidualOp::ProxGradientResidual { t },
                EBConditionKind::CorEB,
                nu,
                plan,
            )?;
            Ok(NecessityReport {
                case: case.label(),
                observed_tau,
                condition: "cor-eb".into(),
                implied_constant: nu,
                check: NecessityOutcome::Condition(check),
            })
        }
    }
}
