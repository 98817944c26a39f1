//! Gradient-type solvers with full per-iteration traces.
//!
//! All step rules are constant-step; the abstract iteration
//! `x_{k+1} = x_k − h·G_φ(x_k)` is the single core loop, and the named
//! methods are its specializations (bitwise, same arithmetic order):
//! gradient descent is the gradient operator, the proximal point method is
//! the Moreau-gradient operator with `h = λ`, and forward-backward
//! splitting is the prox-gradient residual with `h = t`. The alternating
//! block method applies the identical per-coordinate step blockwise, so a
//! single block reproduces forward-backward exactly.

use nalgebra::DVector;
use serde::Serialize;

use crate::composite::CompositeSpec;
use crate::error::{Error, Result};
use crate::model::{ObjectiveModel, Point};
use crate::residual::ResidualOp;

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub x0: Point,
    pub max_iter: usize,
    /// Stop once `‖G(x_k)‖` falls to this level; `None` runs all
    /// iterations (useful when measuring tail ratios).
    pub stop_tol: Option<f64>,
}

impl SolverConfig {
    pub fn new(x0: Point) -> Self {
        Self {
            x0,
            max_iter: 100_000,
            stop_tol: Some(1e-12),
        }
    }

    pub fn with_max_iter(mut self, n: usize) -> Self {
        self.max_iter = n;
        self
    }

    pub fn with_stop_tol(mut self, tol: Option<f64>) -> Self {
        self.stop_tol = tol;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    ResidualBelowTol,
    MaxIterations,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum TraceAux {
    None,
    Ppa {
        /// The proximal point `prox_{λφ}(x_k)`.
        prox: Vec<f64>,
    },
    Fbs {
        /// Tail sum `S_k = Σ_{i≥k} ‖R_t(x_i)‖²` over the realized trace.
        tail_sq_sum: f64,
    },
    Nesterov {
        y: Vec<f64>,
        z: Vec<f64>,
        /// `Φ_k = φ(x_k) − min φ + τ‖z_k − x*‖²`.
        phi: f64,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub k: usize,
    pub x: Vec<f64>,
    /// `φ(x_k) − min φ`.
    pub gap: f64,
    /// `d(x_k, crit φ)`.
    pub dist: f64,
    /// `‖G(x_k)‖` for the method's operator.
    pub resid: f64,
    pub aux: TraceAux,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverTrace {
    pub method: String,
    pub rows: Vec<TraceRow>,
    pub stop: StopReason,
}

impl SolverTrace {
    pub fn last_x(&self) -> Point {
        Point::from_vec(self.rows.last().expect("traces are nonempty").x.clone())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn guard_divergence(k: usize, gap: f64, gap0: f64) -> Result<()> {
    if gap > 1e3 * gap0.max(1e-12) {
        return Err(Error::Diverged { iteration: k, gap });
    }
    Ok(())
}

/// The abstract gradient-type method `x_{k+1} = x_k − h·G_φ(x_k)`.
pub fn abstract_gradient(
    model: &ObjectiveModel,
    op: &ResidualOp,
    h: f64,
    cfg: &SolverConfig,
) -> Result<SolverTrace> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("step size must be positive".into()));
    }
    if cfg.x0.len() != model.dim {
        return Err(Error::InvalidParameter("x0 dimension mismatch".into()));
    }
    let mut x = cfg.x0.clone();
    let gap0 = model.try_value(&x)? - model.min_value();
    let mut rows = Vec::new();
    let mut stop = StopReason::MaxIterations;
    for k in 0..=cfg.max_iter {
        let g = model.residual(op, &x)?;
        let resid = g.norm();
        let gap = model.gap(&x);
        if k > 0 {
            guard_divergence(k, gap, gap0)?;
        }
        rows.push(TraceRow {
            k,
            x: x.iter().copied().collect(),
            gap,
            dist: model.distance_to_critical(&x),
            resid,
            aux: TraceAux::None,
        });
        if let Some(tol) = cfg.stop_tol {
            if resid <= tol {
                stop = StopReason::ResidualBelowTol;
                break;
            }
        }
        if k == cfg.max_iter {
            break;
        }
        x -= g * h;
    }
    Ok(SolverTrace {
        method: format!("abstract:{op}"),
        rows,
        stop,
    })
}

/// Gradient descent `x_{k+1} = x_k − h∇f(x_k)` for smooth models.
pub fn gradient_descent(model: &ObjectiveModel, h: f64, cfg: &SolverConfig) -> Result<SolverTrace> {
    let mut trace = abstract_gradient(model, &ResidualOp::Gradient, h, cfg)?;
    trace.method = "gd".into();
    Ok(trace)
}

/// Step presets for gradient descent: `1/L`, and `2/(μ+L)` when the strong
/// convexity modulus is known.
pub fn gd_step_inverse_l(model: &ObjectiveModel) -> f64 {
    1.0 / model.smooth.lipschitz
}

pub fn gd_step_optimal(model: &ObjectiveModel) -> Option<f64> {
    model
        .strong_convexity
        .map(|mu| 2.0 / (mu + model.smooth.lipschitz))
}

/// Proximal point method `x_{k+1} = prox_{λφ}(x_k)`, realized as the
/// abstract method with the Moreau-gradient operator and `h = λ`.
pub fn ppa(model: &ObjectiveModel, lambda: f64, cfg: &SolverConfig) -> Result<SolverTrace> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    let mut trace = abstract_gradient(model, &ResidualOp::MoreauGradient { lambda }, lambda, cfg)?;
    trace.method = "ppa".into();
    for row in &mut trace.rows {
        let x = Point::from_vec(row.x.clone());
        let prox = model.prox_full(&x, lambda)?;
        row.aux = TraceAux::Ppa {
            prox: prox.iter().copied().collect(),
        };
    }
    Ok(trace)
}

/// Forward-backward splitting `x_{k+1} = prox_{tg}(x_k − t∇f(x_k))`,
/// realized as the abstract method with the prox-gradient residual and
/// `h = t`. Tail sums `S_k` of the squared residuals are attached after
/// the run.
pub fn fbs(model: &ObjectiveModel, t: f64, cfg: &SolverConfig) -> Result<SolverTrace> {
    let mut trace = abstract_gradient(model, &ResidualOp::ProxGradientResidual { t }, t, cfg)?;
    trace.method = "fbs".into();
    attach_tail_sums(&mut trace);
    Ok(trace)
}

fn attach_tail_sums(trace: &mut SolverTrace) {
    let mut tail = 0.0;
    for row in trace.rows.iter_mut().rev() {
        tail += row.resid * row.resid;
        row.aux = TraceAux::Fbs { tail_sq_sum: tail };
    }
}

/// One sweep of the alternating block method: for each block in order,
/// a prox-gradient step at the partially updated point, with the block's
/// own modulus. Returns the new point and the stacked block residuals.
fn palm_sweep(model: &ObjectiveModel, x: &Point) -> (Point, DVector<f64>) {
    let blocks = model.blocks.as_ref().expect("palm requires blocks");
    let mut xw = x.clone();
    let mut stacked = DVector::zeros(model.dim);
    for b in blocks {
        let t = 1.0 / b.lipschitz;
        // Fresh partial gradient at the partially updated point.
        let grad = model.gradient(&xw);
        for i in b.offset..b.offset + b.len {
            let forward = xw[i] - t * grad[i];
            let p = model.simple.prox_coord(i, forward, t);
            let g = (xw[i] - p) / t;
            stacked[i] = g;
            xw[i] -= t * g;
        }
    }
    (xw, stacked)
}

/// Cyclic proximal alternating linearized minimization; one trace row per
/// full sweep.
pub fn palm(model: &ObjectiveModel, cfg: &SolverConfig) -> Result<SolverTrace> {
    if model.blocks.is_none() {
        return Err(Error::InvalidParameter(
            "palm requires a block partition".into(),
        ));
    }
    if cfg.x0.len() != model.dim {
        return Err(Error::InvalidParameter("x0 dimension mismatch".into()));
    }
    let mut x = cfg.x0.clone();
    let gap0 = model.try_value(&x)? - model.min_value();
    let mut rows = Vec::new();
    let mut stop = StopReason::MaxIterations;
    for k in 0..=cfg.max_iter {
        let (x_next, stacked) = palm_sweep(model, &x);
        let resid = stacked.norm();
        let gap = model.gap(&x);
        if k > 0 {
            guard_divergence(k, gap, gap0)?;
        }
        rows.push(TraceRow {
            k,
            x: x.iter().copied().collect(),
            gap,
            dist: model.distance_to_critical(&x),
            resid,
            aux: TraceAux::None,
        });
        if let Some(tol) = cfg.stop_tol {
            if resid <= tol {
                stop = StopReason::ResidualBelowTol;
                break;
            }
        }
        if k == cfg.max_iter {
            break;
        }
        x = x_next;
    }
    Ok(SolverTrace {
        method: "palm".into(),
        rows,
        stop,
    })
}

/// Momentum coefficients of the accelerated scheme for constants `(μ, L)`:
/// `α = (√L−√μ)/(√L+√μ)`, `β = 2√μ/(√L+√μ)`, `γ = (1+√(L/μ))/(2L)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AccelCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Default Lyapunov weight `τ = β/(2γ) = 2Lμ/(√L+√μ)²`.
    pub tau: f64,
}

pub fn accel_coefficients(mu: f64, l: f64) -> Result<AccelCoefficients> {
    if !(mu > 0.0 && mu < l) {
        return Err(Error::InvalidParameter(
            "accelerated scheme requires 0 < mu < L".into(),
        ));
    }
    let (sl, sm) = (l.sqrt(), mu.sqrt());
    let alpha = (sl - sm) / (sl + sm);
    let beta = 2.0 * sm / (sl + sm);
    let gamma = (1.0 + (l / mu).sqrt()) / (2.0 * l);
    Ok(AccelCoefficients {
        alpha,
        beta,
        gamma,
        tau: 2.0 * l * mu / (sl + sm).powi(2),
    })
}

/// Accelerated forward-backward method on a composite spec:
/// `y_k = x_k + α(x_k − x_{k−1})`, `x_{k+1} = y_k − G(y_k)/L = p(y_k)`,
/// starting from `x_{−1} = x_0`. Records `y_k`, the weighted average
/// `z_k = ½(1+√(L/μ))y_k + ½(1−√(L/μ))x_k`, and the Lyapunov value
/// `Φ_k = φ(x_k) − min φ + τ‖z_k − x*‖²`.
pub fn nesterov_afb(
    spec: &CompositeSpec,
    mu: f64,
    l: f64,
    cfg: &SolverConfig,
    tau: Option<f64>,
) -> Result<SolverTrace> {
    let coef = accel_coefficients(mu, l)?;
    let tau = tau.unwrap_or(coef.tau);
    let (x_star, min_phi) = spec.minimizer()?;
    if cfg.x0.len() != spec.dim() {
        return Err(Error::InvalidParameter("x0 dimension mismatch".into()));
    }
    let s = (l / mu).sqrt();
    let mut x_prev = cfg.x0.clone();
    let mut x = cfg.x0.clone();
    let gap0 = (spec.value(&x) - min_phi).max(0.0);
    let mut rows = Vec::new();
    let mut stop = StopReason::MaxIterations;
    for k in 0..=cfg.max_iter {
        let y = &x + (&x - &x_prev).scale(coef.alpha);
        let z = y.scale(0.5 * (1.0 + s)) + x.scale(0.5 * (1.0 - s));
        let gap = spec.value(&x) - min_phi;
        let phi = gap + tau * (&z - &x_star).norm_squared();
        let resid = spec.gradient_mapping(l, &x)?.norm();
        if k > 0 && gap > 1e3 * gap0.max(1e-12) {
            return Err(Error::Diverged { iteration: k, gap });
        }
        rows.push(TraceRow {
            k,
            x: x.iter().copied().collect(),
            gap,
            dist: spec
                .distance_to_critical(&x)
                .unwrap_or((&x - &x_star).norm()),
            resid,
            aux: TraceAux::Nesterov {
                y: y.iter().copied().collect(),
                z: z.iter().copied().collect(),
                phi,
            },
        });
        if let Some(tol) = cfg.stop_tol {
            if resid <= tol {
                stop = StopReason::ResidualBelowTol;
                break;
            }
        }
        if k == cfg.max_iter {
            break;
        }
        let next = spec.prox_linearized(l, &y)?;
        x_prev = x;
        x = next;
    }
    Ok(SolverTrace {
        method: "nesterov".into(),
        rows,
        stop,
    })
}

/// Smallest `θ ∈ [α, 1)` for which the Lyapunov sequence
/// `Φ_k(x*; τ(θ))` with `ρ = max{α, θ}` and `τ = θβ/(2ργ)` contracts by
/// `ρ` at every recorded step. On `[α, 1)` the weight is the constant
/// `τ = β/(2γ)`, so the predicate is a monotone threshold and bisection is
/// valid; below `α` the certified rate `ρ = α` would not improve anyway.
/// `None` when even `θ → 1⁻` fails.
pub fn bisect_theta(trace: &SolverTrace, mu: f64, l: f64, x_star: &Point) -> Result<Option<f64>> {
    let coef = accel_coefficients(mu, l)?;
    let gaps: Vec<f64> = trace.rows.iter().map(|r| r.gap).collect();
    let zdists: Vec<f64> = trace
        .rows
        .iter()
        .map(|r| match &r.aux {
            TraceAux::Nesterov { z, .. } => (Point::from_vec(z.clone()) - x_star).norm_squared(),
            _ => f64::NAN,
        })
        .collect();
    if zdists.iter().any(|d| d.is_nan()) {
        return Err(Error::InvalidParameter(
            "theta bisection requires a trace from the accelerated method".into(),
        ));
    }
    let contracts = |theta: f64| -> bool {
        let rho = coef.alpha.max(theta);
        let tau = theta * coef.beta / (2.0 * rho * coef.gamma);
        let phi: Vec<f64> = gaps.iter().zip(&zdists).map(|(g, d)| g + tau * d).collect();
        phi.windows(2).all(|w| {
            let bound = rho * w[0];
            w[1] <= bound + 1e-12 * bound.abs().max(1e-12)
        })
    };
    if !contracts(1.0 - 1e-9) {
        return Ok(None);
    }
    if contracts(coef.alpha) {
        return Ok(Some(coef.alpha));
    }
    let (mut lo, mut hi) = (coef.alpha, 1.0 - 1e-9);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if contracts(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}
