//! Residual measure operators: maps that vanish exactly on `crit φ`.
//!
//! Five instances are provided: the plain gradient, the least-norm
//! subgradient `∂⁰φ`, the prox-gradient residual `R_t`, the Moreau-envelope
//! gradient `∇f_λ`, and the composite gradient mapping `G` of the
//! linearized proximal subproblem.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ObjectiveModel, Point};

/// Selects which residual measure operator `G_φ` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResidualOp {
    /// `∇φ = ∇f`; requires `g ≡ 0`.
    Gradient,
    /// `∂⁰φ`, the least-norm subgradient (separable simple parts only).
    LeastNormSubgradient,
    /// `R_t(x) = t⁻¹(x − prox_{tg}(x − t∇f(x)))` with `t ∈ (0, 1/L]`.
    ProxGradientResidual { t: f64 },
    /// `∇φ_λ(x) = λ⁻¹(x − prox_{λφ}(x))` through the full-objective prox.
    MoreauGradient { lambda: f64 },
    /// `G(y) = L(y − p(y))` with `p` the linearized proximal step.
    CompositeG { l: f64 },
}

impl std::fmt::Display for ResidualOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResidualOp::Gradient => write!(f, "gradient"),
            ResidualOp::LeastNormSubgradient => write!(f, "subgradient"),
            ResidualOp::ProxGradientResidual { t } => write!(f, "prox-residual(t={t})"),
            ResidualOp::MoreauGradient { lambda } => write!(f, "moreau(lambda={lambda})"),
            ResidualOp::CompositeG { l } => write!(f, "composite(l={l})"),
        }
    }
}

impl ObjectiveModel {
    /// Evaluates the selected residual measure operator at `x`.
    ///
    /// Residual-vanishing contract: the result is zero (within tolerance)
    /// exactly on `crit φ` for every applicable operator kind.
    pub fn residual(&self, op: &ResidualOp, x: &Point) -> Result<DVector<f64>> {
        match *op {
            ResidualOp::Gradient => {
                if !self.simple.is_zero() {
                    return Err(Error::OperatorNotApplicable {
                        operator: op.to_string(),
                        reason: "the gradient is not a residual measure operator when g ≢ 0".into(),
                    });
                }
                Ok(self.gradient(x))
            }
            ResidualOp::LeastNormSubgradient => self.least_norm_subgradient(x),
            ResidualOp::ProxGradientResidual { t } => {
                check_prox_step(t, self.smooth.lipschitz, &op.to_string())?;
                let grad = self.gradient(x);
                let forward = x - grad * t;
                let p = self.prox_simple(&forward, t);
                Ok((x - p).unscale(t))
            }
            ResidualOp::MoreauGradient { lambda } => {
                if !(lambda > 0.0) {
                    return Err(Error::InvalidParameter(
                        "moreau lambda must be positive".into(),
                    ));
                }
                let p = self.prox_full(x, lambda)?;
                Ok((x - p).unscale(lambda))
            }
            ResidualOp::CompositeG { l } => {
                let p = self.prox_linearized(l, x)?;
                Ok((x - p).scale(l))
            }
        }
    }

    /// `‖G_φ(x)‖` for the selected operator.
    pub fn residual_norm(&self, op: &ResidualOp, x: &Point) -> Result<f64> {
        Ok(self.residual(op, x)?.norm())
    }

    /// `p(y) = argmin_x g(x) + ⟨∇e(y), x − y⟩ + (L/2)‖x − y‖²`, the
    /// linearized proximal step for the supported composite family
    /// (scalar outer map applied to the smooth part). Reduces to
    /// `prox_{g/L}(y − ∇e(y)/L)`.
    pub fn prox_linearized(&self, l: f64, y: &Point) -> Result<Point> {
        if !(l > 0.0) {
            return Err(Error::InvalidParameter(
                "composite modulus L must be positive".into(),
            ));
        }
        let t = 1.0 / l;
        let grad = self.gradient(y);
        let forward = y - grad * t;
        Ok(self.prox_simple(&forward, t))
    }

    /// Moreau–Yosida envelope `φ_λ(x) = φ(p) + ‖x − p‖²/(2λ)` with
    /// `p = prox_{λφ}(x)`.
    pub fn moreau_envelope(&self, lambda: f64, x: &Point) -> Result<f64> {
        let p = self.prox_full(x, lambda)?;
        Ok(self.value(&p) + (x - &p).norm_squared() / (2.0 * lambda))
    }
}

fn check_prox_step(t: f64, lipschitz: f64, operator: &str) -> Result<()> {
    let hi = 1.0 / lipschitz;
    // Tiny headroom so that t computed as 1/L elsewhere always passes.
    if !(t > 0.0) || t > hi * (1.0 + 1e-12) {
        return Err(Error::OperatorNotApplicable {
            operator: operator.to_string(),
            reason: format!("step t must lie in (0, 1/L] = (0, {hi}]"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CoordPenalty, CriticalSetDescriptor, SimplePart, SmoothPart};
    use nalgebra::dvector;
    use std::sync::Arc;

    fn diag_quadratic() -> ObjectiveModel {
        // f = ½ xᵀ diag(1,4) x
        let smooth = SmoothPart {
            value: Arc::new(|x: &Point| 0.5 * (x[0] * x[0] + 4.0 * x[1] * x[1])),
            gradient: Arc::new(|x: &Point| dvector![x[0], 4.0 * x[1]]),
            lipschitz: 4.0,
        };
        ObjectiveModel {
            dim: 2,
            smooth,
            simple: SimplePart::Zero,
            full_prox: None,
            blocks: None,
            critical: CriticalSetDescriptor::single(dvector![0.0, 0.0], 0.0),
            strong_convexity: Some(1.0),
        }
    }

    fn shifted_lasso() -> ObjectiveModel {
        // f = ½‖x − (2,0)‖², g = ‖x‖₁, minimizer (1,0)
        let smooth = SmoothPart {
            value: Arc::new(|x: &Point| 0.5 * ((x[0] - 2.0).powi(2) + x[1].powi(2))),
            gradient: Arc::new(|x: &Point| dvector![x[0] - 2.0, x[1]]),
            lipschitz: 1.0,
        };
        ObjectiveModel {
            dim: 2,
            smooth,
            simple: SimplePart::uniform(2, CoordPenalty::l1(1.0)),
            full_prox: None,
            blocks: None,
            critical: CriticalSetDescriptor::single(dvector![1.0, 0.0], 1.5),
            strong_convexity: Some(1.0),
        }
    }

    fn scalar_abs() -> ObjectiveModel {
        // φ = |x| with its own prox (soft threshold); crit = {0}
        ObjectiveModel {
            dim: 1,
            smooth: SmoothPart::zero(1),
            simple: SimplePart::uniform(1, CoordPenalty::l1(1.0)),
            full_prox: Some(Arc::new(|x: &Point, t: f64| {
                dvector![crate::model::soft_threshold(x[0], t)]
            })),
            blocks: None,
            critical: CriticalSetDescriptor::single(dvector![0.0], 0.0),
            strong_convexity: None,
        }
    }

    #[test]
    fn gradient_is_matrix_vector_product() {
        let m = diag_quadratic();
        let g = m
            .residual(&ResidualOp::Gradient, &dvector![1.0, 1.0])
            .unwrap();
        assert_eq!(g, dvector![1.0, 4.0]);
    }

    #[test]
    fn gradient_rejected_on_composite_model() {
        let m = shifted_lasso();
        assert!(m
            .residual(&ResidualOp::Gradient, &dvector![1.0, 0.0])
            .is_err());
    }

    #[test]
    fn prox_gradient_residual_by_hand() {
        // x − t∇f = (2,0); soft-threshold → (1,0); R₁ = (2,0) − (1,0) = (1,0).
        let m = shifted_lasso();
        let r = m
            .residual(
                &ResidualOp::ProxGradientResidual { t: 1.0 },
                &dvector![2.0, 0.0],
            )
            .unwrap();
        assert_eq!(r, dvector![1.0, 0.0]);
    }

    #[test]
    fn prox_step_window_enforced() {
        let m = diag_quadratic(); // L = 4, so t ≤ 0.25
        assert!(m
            .residual(
                &ResidualOp::ProxGradientResidual { t: 0.26 },
                &dvector![1.0, 1.0]
            )
            .is_err());
        assert!(m
            .residual(
                &ResidualOp::ProxGradientResidual { t: 0.25 },
                &dvector![1.0, 1.0]
            )
            .is_ok());
    }

    #[test]
    fn moreau_gradient_of_absolute_value() {
        // prox_{1·|·|}(3) = 2, so ∇φ₁(3) = 1.
        let m = scalar_abs();
        let g = m
            .residual(&ResidualOp::MoreauGradient { lambda: 1.0 }, &dvector![3.0])
            .unwrap();
        assert_eq!(g, dvector![1.0]);
    }

    #[test]
    fn moreau_envelope_matches_grid_minimization() {
        // Oracle: φ_λ(x) = min_u |u| + (x−u)²/(2λ) on a dense grid.
        let m = scalar_abs();
        for &x in &[-2.0, -0.3, 0.0, 0.7, 3.0] {
            let lambda = 1.0;
            let direct = m.moreau_envelope(lambda, &dvector![x]).unwrap();
            let mut best = f64::INFINITY;
            let mut u = -5.0_f64;
            while u <= 5.0 {
                best = best.min(u.abs() + (x - u).powi(2) / (2.0 * lambda));
                u += 1e-4;
            }
            assert!((direct - best).abs() < 1e-6, "x = {x}: {direct} vs {best}");
        }
    }

    #[test]
    fn prox_linearized_gradient_step_on_quadratic() {
        // e = ½‖x‖², g ≡ 0, L = 1: p(y) = y − ∇e(y).
        let smooth = SmoothPart {
            value: Arc::new(|x: &Point| 0.5 * x.norm_squared()),
            gradient: Arc::new(|x: &Point| x.clone()),
            lipschitz: 1.0,
        };
        let m = ObjectiveModel {
            dim: 2,
            smooth,
            simple: SimplePart::Zero,
            full_prox: None,
            blocks: None,
            critical: CriticalSetDescriptor::single(dvector![0.0, 0.0], 0.0),
            strong_convexity: Some(1.0),
        };
        let p = m.prox_linearized(1.0, &dvector![2.0, 0.0]).unwrap();
        assert_eq!(p, dvector![0.0, 0.0]);
    }

    #[test]
    fn prox_linearized_componentwise_gradient_step() {
        // e(x) = x₁²: p(y) = (y₁ − 2y₁/L, y₂).
        let smooth = SmoothPart {
            value: Arc::new(|x: &Point| x[0] * x[0]),
            gradient: Arc::new(|x: &Point| dvector![2.0 * x[0], 0.0]),
            lipschitz: 2.0,
        };
        let m = ObjectiveModel {
            dim: 2,
            smooth,
            simple: SimplePart::Zero,
            full_prox: None,
            blocks: None,
            critical: CriticalSetDescriptor::single(dvector![0.0, 0.0], 0.0),
            strong_convexity: None,
        };
        let l = 4.0;
        let y = dvector![3.0, -5.0];
        let p = m.prox_linearized(l, &y).unwrap();
        assert_eq!(p, dvector![3.0 - 2.0 * 3.0 / l, -5.0]);
    }

    #[test]
    fn prox_linearized_shrink_then_clamp() {
        // e ≡ 0, g = |x| + δ_[−2,2], L = 1, y = 3 → p = clamp(S₁(3)) = 2.
        let m = ObjectiveModel {
            dim: 1,
            smooth: SmoothPart::zero(1),
            simple: SimplePart::uniform(1, CoordPenalty::l1_boxed(1.0, -2.0, 2.0)),
            full_prox: None,
            blocks: None,
            critical: CriticalSetDescriptor::single(dvector![0.0], 0.0),
            strong_convexity: None,
        };
        let p = m.prox_linearized(1.0, &dvector![3.0]).unwrap();
        assert_eq!(p, dvector![2.0]);
    }

    #[test]
    fn residual_vanishes_exactly_at_critical_points() {
        let lasso = shifted_lasso();
        let ops = [
            ResidualOp::LeastNormSubgradient,
            ResidualOp::ProxGradientResidual { t: 1.0 },
            ResidualOp::CompositeG { l: 1.0 },
        ];
        for op in &ops {
            let at_star = lasso.residual_norm(op, &dvector![1.0, 0.0]).unwrap();
            assert!(at_star <= 1e-9, "{op}: ‖G(x*)‖ = {at_star}");
            let away = lasso.residual_norm(op, &dvector![0.3, -0.8]).unwrap();
            assert!(away > 1e-6, "{op}: ‖G‖ = {away} away from x*");
        }
    }

    #[test]
    fn dominance_residuals_below_least_norm_subgradient() {
        // ‖R_t(x)‖ ≤ ‖∂⁰φ(x)‖ on sampled points.
        let lasso = shifted_lasso();
        let pts = [
            dvector![0.0, 0.0],
            dvector![2.0, 1.0],
            dvector![-1.0, 0.5],
            dvector![1.5, -0.2],
        ];
        for x in &pts {
            let sub = lasso
                .residual_norm(&ResidualOp::LeastNormSubgradient, x)
                .unwrap();
            let rt = lasso
                .residual_norm(&ResidualOp::ProxGradientResidual { t: 1.0 }, x)
                .unwrap();
            assert!(rt <= sub + 1e-9, "‖R_t‖ = {rt} > ‖∂⁰φ‖ = {sub} at {x:?}");
        }
        // ‖∇φ_λ(x)‖ ≤ ‖∂⁰φ(x)‖ for the purely simple scalar model.
        let abs = scalar_abs();
        for &x in &[-3.0, -0.4, 0.2, 5.0] {
            let p = dvector![x];
            let sub = abs
                .residual_norm(&ResidualOp::LeastNormSubgradient, &p)
                .unwrap();
            let moreau = abs
                .residual_norm(&ResidualOp::MoreauGradient { lambda: 1.0 }, &p)
                .unwrap();
            assert!(moreau <= sub + 1e-9);
        }
    }

    #[test]
    fn moreau_gradient_is_lambda_inverse_lipschitz() {
        let abs = scalar_abs();
        let lambda = 0.7;
        let pts: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.37).collect();
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                let ga = abs
                    .residual(&ResidualOp::MoreauGradient { lambda }, &dvector![a])
                    .unwrap();
                let gb = abs
                    .residual(&ResidualOp::MoreauGradient { lambda }, &dvector![b])
                    .unwrap();
                let ratio = (ga - gb).norm() / (a - b).abs();
                assert!(ratio <= 1.0 / lambda + 1e-9);
            }
        }
    }
}
