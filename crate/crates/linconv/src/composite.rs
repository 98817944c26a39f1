//! Composite objectives `φ = f∘e + g` with their linearized proximal step
//! `p(y)` and gradient mapping `G(y) = L(y − p(y))`.
//!
//! Two families are supported:
//!
//! * `SmoothPlusSimple` — the scalar outer map (`m = 1`, `f(t) = t`), i.e.
//!   `φ = e + g`; here `p(y) = prox_{g/L}(y − ∇e(y)/L)`.
//! * `QuadraticComposition` — `f = ½‖·‖²` applied to a linear map
//!   `e(x) = Bx` with `g ≡ 0`; the linearized subproblem is then
//!   `min_x ½‖Bx‖² + (L/2)‖x − y‖²`, solved in closed form.
//!
//! Nonlinear outer maps with `m > 1` (max-type objectives) are rejected.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{CriticalSet, ObjectiveModel, Point};

#[derive(Clone)]
pub enum CompositeForm {
    SmoothPlusSimple { model: Box<ObjectiveModel> },
    QuadraticComposition { map: DMatrix<f64> },
}

#[derive(Clone)]
pub struct CompositeSpec {
    pub name: String,
    pub form: CompositeForm,
}

impl CompositeSpec {
    pub fn smooth_plus_simple(name: impl Into<String>, model: ObjectiveModel) -> Self {
        Self {
            name: name.into(),
            form: CompositeForm::SmoothPlusSimple {
                model: Box::new(model),
            },
        }
    }

    pub fn quadratic_composition(name: impl Into<String>, map: DMatrix<f64>) -> Self {
        Self {
            name: name.into(),
            form: CompositeForm::QuadraticComposition { map },
        }
    }

    pub fn dim(&self) -> usize {
        match &self.form {
            CompositeForm::SmoothPlusSimple { model } => model.dim,
            CompositeForm::QuadraticComposition { map } => map.ncols(),
        }
    }

    /// `φ(x)`; `+∞` outside `dom g`.
    pub fn value(&self, x: &Point) -> f64 {
        match &self.form {
            CompositeForm::SmoothPlusSimple { model } => model.value(x),
            CompositeForm::QuadraticComposition { map } => 0.5 * (map * x).norm_squared(),
        }
    }

    /// The linearized proximal step `p(y)`, unique by strong convexity of
    /// the subproblem.
    pub fn prox_linearized(&self, l: f64, y: &Point) -> Result<Point> {
        if !(l > 0.0) {
            return Err(Error::InvalidParameter(
                "composite modulus L must be positive".into(),
            ));
        }
        match &self.form {
            CompositeForm::SmoothPlusSimple { model } => model.prox_linearized(l, y),
            CompositeForm::QuadraticComposition { map } => {
                // (BᵀB + L·I) p = L·y
                let n = map.ncols();
                let mut lhs = map.transpose() * map;
                for i in 0..n {
                    lhs[(i, i)] += l;
                }
                let rhs = y.scale(l);
                lhs.cholesky()
                    .ok_or_else(|| Error::InvalidModel("composite subproblem not SPD".into()))
                    .map(|c| c.solve(&rhs))
            }
        }
    }

    /// `G(y) = L(y − p(y))`.
    pub fn gradient_mapping(&self, l: f64, y: &Point) -> Result<DVector<f64>> {
        let p = self.prox_linearized(l, y)?;
        Ok((y - p).scale(l))
    }

    /// The unique minimizer and minimum value; an error when the minimizer
    /// descriptor is not a single point.
    pub fn minimizer(&self) -> Result<(Point, f64)> {
        match &self.form {
            CompositeForm::SmoothPlusSimple { model } => match &model.critical.set {
                CriticalSet::SinglePoint { x_star } => {
                    Ok((x_star.clone(), model.critical.min_value))
                }
                CriticalSet::NumericOracle { x_ref, .. } => {
                    Ok((x_ref.clone(), model.critical.min_value))
                }
                _ => Err(Error::InvalidModel(
                    "composite scheme requires a unique minimizer descriptor".into(),
                )),
            },
            CompositeForm::QuadraticComposition { map } => {
                let svd = map.clone().svd(false, false);
                let min_sv = svd
                    .singular_values
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min);
                if map.nrows() >= map.ncols() && min_sv > 1e-12 {
                    Ok((Point::zeros(map.ncols()), 0.0))
                } else {
                    Err(Error::InvalidModel(
                        "quadratic composition has a non-unique minimizer".into(),
                    ))
                }
            }
        }
    }

    pub fn model(&self) -> Option<&ObjectiveModel> {
        match &self.form {
            CompositeForm::SmoothPlusSimple { model } => Some(model),
            CompositeForm::QuadraticComposition { .. } => None,
        }
    }

    /// Distance to the critical set when the geometry is known.
    pub fn distance_to_critical(&self, x: &Point) -> Option<f64> {
        match &self.form {
            CompositeForm::SmoothPlusSimple { model } => Some(model.distance_to_critical(x)),
            CompositeForm::QuadraticComposition { .. } => None,
        }
    }
}
