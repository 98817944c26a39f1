//! Gradient descent on a strongly convex quadratic: measured per-step
//! contraction against the optimal-step prediction, and the admissible
//! step window of the abstract method.
//!
//! ```text
//! cargo run --example solve_quadratic
//! ```

use linconv::analysis::{measure_rate, predicted_rate, stepsize_window, RateFormula, RateMetric};
use linconv::problems::make_strongly_convex_quadratic;
use linconv::solvers::{gd_step_optimal, gradient_descent};
use linconv::SolverConfig;
use nalgebra::{dvector, DMatrix};

fn main() -> linconv::Result<()> {
    let model = make_strongly_convex_quadratic(
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]),
        dvector![0.0, 0.0],
    )?;
    let (mu, l) = (model.strong_convexity.unwrap(), model.smooth.lipschitz);
    println!("objective: ½xᵀ diag(1,4) x   (μ = {mu}, L = {l})");

    let h = gd_step_optimal(&model).unwrap();
    let predicted = predicted_rate(&RateFormula::SmoothStronglyConvex { mu, l })?;
    println!("optimal step h = 2/(μ+L) = {h}, predicted dist² rate ((L−μ)/(L+μ))² = {predicted}");

    let cfg = SolverConfig::new(dvector![1.0, 1.0]).with_max_iter(60);
    let trace = gradient_descent(&model, h, &cfg)?;
    let rate = measure_rate(&trace, RateMetric::DistSq, 0)?;
    println!(
        "measured over {} iterations: worst ratio {:.17}, geometric mean {:.17}",
        trace.len(),
        rate.tau_hat_max,
        rate.tau_hat_geo
    );

    // A smaller step is still covered by the admissible window of the
    // abstract method (here ν = μ, β = 1/L).
    let (lo, hi, tau_bound) = stepsize_window(0.5, mu, 1.0 / l)?;
    println!("step window at θ = ½: [{lo}, {hi}] with guaranteed rate {tau_bound}");
    let trace = gradient_descent(&model, hi, &cfg)?;
    let rate = measure_rate(&trace, RateMetric::DistSq, 0)?;
    println!(
        "measured at h = {hi}: worst ratio {:.6} ≤ {tau_bound}",
        rate.tau_hat_max
    );
    Ok(())
}
