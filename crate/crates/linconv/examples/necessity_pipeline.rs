//! The necessity direction: run a method, measure its Q-linear rate, turn
//! the rate into the error-bound constant it implies, and re-check that
//! condition on samples. Conservative by design — the implied constant is
//! always dominated by the empirical one.
//!
//! ```text
//! cargo run --example necessity_pipeline
//! ```

use linconv::analysis::{measure_rate, necessity_check, NecessityCase, RateMetric};
use linconv::eb::{estimate_constant, EBConditionKind};
use linconv::problems::{make_quartic_1d, make_strongly_convex_quadratic};
use linconv::solvers::{gradient_descent, ppa};
use linconv::{ResidualOp, SamplePlan, SolverConfig};
use nalgebra::{dvector, DMatrix};

fn main() -> linconv::Result<()> {
    // Gradient descent at h = 1/L on diag(1,4).
    let m = make_strongly_convex_quadratic(
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]),
        dvector![0.0, 0.0],
    )?;
    let cfg = SolverConfig::new(dvector![1.0, 1.0]).with_max_iter(80);
    let trace = gradient_descent(&m, 0.25, &cfg)?;
    let tau = measure_rate(&trace, RateMetric::DistSq, 5)?.tau_hat_max;
    let plan = SamplePlan::gaussian(trace.rows[0].gap, 1000, 13);
    let rep = necessity_check(&m, &NecessityCase::GradientDescent, tau, &plan)?;
    let nu_hat = estimate_constant(&m, &ResidualOp::Gradient, EBConditionKind::CorEB, &plan)?;
    println!("gradient descent on diag(1,4) at h = 1/L:");
    println!("  observed τ̂ = {tau:.6}");
    println!(
        "  implied ν = L(1−√τ̂)² = {:.6}; re-check: {}; empirical ν̂ = {nu_hat:.4}",
        rep.implied_constant,
        if rep.check.passed() { "pass" } else { "fail" }
    );

    // Proximal point on ½x² at λ = 1: τ = 1/4 exactly, implied α = 1/8.
    let q1 = make_strongly_convex_quadratic(DMatrix::from_element(1, 1, 1.0), dvector![0.0])?;
    let trace = ppa(
        &q1,
        1.0,
        &SolverConfig::new(dvector![1.0]).with_max_iter(25),
    )?;
    let tau = measure_rate(&trace, RateMetric::DistSq, 0)?.tau_hat_max;
    let rep = necessity_check(&q1, &NecessityCase::Ppa { lambda: 1.0 }, tau, &plan)?;
    println!("\nproximal point on ½x² (λ = 1):");
    println!(
        "  observed τ̂ = {tau:.4}, implied α = (1−√τ̂)²/(2λ) = {:.4} (true α = 1): {}",
        rep.implied_constant,
        if rep.check.passed() { "pass" } else { "fail" }
    );

    // The two-term small-step bound: attained with equality on isotropic
    // quadratics, where h = (1−√τ)/L exactly.
    let iso = make_strongly_convex_quadratic(DMatrix::identity(2, 2), dvector![0.0, 0.0])?;
    let trace = gradient_descent(&iso, 0.1, &SolverConfig::new(dvector![1.0, 1.0]))?;
    let tau = measure_rate(&trace, RateMetric::DistSq, 0)?.tau_hat_max;
    let rep = necessity_check(&iso, &NecessityCase::GradientBasic { h: 0.1 }, tau, &plan)?;
    println!("\nsmall-step two-term bound on the identity quadratic:");
    println!(
        "  τ̂ = {tau:.4} at h = 0.1 = (1−√τ̂)/L; check: {}",
        if rep.check.passed() {
            "pass (tight)"
        } else {
            "fail"
        }
    );

    // A sublinear toy: ratios crawl to 1, no linear certificate exists.
    let quartic = make_quartic_1d();
    let trace = gradient_descent(
        &quartic,
        1.0 / 12.0,
        &SolverConfig::new(dvector![1.0]).with_max_iter(5000),
    )?;
    let tau = measure_rate(&trace, RateMetric::DistSq, 5)?.tau_hat_max;
    match necessity_check(&quartic, &NecessityCase::GradientDescent, tau, &plan) {
        Err(e) => println!("\nquartic toy: τ̂ = {tau:.5} → {e}"),
        Ok(_) => println!("\nquartic toy unexpectedly produced a certificate"),
    }
    Ok(())
}
