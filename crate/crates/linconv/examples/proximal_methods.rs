//! The proximal point method and forward-backward splitting as
//! specializations of the abstract iteration, with Moreau-envelope facts.
//!
//! ```text
//! cargo run --example proximal_methods
//! ```

use linconv::analysis::{measure_rate, predicted_rate, RateFormula, RateMetric};
use linconv::model::{soft_threshold, CriticalSetDescriptor, SimplePart, SmoothPart};
use linconv::problems::{make_lasso, make_strongly_convex_quadratic};
use linconv::solvers::{abstract_gradient, fbs, ppa};
use linconv::{CoordPenalty, ObjectiveModel, Point, ResidualOp, SolverConfig};
use nalgebra::{dvector, DMatrix};
use std::sync::Arc;

fn main() -> linconv::Result<()> {
    // PPA on ½x²: prox is x/(1+λ), iterates halve each step.
    let quad = make_strongly_convex_quadratic(DMatrix::from_element(1, 1, 1.0), dvector![0.0])?;
    let cfg = SolverConfig::new(dvector![1.0]).with_max_iter(20);
    let trace = ppa(&quad, 1.0, &cfg)?;
    let rate = measure_rate(&trace, RateMetric::DistSq, 0)?;
    let bound = predicted_rate(&RateFormula::Ppa {
        alpha: 1.0,
        lambda: 1.0,
    })?;
    println!(
        "ppa on ½x² (λ = 1): dist² ratio {:.3} against guaranteed {bound}",
        rate.tau_hat_geo
    );

    // Same run through the abstract iteration with the Moreau-gradient
    // operator: identical bits.
    let abstract_trace = abstract_gradient(
        &quad,
        &ResidualOp::MoreauGradient { lambda: 1.0 },
        1.0,
        &cfg,
    )?;
    let identical = trace
        .rows
        .iter()
        .zip(&abstract_trace.rows)
        .all(|(a, b)| a.x == b.x && a.resid == b.resid);
    println!("ppa ≡ abstract(moreau, h = λ) bitwise: {identical}");

    // Moreau envelope of |x|: smooth, same minimizer, 1/λ-Lipschitz slope.
    let abs = ObjectiveModel {
        dim: 1,
        smooth: SmoothPart::zero(1),
        simple: SimplePart::uniform(1, CoordPenalty::l1(1.0)),
        full_prox: Some(Arc::new(|x: &Point, t: f64| {
            dvector![soft_threshold(x[0], t)]
        })),
        blocks: None,
        critical: CriticalSetDescriptor::single(dvector![0.0], 0.0),
        strong_convexity: None,
    };
    println!("\nmoreau envelope of |x| at λ = 1:");
    for &x in &[0.0, 0.5, 1.0, 2.0, 3.0] {
        let env = abs.moreau_envelope(1.0, &dvector![x])?;
        let grad = abs.residual(&ResidualOp::MoreauGradient { lambda: 1.0 }, &dvector![x])?;
        println!(
            "  x = {x}: φ_λ = {env:.4} (φ = {:.1}), ∇φ_λ = {:+.3}",
            x.abs(),
            grad[0]
        );
    }
    // Finite termination of ppa on |x|: steps of λ until the origin.
    let trace = ppa(&abs, 0.5, &SolverConfig::new(dvector![2.0]))?;
    let xs: Vec<f64> = trace.rows.iter().map(|r| r.x[0]).collect();
    println!("ppa on |x| with λ = 0.5 from x₀ = 2: iterates {xs:?}");

    // Forward-backward on the closed-form lasso: one step to the fixed
    // point (the forward step is constant in x, the prox lands on x*).
    let lasso = make_lasso(DMatrix::identity(2, 2), dvector![2.0, 0.0], 1.0)?;
    let trace = fbs(&lasso, 1.0, &SolverConfig::new(dvector![0.0, 0.0]))?;
    println!(
        "\nfbs on lasso (A = I, b = (2,0), w = 1): x₁ = {:?} after one step, ‖R‖ = {:.1e}",
        trace.rows[1].x,
        trace.rows.last().unwrap().resid
    );
    Ok(())
}
