//! Where the composite error-bound inequality holds and where it breaks:
//! the box-plus-l1 scalar holds exactly up to μ = 1/9; a two-coordinate
//! composition and a rank-one quadratic fail for every positive μ.
//!
//! ```text
//! cargo run --example composite_counterexamples
//! ```

use linconv::eb::{check_composite_eb, check_rel1_failure_quadratic};
use linconv::problems::{make_box_l1_scalar, make_composite_counterexample};
use linconv::sample::pair_grid_1d;
use linconv::CompositeSpec;
use nalgebra::dvector;

fn main() -> linconv::Result<()> {
    // g = |x| + δ_[−2,2] with λ = 1: the envelope-linearization lower
    // bound holds with μ up to exactly 1/9.
    let spec = CompositeSpec::smooth_plus_simple("box_l1", make_box_l1_scalar());
    let grid = pair_grid_1d((-2.0, 2.0), (-4.0, 4.0), 0.01);
    println!("box-plus-l1 scalar over a {}-pair grid:", grid.len());
    for mu in [1.0 / 9.0, 0.5] {
        let rep = check_composite_eb(&spec, mu, 1.0, &grid)?;
        println!(
            "  μ = {mu:.4}: {:?} (worst slack {:+.3e} at x = {:.2}, y = {:.2})",
            rep.verdict, rep.worst_slack, rep.witness_x[0], rep.witness_y[0]
        );
    }
    println!("  (the boundary constant is tight: the worst pair sits at x = 0, y = −3)");

    // e(x) = (x₁, x₁) composed with ½‖·‖²: strongly convex outer map,
    // yet the inequality fails along the second coordinate.
    let counter = make_composite_counterexample();
    let pair = (dvector![0.0, 0.0], dvector![0.0, 1.0]);
    println!("\ntwo-coordinate composition, witness pair x = (0,0), y = (0,1):");
    for mu in [1e-6, 1e-3, 1.0] {
        let rep = check_composite_eb(&counter, mu, 2.0, std::slice::from_ref(&pair))?;
        println!(
            "  μ = {mu:.0e}: {:?} (slack {:+.3e} = −μ/2)",
            rep.verdict, rep.worst_slack
        );
    }
    let p = counter.prox_linearized(2.0, &dvector![1.0, 5.0])?;
    let g = counter.gradient_mapping(2.0, &dvector![1.0, 5.0])?;
    println!(
        "  closed forms at L = 2, y = (1,5): p = ({}, {}), G = ({}, {})",
        p[0], p[1], g[0], g[1]
    );

    // ½(aᵀx)²: violated along any direction orthogonal to a, no matter
    // how small μ is.
    println!("\nrank-one quadratic ½(aᵀx)², a = (1,1):");
    let rep = check_rel1_failure_quadratic(
        &dvector![1.0, 1.0],
        &[1e-6, 1e-3, 1.0],
        &[0.5, 1.0, 10.0, 100.0],
    )?;
    println!(
        "  orthogonal direction h = ({:+.3}, {:+.3})",
        rep.direction[0], rep.direction[1]
    );
    for e in &rep.entries {
        println!(
            "  μ = {:.0e}: violated = {} (worst slack {:+.3e} at ‖y−x‖ = {})",
            e.mu, e.violated, e.worst_slack, e.witness_scale
        );
    }
    Ok(())
}
