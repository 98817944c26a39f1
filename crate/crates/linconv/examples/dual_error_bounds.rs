//! Dual objectives g*(Aᵀx) − ⟨b, x⟩ of strongly convex primals: the
//! objective-growth constant on a small sublevel set and the gradient
//! correlation constant across growing sublevel sets.
//!
//! ```text
//! cargo run --example dual_error_bounds
//! ```

use linconv::dual::{
    build_dual, elastic_net_pair, fenchel_young_slack, quadratic_pair, verify_dual_eb,
};
use nalgebra::{dvector, DMatrix};

fn main() -> linconv::Result<()> {
    // Quadratic primal: min ½y² s.t. (1,1)ᵀ y = (1,1)ᵀ.
    // Dual: f(x) = ½(x₁+x₂)² − (x₁+x₂), minimized on the line x₁+x₂ = 1.
    let quad = build_dual(
        quadratic_pair(1.0, dvector![0.0])?,
        DMatrix::from_row_slice(2, 1, &[1.0, 1.0]),
        dvector![1.0, 1.0],
    )?;
    println!(
        "quadratic-primal dual: ȳ = {:.4}, min f = {:.4}, L = ‖A‖²/c = {}",
        quad.y_bar[0],
        quad.model.min_value(),
        quad.model.smooth.lipschitz
    );
    let rep = verify_dual_eb(&quad, 1.0, &[0.1, 1.0, 10.0], 400, 7)?;
    println!(
        "  growth constant on X_1: α̂ = {:.4} (analytic value 2)",
        rep.alpha_hat
    );
    // f depends on x only through x₁+x₂: invariant along (1,−1).
    let x = dvector![0.3, -0.2];
    let shifted = &x + dvector![1.0, -1.0].scale(0.7);
    println!(
        "  null-direction invariance: f(x) − f(x + t(1,−1)) = {:+.1e}",
        quad.model.value(&x) - quad.model.value(&shifted)
    );

    // Elastic-net primal: min ½‖y‖² + ‖y‖₁ s.t. diag(1,2) y = (2,−2).
    let pair = elastic_net_pair(1.0, 2)?;
    println!("\nelastic-net conjugate spot checks (Fenchel–Young slack ≥ 0, = 0 at subgradients):");
    for (y, z) in [
        (dvector![0.5, -1.0], dvector![2.0, 0.3]),
        (dvector![2.0, 0.0], dvector![3.0, 0.5]),
    ] {
        println!(
            "  slack at (y, z) = {:+.4e}",
            fenchel_young_slack(&pair, &y, &z)
        );
    }
    let net = build_dual(
        pair,
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]),
        dvector![2.0, -2.0],
    )?;
    println!(
        "elastic-net dual: ȳ = ({}, {}), x̄ = characterization residual {:.1e} at (3, −1)",
        net.y_bar[0],
        net.y_bar[1],
        net.characterization_residual(&dvector![3.0, -1.0])
    );
    let rep = verify_dual_eb(&net, 1.0, &[0.1, 1.0, 10.0], 400, 11)?;
    println!(
        "  α̂ on X_1 = {:.4}; correlation constants per sublevel set:",
        rep.alpha_hat
    );
    for e in &rep.entries {
        println!(
            "    r = {:>5}: ν̂ = {:.4}, ρ_r = {:.4}, scaled bound ratio = {:.2}",
            e.r, e.nu_hat, e.rho_r, e.bound_ratio
        );
    }
    println!("  (ν̂ non-increasing in r; ρ_r = min(1, √(r₁/r)) with r₁ = r₀/2)");
    Ok(())
}
