//! The accelerated forward-backward method: Lyapunov contraction at
//! 1 − √(μ/L) on a smooth quadratic, and the Φ-contraction certificate
//! with a bisected θ on a nonsmooth composite.
//!
//! ```text
//! cargo run --example nesterov_acceleration
//! ```

use linconv::eb::check_composite_eb;
use linconv::problems::{make_composite_desk, make_strongly_convex_quadratic};
use linconv::sample::pair_grid_1d;
use linconv::solvers::{accel_coefficients, bisect_theta, nesterov_afb, TraceAux};
use linconv::{CompositeSpec, Point, SolverConfig};
use nalgebra::{dvector, DMatrix};

fn main() -> linconv::Result<()> {
    // Smooth case: diag(1,4), μ = 1, L = 4.
    let quad = make_strongly_convex_quadratic(
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]),
        dvector![0.0, 0.0],
    )?;
    let spec = CompositeSpec::smooth_plus_simple("diag14", quad);
    let cfg = SolverConfig::new(dvector![1.0, 1.0])
        .with_max_iter(60)
        .with_stop_tol(None);
    let trace = nesterov_afb(&spec, 1.0, 4.0, &cfg, None)?;
    // Lyapunov value gap + (μ/2)‖w − x*‖² with w = 2z − x.
    let lyap: Vec<f64> = trace
        .rows
        .iter()
        .map(|r| {
            let x = Point::from_vec(r.x.clone());
            let z = match &r.aux {
                TraceAux::Nesterov { z, .. } => Point::from_vec(z.clone()),
                _ => unreachable!(),
            };
            r.gap + 0.5 * (z.scale(2.0) - x).norm_squared()
        })
        .collect();
    let worst = lyap
        .windows(2)
        .filter(|w| w[0] > 1e-14)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max);
    println!("quadratic (μ = 1, L = 4): worst Lyapunov ratio {worst:.6} vs 1 − √(μ/L) = 0.5");

    // Nonsmooth composite: ½x² + |x| + δ_[−2,2], run at (μ, L) = (1, 4).
    let desk = make_composite_desk(1.0)?;
    let grid = pair_grid_1d((-2.0, 2.0), (-4.0, 4.0), 0.02);
    let ceb = check_composite_eb(&desk, 1.0, 4.0, &grid)?;
    println!(
        "\ncomposite desk problem satisfies the composite inequality at (1, 4): {:?}",
        ceb.verdict
    );
    let coef = accel_coefficients(1.0, 4.0)?;
    println!(
        "coefficients: α = {:.4}, β = {:.4}, γ = {:.4}, default τ = {:.4}",
        coef.alpha, coef.beta, coef.gamma, coef.tau
    );
    let cfg = SolverConfig::new(dvector![2.0])
        .with_max_iter(120)
        .with_stop_tol(None);
    let dtrace = nesterov_afb(&desk, 1.0, 4.0, &cfg, None)?;
    match bisect_theta(&dtrace, 1.0, 4.0, &dvector![0.0])? {
        Some(theta) => {
            let rho = coef.alpha.max(theta);
            println!("bisected θ̂₀ = {theta:.6}: Φ contracts by ρ = max(α, θ̂₀) = {rho:.6} per step");
        }
        None => println!("no θ < 1 certified a contraction on this trace"),
    }
    Ok(())
}
