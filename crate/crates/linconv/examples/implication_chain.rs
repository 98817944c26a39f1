//! The implication chain between the conditions:
//! obj ⇒ cor ⇒ res ⇒ res-obj, with the constant transfers ν = αω/2,
//! κ = ν, η = √(κω), checked pointwise on a sample set, plus the reverse
//! (global) leg α = η²/2.
//!
//! ```text
//! cargo run --example implication_chain
//! ```

use linconv::eb::{implication_constants, verify_implication_chain};
use linconv::problems::{
    make_lasso, make_rank_deficient_least_squares, make_strongly_convex_quadratic,
};
use linconv::{ObjectiveModel, ResidualOp, SamplePlan};
use nalgebra::{dvector, DMatrix};

fn main() -> linconv::Result<()> {
    // The transfer formulas themselves.
    let d = implication_constants(Some(1.0), 1.0, None, None)?;
    println!(
        "transfers from α = 1, ω = 1:  ν = {:?}, κ = {:?}, η = {:?}, α(back) = {:?}\n",
        d.nu, d.kappa, d.eta, d.alpha_back
    );

    let cases: Vec<(&str, ObjectiveModel, ResidualOp)> = vec![
        (
            "quadratic diag(1,4), gradient",
            make_strongly_convex_quadratic(
                DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]),
                dvector![0.0, 0.0],
            )?,
            ResidualOp::Gradient,
        ),
        (
            "rank-deficient line, gradient",
            make_rank_deficient_least_squares(
                DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
                dvector![1.0],
            )?,
            ResidualOp::Gradient,
        ),
        (
            "lasso (I₂, b = (2,0), w = 1), prox residual",
            make_lasso(DMatrix::identity(2, 2), dvector![2.0, 0.0], 1.0)?,
            ResidualOp::ProxGradientResidual { t: 1.0 },
        ),
    ];

    for (name, model, op) in &cases {
        let plan = SamplePlan::gaussian(1.0, 1000, 7);
        let rep = verify_implication_chain(model, op, &plan)?;
        println!("{name}:");
        println!(
            "  estimates: α̂ = {:.4}, ω̂ = {:.4}, η̂ = {:.4}",
            rep.alpha_hat, rep.omega_hat, rep.eta_hat
        );
        println!(
            "  obj∧cor-obj ⇒ cor at ν = {:.4}: {}/{} premises, {} violations",
            rep.leg_obj_to_cor.derived_constant,
            rep.leg_obj_to_cor.premise_holds,
            rep.samples_used,
            rep.leg_obj_to_cor.violations
        );
        println!(
            "  cor ⇒ res at κ = {:.4}: {} violations;  res∧cor-obj ⇒ res-obj at η = {:.4}: {} violations",
            rep.leg_cor_to_res.derived_constant,
            rep.leg_cor_to_res.violations,
            rep.leg_res_to_resobj.derived_constant,
            rep.leg_res_to_resobj.violations
        );
        println!(
            "  reverse leg (global): obj at α = η̂²/2 = {:.4} — raw {:?}, within estimate tolerance: {}\n",
            rep.reverse_alpha, rep.reverse_check.verdict, rep.reverse_consistent
        );
    }
    Ok(())
}
