//! Property-based invariants over the core operations.

use linconv::eb::{check_condition, estimate_constant, EBConditionKind, Verdict};
use linconv::model::{soft_threshold, CoordPenalty};
use linconv::problems::{make_lasso, make_strongly_convex_quadratic};
use linconv::solvers::{abstract_gradient, fbs, gradient_descent, SolverConfig};
use linconv::{ObjectiveModel, ResidualOp, SamplePlan};
use nalgebra::{dvector, DMatrix};
use proptest::prelude::*;

fn diag14() -> ObjectiveModel {
    make_strongly_convex_quadratic(
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]),
        dvector![0.0, 0.0],
    )
    .unwrap()
}

fn penalty_strategy() -> impl Strategy<Value = CoordPenalty> {
    (0.0..3.0f64, -4.0..0.0f64, 0.0..4.0f64, any::<bool>()).prop_map(|(w, lo, hi, boxed)| {
        if boxed {
            CoordPenalty::l1_boxed(w, lo, hi)
        } else {
            CoordPenalty::l1(w)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The prox output satisfies the subgradient optimality certificate
    /// (v − p)/t ∈ ∂g(p), and is firmly inside the domain.
    #[test]
    fn prox_optimality_certificate(
        pen in penalty_strategy(),
        v in -10.0..10.0f64,
        t in 1e-3..5.0f64,
    ) {
        let p = pen.prox(v, t);
        prop_assert!(p >= pen.lower && p <= pen.upper);
        let (lo, hi) = pen.subgradient_interval(p).expect("prox output is in dom g");
        let slope = (v - p) / t;
        prop_assert!(slope >= lo - 1e-9 && slope <= hi + 1e-9,
            "slope {slope} outside [{lo}, {hi}] at p = {p}");
    }

    #[test]
    fn soft_threshold_shrinks(v in -50.0..50.0f64, w in 0.0..10.0f64) {
        let s = soft_threshold(v, w);
        prop_assert!(s.abs() <= v.abs());
        prop_assert!(s == 0.0 || s.signum() == v.signum());
        prop_assert!((v - s).abs() <= w + 1e-12);
    }

    /// Proximal maps are nonexpansive.
    #[test]
    fn prox_nonexpansive(
        pen in penalty_strategy(),
        a in -10.0..10.0f64,
        b in -10.0..10.0f64,
        t in 1e-3..5.0f64,
    ) {
        let pa = pen.prox(a, t);
        let pb = pen.prox(b, t);
        prop_assert!((pa - pb).abs() <= (a - b).abs() + 1e-12);
    }

    /// A pass at constant c implies a pass at every smaller constant.
    #[test]
    fn check_monotone_in_constant(seed in 0u64..50, frac in 0.05..1.0f64) {
        let m = diag14();
        let plan = SamplePlan::gaussian(1.0, 100, seed);
        let c_hi = 1.0; // λ_min: passes
        let c_lo = frac * c_hi;
        let hi = check_condition(&m, &ResidualOp::Gradient, EBConditionKind::CorEB, c_hi, &plan)
            .unwrap();
        let lo = check_condition(&m, &ResidualOp::Gradient, EBConditionKind::CorEB, c_lo, &plan)
            .unwrap();
        prop_assert_eq!(hi.verdict, Verdict::Pass);
        prop_assert_eq!(lo.verdict, Verdict::Pass);
    }

    /// The estimator returns a constant at which the check passes on the
    /// same plan.
    #[test]
    fn estimate_then_check_consistent(seed in 0u64..30) {
        let m = diag14();
        let plan = SamplePlan::gaussian(1.0, 200, seed);
        for kind in [EBConditionKind::ResEB, EBConditionKind::ObjEB, EBConditionKind::ResObjEB] {
            let c = estimate_constant(&m, &ResidualOp::Gradient, kind, &plan).unwrap();
            prop_assert!(c > 0.0);
            let rep = check_condition(&m, &ResidualOp::Gradient, kind, c, &plan).unwrap();
            prop_assert_eq!(rep.verdict, Verdict::Pass);
        }
    }

    /// Identical plans give bit-identical serialized reports.
    #[test]
    fn reports_deterministic(seed in 0u64..50) {
        let m = diag14();
        let plan = SamplePlan::gaussian(1.0, 150, seed);
        let a = check_condition(&m, &ResidualOp::Gradient, EBConditionKind::ResEB, 0.9, &plan)
            .unwrap();
        let b = check_condition(&m, &ResidualOp::Gradient, EBConditionKind::ResEB, 0.9, &plan)
            .unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    /// The abstract method with the gradient operator reproduces gradient
    /// descent bitwise for any admissible step.
    #[test]
    fn specialization_identity_random_step(
        h in 0.01..0.49f64,
        x0 in -3.0..3.0f64,
        x1 in -3.0..3.0f64,
    ) {
        let m = diag14();
        let cfg = SolverConfig::new(dvector![x0, x1]).with_max_iter(25);
        let a = abstract_gradient(&m, &ResidualOp::Gradient, h, &cfg).unwrap();
        let g = gradient_descent(&m, h, &cfg).unwrap();
        prop_assert_eq!(a.rows.len(), g.rows.len());
        for (ra, rg) in a.rows.iter().zip(&g.rows) {
            prop_assert_eq!(&ra.x, &rg.x);
            prop_assert!(ra.resid == rg.resid && ra.gap == rg.gap && ra.dist == rg.dist);
        }
    }

    /// Monotone descent of the objective gap for the descent methods on
    /// convex problems.
    #[test]
    fn monotone_descent_gap(x0 in -2.0..2.0f64, x1 in -2.0..2.0f64) {
        let m = diag14();
        let cfg = SolverConfig::new(dvector![x0, x1]).with_max_iter(50);
        let trace = gradient_descent(&m, 0.25, &cfg).unwrap();
        for w in trace.rows.windows(2) {
            prop_assert!(w[1].gap <= w[0].gap + 1e-12);
        }
        let lasso = make_lasso(DMatrix::identity(2, 2), dvector![2.0, 0.0], 1.0).unwrap();
        let trace = fbs(&lasso, 1.0, &cfg).unwrap();
        for w in trace.rows.windows(2) {
            prop_assert!(w[1].gap <= w[0].gap + 1e-12);
        }
    }

    /// Gaps along any trace stay (numerically) nonnegative.
    #[test]
    fn gaps_nonnegative(x0 in -3.0..3.0f64, x1 in -3.0..3.0f64, h in 0.01..0.49f64) {
        let m = diag14();
        let cfg = SolverConfig::new(dvector![x0, x1]).with_max_iter(60);
        let trace = gradient_descent(&m, h, &cfg).unwrap();
        for row in &trace.rows {
            prop_assert!(row.gap >= -1e-10);
        }
    }

    /// The 17-significant-digit formatting round-trips every f64.
    #[test]
    fn g17_round_trips(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let s = linconv::format::g17(x);
        let back: f64 = s.parse().unwrap();
        prop_assert_eq!(back, x, "{}", s);
    }

    /// Drawn samples always lie in the requested sublevel region.
    #[test]
    fn samples_in_region(seed in 0u64..40, r in 0.2..4.0f64) {
        let m = diag14();
        let plan = SamplePlan::gaussian(r, 80, seed);
        let s = linconv::sample::draw_samples(&m, &plan, &|_| true).unwrap();
        for x in &s.points {
            prop_assert!(m.value(x) <= m.min_value() + r + 1e-12);
        }
    }

    /// Moreau envelope never exceeds the objective and shares its minimum.
    #[test]
    fn moreau_envelope_below_objective(x in -5.0..5.0f64, lambda in 0.1..3.0f64) {
        let m = make_strongly_convex_quadratic(DMatrix::from_element(1, 1, 1.0), dvector![0.0])
            .unwrap();
        let p = dvector![x];
        let env = m.moreau_envelope(lambda, &p).unwrap();
        prop_assert!(env <= m.value(&p) + 1e-12);
        prop_assert!(env >= m.min_value() - 1e-12);
    }
}
