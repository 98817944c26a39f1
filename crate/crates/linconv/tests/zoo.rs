//! The shipped zoo reproduces its documented constants, and the
//! least-squares family records a solver-confirmed zero minimum.

use linconv::eb::estimate_constant;
use linconv::problems::shipped_zoo;
use linconv::solvers::{fbs, SolverConfig};
use linconv::{Point, SamplePlan};

#[test]
fn expected_constants_reproduced_within_five_percent() {
    for (spec, expectations) in shipped_zoo() {
        let model = spec.build_model().unwrap();
        for exp in expectations {
            let plan = SamplePlan::gaussian(exp.region_r, 2000, 42);
            let estimate = estimate_constant(&model, &exp.operator, exp.condition, &plan).unwrap();
            let rel = (estimate - exp.value).abs() / exp.value;
            assert!(
                rel <= 0.05,
                "{} / {} / {}: estimated {estimate}, documented {} ({}), off by {:.2}%",
                spec.name,
                exp.condition,
                exp.operator,
                exp.value,
                exp.note,
                100.0 * rel
            );
        }
    }
}

#[test]
fn least_squares_family_minimum_is_zero_by_solver() {
    // b ∈ range(A) means the recorded minimum is 0; a forward-backward
    // run confirms it to 1e-10.
    let specs = [
        r#"{"name":"ls","constructor":"rank_deficient_least_squares","params":{"a":[[1.0,1.0]],"b":[1.0]}}"#,
        r#"{"name":"palm","constructor":"palm","params":{"a":[[1.0,1.0]],"b":[1.0],"block_sizes":[1,1],"g_kinds":[{"kind":"zero"},{"kind":"zero"}]}}"#,
    ];
    for text in specs {
        let spec = linconv::problems::ProblemSpec::from_json(text).unwrap();
        let model = spec.build_model().unwrap();
        assert_eq!(model.min_value(), 0.0);
        let t = 1.0 / model.smooth.lipschitz;
        let cfg = SolverConfig::new(Point::from_element(model.dim, 2.0)).with_max_iter(10_000);
        let trace = fbs(&model, t, &cfg).unwrap();
        let value = model.value(&trace.last_x());
        assert!(
            value.abs() <= 1e-10,
            "{}: solver minimum {value}",
            spec.name
        );
    }
}

#[test]
fn min_value_matches_represented_critical_points() {
    for (spec, _) in shipped_zoo() {
        let model = spec.build_model().unwrap();
        let representative = model.critical.representative();
        let at_rep = model.value(&representative);
        assert!(
            (at_rep - model.min_value()).abs() <= 1e-9 * (1.0 + model.min_value().abs()),
            "{}: φ(repr) = {at_rep} vs recorded {}",
            spec.name,
            model.min_value()
        );
    }
}
