//! Checking and estimating the abstract error-bound conditions.
//!
//! Six conditions relate four optimality measures — the point error
//! `d(x, crit φ)`, the objective error `φ(x) − min φ`, the residual error
//! `‖G_φ(x)‖`, and the least correlated error
//! `inf_{x_p} ⟨G_φ(x), x − x_p⟩`:
//!
//! | condition    | inequality                                   |
//! |--------------|----------------------------------------------|
//! | res-eb       | `‖G(x)‖ ≥ κ·d(x)`                            |
//! | cor-eb       | `⟨G(x), x−x_p⟩ ≥ ν·d²(x)`                    |
//! | obj-eb       | `φ(x) − min φ ≥ (α/2)·d²(x)`                 |
//! | res-obj-eb   | `‖G(x)‖ ≥ η·√(φ(x) − min φ)`                 |
//! | cor-res-eb   | `⟨G(x), x−x_p⟩ ≥ β·‖G(x)‖²`                  |
//! | cor-obj-eb   | `⟨G(x), x−x_p⟩ ≥ ω·(φ(x) − min φ)`           |
//!
//! Checks evaluate the defining inequality on a seeded sample of a sublevel
//! region (tolerance 1e-8 absolute on the slack); estimators return the
//! empirical infimum of the defining ratio. The implication chain
//! obj ⇒ cor ⇒ res ⇒ res-obj is asserted pointwise on the sample set with
//! the constant-transfer rules `ν = αω/2`, `κ = ν`, `η = √(κω)`, and the
//! reverse leg `α = η²/2` is checked as an empirical consequence only.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::composite::CompositeSpec;
use crate::error::{Error, Result};
use crate::model::{ObjectiveModel, Point};
use crate::residual::ResidualOp;
use crate::sample::{draw_samples, SamplePlan};

/// Absolute tolerance on inequality slack.
pub const SLACK_TOL: f64 = 1e-8;
/// Relative tolerance on constant estimates.
pub const ESTIMATE_RTOL: f64 = 0.05;
/// Floating-point headroom for the pointwise implication legs; these are
/// exact algebra, the guard only absorbs rounding of dot products versus
/// norm products.
const FP_GUARD: f64 = 1e-12;
/// Samples closer to the critical set than this are excluded from ratio
/// estimation.
const CRITICAL_FILTER: f64 = 1e-8;
/// Denominators below this do not produce ratios.
const DENOM_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EBConditionKind {
    #[serde(rename = "res-eb")]
    ResEB,
    #[serde(rename = "cor-eb")]
    CorEB,
    #[serde(rename = "obj-eb")]
    ObjEB,
    #[serde(rename = "res-obj-eb")]
    ResObjEB,
    #[serde(rename = "cor-res-eb")]
    CorResEB,
    #[serde(rename = "cor-obj-eb")]
    CorObjEB,
}

impl std::fmt::Display for EBConditionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EBConditionKind::ResEB => "res-eb",
            EBConditionKind::CorEB => "cor-eb",
            EBConditionKind::ObjEB => "obj-eb",
            EBConditionKind::ResObjEB => "res-obj-eb",
            EBConditionKind::CorResEB => "cor-res-eb",
            EBConditionKind::CorObjEB => "cor-obj-eb",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for EBConditionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "res-eb" => Ok(EBConditionKind::ResEB),
            "cor-eb" => Ok(EBConditionKind::CorEB),
            "obj-eb" => Ok(EBConditionKind::ObjEB),
            "res-obj-eb" => Ok(EBConditionKind::ResObjEB),
            "cor-res-eb" => Ok(EBConditionKind::CorResEB),
            "cor-obj-eb" => Ok(EBConditionKind::CorObjEB),
            other => Err(Error::InvalidParameter(format!(
                "unknown condition `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Outcome of one condition check on one sample set.
#[derive(Clone, Debug, Serialize)]
pub struct EBCheckReport {
    pub kind: EBConditionKind,
    pub operator: String,
    pub claimed_constant: f64,
    pub verdict: Verdict,
    /// Empirical infimum of the condition's defining ratio; `None` when no
    /// sample had a usable denominator.
    pub worst_ratio: Option<f64>,
    pub witness: Vec<f64>,
    pub samples_used: usize,
    pub samples_skipped: usize,
    pub seed: u64,
}

/// Cached per-sample quantities; every condition reads from these.
struct Measurement {
    x: Point,
    dist: f64,
    dist_sq: f64,
    gap: f64,
    resid_norm: f64,
    /// `inf_{x_p ∈ P(x)} ⟨G(x), x − x_p⟩` over all projection witnesses.
    correlated: f64,
}

fn measure(model: &ObjectiveModel, op: &ResidualOp, x: &Point) -> Result<Option<Measurement>> {
    let g = match model.residual(op, x) {
        Ok(g) => g,
        Err(Error::OutsideDomain { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let dist = model.distance_to_critical(x);
    // Negative gaps can only be floating-point noise (or reference-solve
    // tolerance); clamp for the square-root measures.
    let gap = model.gap(x).max(0.0);
    let correlated = model
        .critical_projections(x)
        .iter()
        .map(|p| g.dot(&(x - p)))
        .fold(f64::INFINITY, f64::min);
    Ok(Some(Measurement {
        x: x.clone(),
        dist,
        dist_sq: dist * dist,
        gap,
        resid_norm: g.norm(),
        correlated,
    }))
}

fn collect_measurements(
    model: &ObjectiveModel,
    op: &ResidualOp,
    plan: &SamplePlan,
) -> Result<(Vec<Measurement>, usize)> {
    let samples = draw_samples(model, plan, &|_x| true)?;
    let results: Vec<Result<Option<Measurement>>> = samples
        .points
        .par_iter()
        .map(|x| measure(model, op, x))
        .collect();
    let mut out = Vec::with_capacity(results.len());
    let mut skipped = 0usize;
    for r in results {
        match r? {
            Some(m) => out.push(m),
            None => skipped += 1,
        }
    }
    if out.is_empty() {
        return Err(Error::EmptySampleSet {
            rejected: samples.rejected + skipped,
        });
    }
    Ok((out, skipped))
}

/// Left-hand side and the constant's multiplier for a condition at one
/// sample, oriented so the condition reads `lhs ≥ constant · meas`.
fn lhs_meas(kind: EBConditionKind, m: &Measurement) -> (f64, f64) {
    match kind {
        EBConditionKind::ResEB => (m.resid_norm, m.dist),
        EBConditionKind::CorEB => (m.correlated, m.dist_sq),
        EBConditionKind::ObjEB => (m.gap, 0.5 * m.dist_sq),
        EBConditionKind::ResObjEB => (m.resid_norm, m.gap.sqrt()),
        EBConditionKind::CorResEB => (m.correlated, m.resid_norm * m.resid_norm),
        EBConditionKind::CorObjEB => (m.correlated, m.gap),
    }
}

fn ratio_scan(kind: EBConditionKind, ms: &[Measurement]) -> (Option<(f64, usize)>, usize) {
    let mut best: Option<(f64, usize)> = None;
    let mut usable = 0usize;
    for (i, m) in ms.iter().enumerate() {
        let (lhs, meas) = lhs_meas(kind, m);
        if meas > DENOM_FLOOR {
            usable += 1;
            let r = lhs / meas;
            if best.is_none_or(|(b, _)| r < b) {
                best = Some((r, i));
            }
        }
    }
    (best, usable)
}

/// Checks one condition at a claimed constant on a seeded sample set.
///
/// Pass iff `lhs − constant·meas ≥ −1e-8` at every sample.
pub fn check_condition(
    model: &ObjectiveModel,
    op: &ResidualOp,
    kind: EBConditionKind,
    constant: f64,
    plan: &SamplePlan,
) -> Result<EBCheckReport> {
    if !(constant > 0.0) {
        return Err(Error::InvalidParameter(
            "claimed constant must be positive".into(),
        ));
    }
    let (ms, skipped) = collect_measurements(model, op, plan)?;
    Ok(check_on_measurements(
        &ms, skipped, op, kind, constant, plan.seed,
    ))
}

fn check_on_measurements(
    ms: &[Measurement],
    skipped: usize,
    op: &ResidualOp,
    kind: EBConditionKind,
    constant: f64,
    seed: u64,
) -> EBCheckReport {
    let mut verdict = Verdict::Pass;
    let mut witness_idx: Option<usize> = None;
    let mut worst_slack = f64::INFINITY;
    for (i, m) in ms.iter().enumerate() {
        let (lhs, meas) = lhs_meas(kind, m);
        let slack = lhs - constant * meas;
        if slack < worst_slack {
            worst_slack = slack;
            witness_idx = Some(i);
        }
        if slack < -SLACK_TOL {
            verdict = Verdict::Fail;
        }
    }
    let (best_ratio, _) = ratio_scan(kind, ms);
    // Prefer the minimum-ratio sample as witness; fall back to worst slack.
    let witness_idx = best_ratio.map(|(_, i)| i).or(witness_idx).unwrap_or(0);
    EBCheckReport {
        kind,
        operator: op.to_string(),
        claimed_constant: constant,
        verdict,
        worst_ratio: best_ratio.map(|(r, _)| r),
        witness: ms[witness_idx].x.iter().copied().collect(),
        samples_used: ms.len(),
        samples_skipped: skipped,
        seed,
    }
}

/// Empirical best constant: the infimum of the condition's defining ratio
/// over samples at least `1e-8` away from the critical set.
pub fn estimate_constant(
    model: &ObjectiveModel,
    op: &ResidualOp,
    kind: EBConditionKind,
    plan: &SamplePlan,
) -> Result<f64> {
    let (ms, _) = collect_measurements(model, op, plan)?;
    estimate_on_measurements(&ms, kind)
}

fn estimate_on_measurements(ms: &[Measurement], kind: EBConditionKind) -> Result<f64> {
    let away: Vec<&Measurement> = ms.iter().filter(|m| m.dist > CRITICAL_FILTER).collect();
    let mut best: Option<f64> = None;
    for m in &away {
        let (lhs, meas) = lhs_meas(kind, m);
        if meas > DENOM_FLOOR {
            let r = lhs / meas;
            best = Some(best.map_or(r, |b: f64| b.min(r)));
        }
    }
    best.ok_or(Error::EmptySampleSet { rejected: ms.len() })
}

/// One-row-per-sample CSV of the measured quantities and the condition's
/// defining ratio (empty ratio column where the denominator vanishes).
pub fn sample_csv(
    model: &ObjectiveModel,
    op: &ResidualOp,
    kind: EBConditionKind,
    plan: &SamplePlan,
) -> Result<String> {
    use crate::format::g17;
    let (ms, _) = collect_measurements(model, op, plan)?;
    let dim = model.dim;
    let mut out = String::from("i");
    for j in 0..dim {
        out.push_str(&format!(",x_{j}"));
    }
    out.push_str(",dist,gap,resid,correlated,ratio\n");
    for (i, m) in ms.iter().enumerate() {
        out.push_str(&i.to_string());
        for v in m.x.iter() {
            out.push(',');
            out.push_str(&g17(*v));
        }
        let (lhs, meas) = lhs_meas(kind, m);
        out.push_str(&format!(
            ",{},{},{},{},",
            g17(m.dist),
            g17(m.gap),
            g17(m.resid_norm),
            g17(m.correlated)
        ));
        if meas > DENOM_FLOOR {
            out.push_str(&g17(lhs / meas));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Constants derived by the implication chain from whichever sources are
/// available: `ν = αω/2`, `κ = ν`, `η = √(κω)`, and the reverse
/// `α = η²/2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DerivedConstants {
    pub nu: Option<f64>,
    pub kappa: Option<f64>,
    pub eta: Option<f64>,
    pub alpha_back: Option<f64>,
}

pub fn implication_constants(
    alpha: Option<f64>,
    omega: f64,
    kappa: Option<f64>,
    eta: Option<f64>,
) -> Result<DerivedConstants> {
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter("omega must be positive".into()));
    }
    for (name, v) in [("alpha", alpha), ("kappa", kappa), ("eta", eta)] {
        if let Some(v) = v {
            if !(v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
    }
    if alpha.is_none() && kappa.is_none() && eta.is_none() {
        return Err(Error::InvalidParameter(
            "at least one source constant required".into(),
        ));
    }
    let nu = alpha.map(|a| a * omega / 2.0);
    let kappa_out = nu.or(kappa);
    let eta_out = kappa_out.map(|k| (k * omega).sqrt()).or(eta);
    let alpha_back = eta.or(eta_out).map(|e| 0.5 * e * e);
    Ok(DerivedConstants {
        nu,
        kappa: kappa_out,
        eta: eta_out,
        alpha_back,
    })
}

/// One pointwise implication leg: among samples satisfying the premise,
/// how many violate the conclusion. Violations are counted past a pure
/// floating-point guard; the algebra itself carries no tolerance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LegReport {
    pub derived_constant: f64,
    pub premise_holds: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub operator: String,
    pub alpha_hat: f64,
    pub omega_hat: f64,
    pub eta_hat: f64,
    /// obj-eb(α̂) ∧ cor-obj-eb(ω̂) ⇒ cor-eb(α̂ω̂/2)
    pub leg_obj_to_cor: LegReport,
    /// cor-eb(ν) ⇒ res-eb(ν)
    pub leg_cor_to_res: LegReport,
    /// res-eb(κ) ∧ cor-obj-eb(ω̂) ⇒ res-obj-eb(√(κω̂))
    pub leg_res_to_resobj: LegReport,
    /// The reverse (flow-based) leg tested as an empirical consequence:
    /// obj-eb at `α = η̂²/2` on the same samples.
    pub reverse_alpha: f64,
    pub reverse_check: EBCheckReport,
    /// `α̂ ≥ (1 − 5%)·η̂²/2`: the estimated constant dominates the derived
    /// one up to estimation tolerance.
    pub reverse_consistent: bool,
    pub samples_used: usize,
    pub seed: u64,
}

impl ChainReport {
    pub fn pointwise_legs_pass(&self) -> bool {
        self.leg_obj_to_cor.violations == 0
            && self.leg_cor_to_res.violations == 0
            && self.leg_res_to_resobj.violations == 0
    }
}

/// Verifies the implication chain on a sample set.
///
/// The three forward legs are pointwise algebra and are evaluated in an
/// association order that makes them exact under IEEE rounding; the reverse
/// leg is a global theorem and is reported separately.
pub fn verify_implication_chain(
    model: &ObjectiveModel,
    op: &ResidualOp,
    plan: &SamplePlan,
) -> Result<ChainReport> {
    let (ms, skipped) = collect_measurements(model, op, plan)?;
    let alpha_hat = estimate_on_measurements(&ms, EBConditionKind::ObjEB)?;
    let omega_hat = estimate_on_measurements(&ms, EBConditionKind::CorObjEB)?;
    let eta_hat = estimate_on_measurements(&ms, EBConditionKind::ResObjEB)?;

    let nu = alpha_hat * omega_hat / 2.0;
    let kappa = nu;
    let eta_derived = (kappa * omega_hat).sqrt();

    let mut leg1 = LegReport {
        derived_constant: nu,
        premise_holds: 0,
        violations: 0,
    };
    let mut leg2 = LegReport {
        derived_constant: kappa,
        premise_holds: 0,
        violations: 0,
    };
    let mut leg3 = LegReport {
        derived_constant: eta_derived,
        premise_holds: 0,
        violations: 0,
    };

    for m in &ms {
        // Shared right-hand sides, associated exactly as in the proofs so
        // that premise ⇒ conclusion survives rounding.
        let rhs_obj = (alpha_hat * 0.5) * m.dist_sq; // (α̂/2)·d²
        let rhs_cor_obj = omega_hat * m.gap; // ω̂·gap
        let rhs_cor = omega_hat * rhs_obj; // ω̂·(α̂/2)·d² = ν·d²
        let guard = |scale: f64| FP_GUARD * scale.abs().max(1.0);

        // Leg 1: obj-eb(α̂) ∧ cor-obj-eb(ω̂) ⇒ cor-eb(ν).
        if m.gap >= rhs_obj && m.correlated >= rhs_cor_obj {
            leg1.premise_holds += 1;
            if m.correlated < rhs_cor {
                leg1.violations += 1;
            }
        }

        // Leg 2: cor-eb(ν) ⇒ res-eb(ν), by Cauchy–Schwarz:
        // ν·d² ≤ ⟨G, x−x_p⟩ ≤ ‖G‖·d.
        if m.correlated >= rhs_cor {
            leg2.premise_holds += 1;
            let norm_prod = m.resid_norm * m.dist;
            if norm_prod < rhs_cor - guard(rhs_cor) {
                leg2.violations += 1;
            }
        }

        // Leg 3: res-eb(κ) ∧ cor-obj-eb(ω̂) ⇒ res-obj-eb(√(κω̂)), i.e.
        // ‖G‖² ≥ κ·ω̂·gap.
        let res_premise = m.resid_norm * m.dist >= rhs_cor - guard(rhs_cor);
        if res_premise && m.correlated >= rhs_cor_obj {
            leg3.premise_holds += 1;
            let lhs = m.resid_norm * m.resid_norm;
            let rhs = kappa * rhs_cor_obj;
            if lhs < rhs - guard(rhs) {
                leg3.violations += 1;
            }
        }
    }

    let reverse_alpha = 0.5 * eta_hat * eta_hat;
    let reverse_check = check_on_measurements(
        &ms,
        skipped,
        op,
        EBConditionKind::ObjEB,
        reverse_alpha,
        plan.seed,
    );
    let reverse_consistent = alpha_hat >= reverse_alpha * (1.0 - ESTIMATE_RTOL);

    Ok(ChainReport {
        operator: op.to_string(),
        alpha_hat,
        omega_hat,
        eta_hat,
        leg_obj_to_cor: leg1,
        leg_cor_to_res: leg2,
        leg_res_to_resobj: leg3,
        reverse_alpha,
        reverse_check,
        reverse_consistent,
        samples_used: ms.len(),
        seed: plan.seed,
    })
}

/// Report for the forward-step decrease bound `‖R_t(x)‖² ≥ ε(φ(x) − φ(x⁺))`.
#[derive(Clone, Debug, Serialize)]
pub struct Assum2Report {
    pub t: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    pub worst_slack: f64,
    pub witness: Vec<f64>,
    /// The correlated-objective constant `ω = tε/2` this bound certifies.
    pub implied_omega: f64,
    pub samples_used: usize,
    pub seed: u64,
}

pub fn check_assum2(
    model: &ObjectiveModel,
    t: f64,
    epsilon: f64,
    plan: &SamplePlan,
) -> Result<Assum2Report> {
    let l = model.smooth.lipschitz;
    if !(t > 0.0) || t > (1.0 / l) * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "t must lie in (0, 1/L] = (0, {}]",
            1.0 / l
        )));
    }
    if !(epsilon > 0.0) || epsilon > 2.0 / t {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 2/t] = (0, {}]",
            2.0 / t
        )));
    }
    let samples = draw_samples(model, plan, &|_| true)?;
    let slacks: Vec<(f64, &Point)> = samples
        .points
        .par_iter()
        .map(|x| {
            let grad = model.gradient(x);
            let forward = x - grad * t;
            let xplus = model.prox_simple(&forward, t);
            let r = (x - &xplus).unscale(t);
            let slack = r.norm_squared() - epsilon * (model.value(x) - model.value(&xplus));
            (slack, x)
        })
        .collect();
    let (worst_slack, witness) = slacks.iter().fold((f64::INFINITY, None), |acc, (s, x)| {
        if *s < acc.0 {
            (*s, Some(*x))
        } else {
            acc
        }
    });
    let verdict = if worst_slack >= -SLACK_TOL {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(Assum2Report {
        t,
        epsilon,
        verdict,
        worst_slack,
        witness: witness
            .map(|x| x.iter().copied().collect())
            .unwrap_or_default(),
        implied_omega: t * epsilon / 2.0,
        samples_used: samples.points.len(),
        seed: plan.seed,
    })
}

/// Report for the composite error-bound inequality over a pair grid.
#[derive(Clone, Debug, Serialize)]
pub struct CompositeEbReport {
    pub mu: f64,
    pub l: f64,
    pub verdict: Verdict,
    pub worst_slack: f64,
    pub witness_x: Vec<f64>,
    pub witness_y: Vec<f64>,
    pub pairs_checked: usize,
}

/// Slack of the composite inequality at one pair:
/// `⟨G(y), y−x⟩ − [φ(p(y)) − φ(x) + ‖G(y)‖²/(2L) + (μ/2)‖x−y‖²]`.
fn composite_slack(spec: &CompositeSpec, mu: f64, l: f64, x: &Point, y: &Point) -> Result<f64> {
    let p = spec.prox_linearized(l, y)?;
    let g = (y - &p).scale(l);
    let lhs = g.dot(&(y - x));
    let rhs = spec.value(&p) - spec.value(x)
        + g.norm_squared() / (2.0 * l)
        + 0.5 * mu * (x - y).norm_squared();
    Ok(lhs - rhs)
}

/// Evaluates `⟨G(y), y−x⟩ ≥ φ(p(y)) − φ(x) + ‖G(y)‖²/(2L) + (μ/2)‖x−y‖²`
/// over the given pairs; pass iff no violation exceeds 1e-8.
pub fn check_composite_eb(
    spec: &CompositeSpec,
    mu: f64,
    l: f64,
    pairs: &[(Point, Point)],
) -> Result<CompositeEbReport> {
    if !(mu > 0.0 && mu < l) {
        return Err(Error::InvalidParameter(
            "composite constants require 0 < mu < L".into(),
        ));
    }
    if pairs.is_empty() {
        return Err(Error::EmptySampleSet { rejected: 0 });
    }
    let slacks: Vec<f64> = pairs
        .par_iter()
        .map(|(x, y)| composite_slack(spec, mu, l, x, y))
        .collect::<Result<Vec<f64>>>()?;
    let mut worst = f64::INFINITY;
    let mut widx = 0usize;
    for (i, s) in slacks.iter().enumerate() {
        if *s < worst {
            worst = *s;
            widx = i;
        }
    }
    Ok(CompositeEbReport {
        mu,
        l,
        verdict: if worst >= -SLACK_TOL {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        worst_slack: worst,
        witness_x: pairs[widx].0.iter().copied().collect(),
        witness_y: pairs[widx].1.iter().copied().collect(),
        pairs_checked: pairs.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Rel1FailureEntry {
    pub mu: f64,
    pub violated: bool,
    pub worst_slack: f64,
    pub witness_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rel1FailureReport {
    pub direction: Vec<f64>,
    pub entries: Vec<Rel1FailureEntry>,
    pub all_violated: bool,
}

/// For `e(x) = ½(aᵀx)²` the smooth composite inequality reduces to
/// `½(aᵀx − aᵀy)² ≥ (μ/2)‖x−y‖²`, which fails along any direction
/// orthogonal to `a` for every positive `μ`. Confirms the violation on
/// pairs `y = x + s·h`, `h ⊥ a`.
pub fn check_rel1_failure_quadratic(
    a: &DVector<f64>,
    mus: &[f64],
    scales: &[f64],
) -> Result<Rel1FailureReport> {
    if a.len() < 2 {
        return Err(Error::InvalidParameter(
            "a one-dimensional problem has no orthogonal direction".into(),
        ));
    }
    if a.norm() == 0.0 {
        return Err(Error::InvalidParameter(
            "direction a must be nonzero".into(),
        ));
    }
    let spec = crate::problems::make_rank_one_quadratic_composite(a.clone())?;
    let l = a.norm_squared();
    // Gram–Schmidt against the basis vector least aligned with a.
    let mut idx = 0;
    for i in 1..a.len() {
        if a[i].abs() < a[idx].abs() {
            idx = i;
        }
    }
    let mut h = DVector::zeros(a.len());
    h[idx] = 1.0;
    h -= a.scale(a[idx] / a.norm_squared());
    h = h.unscale(h.norm());

    let x0 = Point::zeros(a.len());
    let mut entries = Vec::with_capacity(mus.len());
    for &mu in mus {
        if !(mu > 0.0) {
            return Err(Error::InvalidParameter("each mu must be positive".into()));
        }
        // The reduced inequality is quantified over all μ > 0, so no μ < L
        // restriction applies here; the slack is evaluated directly.
        let mut worst = f64::INFINITY;
        let mut witness_scale = 0.0;
        for &s in scales {
            let y = &x0 + h.scale(s);
            let slack = composite_slack(&spec, mu, l, &x0, &y)?;
            if slack < worst {
                worst = slack;
                witness_scale = s;
            }
        }
        entries.push(Rel1FailureEntry {
            mu,
            violated: worst < -SLACK_TOL,
            worst_slack: worst,
            witness_scale,
        });
    }
    let all_violated = entries.iter().all(|e| e.violated);
    Ok(Rel1FailureReport {
        direction: h.iter().copied().collect(),
        entries,
        all_violated,
    })
}

/// Report for the two-term gradient correlation bound
/// `⟨∇f(x), x−x_p⟩ ≥ c_dist·d²(x) + c_grad·‖∇f(x)‖²`.
#[derive(Clone, Debug, Serialize)]
pub struct BasicConditionReport {
    pub c_dist: f64,
    pub c_grad: f64,
    pub verdict: Verdict,
    pub worst_slack: f64,
    pub witness: Vec<f64>,
    pub samples_used: usize,
    pub seed: u64,
}

pub fn check_basic_condition(
    model: &ObjectiveModel,
    c_dist: f64,
    c_grad: f64,
    plan: &SamplePlan,
) -> Result<BasicConditionReport> {
    let (ms, _) = collect_measurements(model, &ResidualOp::Gradient, plan)?;
    let mut worst = f64::INFINITY;
    let mut widx = 0usize;
    for (i, m) in ms.iter().enumerate() {
        let slack = m.correlated - c_dist * m.dist_sq - c_grad * m.resid_norm * m.resid_norm;
        if slack < worst {
            worst = slack;
            widx = i;
        }
    }
    Ok(BasicConditionReport {
        c_dist,
        c_grad,
        verdict: if worst >= -SLACK_TOL {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        worst_slack: worst,
        witness: ms[widx].x.iter().copied().collect(),
        samples_used: ms.len(),
        seed: plan.seed,
    })
}
