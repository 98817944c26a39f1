//! Objective models, simple (prox-friendly) parts, and critical-set geometry.
//!
//! A model is a composite objective `φ = f + g` with a smooth part `f`
//! (value, gradient, gradient-Lipschitz modulus `L`) and a simple part `g`
//! that admits exact coordinatewise proximal maps. The critical set
//! `crit φ` is carried explicitly so that distances, projections, and
//! objective gaps are computable quantities rather than abstractions.
//!
//! All types are immutable after construction; every operation is a pure
//! function of its inputs and safe to call concurrently.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A point of `ℝⁿ`.
pub type Point = DVector<f64>;

pub type ValueFn = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&Point) -> DVector<f64> + Send + Sync>;
/// Proximal oracle `(x, t) ↦ prox_{t·}(x)`.
pub type ProxFn = Arc<dyn Fn(&Point, f64) -> Point + Send + Sync>;
pub type PredicateFn = Arc<dyn Fn(&Point) -> bool + Send + Sync>;

/// One coordinate of a separable simple part: `s ↦ w·|s| + δ_{[lower, upper]}(s)`.
///
/// `lower`/`upper` may be `-∞`/`+∞`; with `w = 0` and an unbounded interval
/// the coordinate contributes nothing.
#[derive(Clone, Copy, Debug)]
pub struct CoordPenalty {
    pub l1: f64,
    pub lower: f64,
    pub upper: f64,
}

impl CoordPenalty {
    pub fn free() -> Self {
        Self {
            l1: 0.0,
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn l1(weight: f64) -> Self {
        Self {
            l1: weight,
            ..Self::free()
        }
    }

    pub fn boxed(lower: f64, upper: f64) -> Self {
        Self {
            l1: 0.0,
            lower,
            upper,
        }
    }

    pub fn l1_boxed(weight: f64, lower: f64, upper: f64) -> Self {
        Self {
            l1: weight,
            lower,
            upper,
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        if s < self.lower || s > self.upper {
            f64::INFINITY
        } else {
            self.l1 * s.abs()
        }
    }

    /// `prox_{t·g_i}(v)`: soft-threshold by `t·w`, then clamp to the interval.
    ///
    /// Shrink-then-project is exact for `w|·| + δ_I` when `I` is an interval.
    pub fn prox(&self, v: f64, t: f64) -> f64 {
        let shrunk = soft_threshold(v, t * self.l1);
        shrunk.clamp(self.lower, self.upper)
    }

    /// Subdifferential `∂g_i(s)` as an interval, `None` outside `dom g_i`.
    pub fn subgradient_interval(&self, s: f64) -> Option<(f64, f64)> {
        if s < self.lower || s > self.upper {
            return None;
        }
        let (mut lo, mut hi) = if s > 0.0 {
            (self.l1, self.l1)
        } else if s < 0.0 {
            (-self.l1, -self.l1)
        } else {
            (-self.l1, self.l1)
        };
        // Normal cone of the interval.
        if s <= self.lower {
            lo = f64::NEG_INFINITY;
        }
        if s >= self.upper {
            hi = f64::INFINITY;
        }
        Some((lo, hi))
    }
}

pub fn soft_threshold(v: f64, w: f64) -> f64 {
    if v > w {
        v - w
    } else if v < -w {
        v + w
    } else {
        0.0
    }
}

/// The simple part `g` of a composite objective.
#[derive(Clone, Debug)]
pub enum SimplePart {
    /// `g ≡ 0`; the prox is the identity at every step size.
    Zero,
    /// Coordinatewise separable `g(x) = Σ_i g_i(x_i)`.
    Separable(Vec<CoordPenalty>),
}

impl SimplePart {
    pub fn uniform(dim: usize, coord: CoordPenalty) -> Self {
        SimplePart::Separable(vec![coord; dim])
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SimplePart::Zero)
    }

    pub fn value(&self, x: &Point) -> f64 {
        match self {
            SimplePart::Zero => 0.0,
            SimplePart::Separable(cs) => x.iter().zip(cs).map(|(&s, c)| c.value(s)).sum(),
        }
    }

    pub fn prox(&self, v: &Point, t: f64) -> Point {
        match self {
            SimplePart::Zero => v.clone(),
            SimplePart::Separable(cs) => {
                Point::from_iterator(v.len(), v.iter().zip(cs).map(|(&s, c)| c.prox(s, t)))
            }
        }
    }

    pub fn prox_coord(&self, i: usize, v: f64, t: f64) -> f64 {
        match self {
            SimplePart::Zero => v,
            SimplePart::Separable(cs) => cs[i].prox(v, t),
        }
    }

    pub fn subgradient_interval(&self, i: usize, s: f64) -> Option<(f64, f64)> {
        match self {
            SimplePart::Zero => Some((0.0, 0.0)),
            SimplePart::Separable(cs) => cs[i].subgradient_interval(s),
        }
    }
}

/// The smooth part `f`: value, gradient, and gradient-Lipschitz modulus.
#[derive(Clone)]
pub struct SmoothPart {
    pub value: ValueFn,
    pub gradient: GradientFn,
    pub lipschitz: f64,
}

impl SmoothPart {
    /// `f ≡ 0` with a nominal modulus of 1 (any positive modulus is valid).
    pub fn zero(dim: usize) -> Self {
        Self {
            value: Arc::new(|_x: &Point| 0.0),
            gradient: Arc::new(move |_x: &Point| DVector::zeros(dim)),
            lipschitz: 1.0,
        }
    }
}

/// One block of a block-structured problem (for the alternating solver).
#[derive(Clone, Copy, Debug)]
pub struct Block {
    pub offset: usize,
    pub len: usize,
    pub lipschitz: f64,
}

/// Geometry of `crit φ`.
#[derive(Clone, Debug)]
pub enum CriticalSet {
    /// `{x : M x = c}`. The pseudo-inverse of `M` is precomputed so that
    /// projections are exact even for rank-deficient `M`.
    Affine {
        matrix: DMatrix<f64>,
        rhs: DVector<f64>,
        pseudo_inverse: DMatrix<f64>,
    },
    SinglePoint {
        x_star: Point,
    },
    Finite {
        points: Vec<Point>,
    },
    /// A reference minimizer from a high-accuracy solve; distances are taken
    /// to this single point.
    NumericOracle {
        x_ref: Point,
        solve_tolerance: f64,
    },
}

impl CriticalSet {
    pub fn affine(matrix: DMatrix<f64>, rhs: DVector<f64>) -> Result<Self> {
        let svd = matrix.clone().svd(true, true);
        let pseudo_inverse = svd
            .pseudo_inverse(1e-12)
            .map_err(|e| Error::InvalidModel(format!("affine critical set: {e}")))?;
        Ok(CriticalSet::Affine {
            matrix,
            rhs,
            pseudo_inverse,
        })
    }
}

/// `crit φ` together with `min φ`.
#[derive(Clone, Debug)]
pub struct CriticalSetDescriptor {
    pub set: CriticalSet,
    pub min_value: f64,
}

impl CriticalSetDescriptor {
    pub fn single(x_star: Point, min_value: f64) -> Self {
        Self {
            set: CriticalSet::SinglePoint { x_star },
            min_value,
        }
    }

    /// Euclidean distance `d(x, crit φ)`.
    pub fn distance(&self, x: &Point) -> f64 {
        match &self.set {
            CriticalSet::Affine {
                matrix,
                rhs,
                pseudo_inverse,
            } => {
                let displacement = pseudo_inverse * (matrix * x - rhs);
                displacement.norm()
            }
            CriticalSet::SinglePoint { x_star } => (x - x_star).norm(),
            CriticalSet::Finite { points } => points
                .iter()
                .map(|p| (x - p).norm())
                .fold(f64::INFINITY, f64::min),
            CriticalSet::NumericOracle { x_ref, .. } => (x - x_ref).norm(),
        }
    }

    /// A nearest point of `crit φ`; finite-set ties break to the
    /// lexicographically smallest witness.
    pub fn project(&self, x: &Point) -> Point {
        match &self.set {
            CriticalSet::Affine {
                matrix,
                rhs,
                pseudo_inverse,
            } => x - pseudo_inverse * (matrix * x - rhs),
            CriticalSet::SinglePoint { x_star } => x_star.clone(),
            CriticalSet::Finite { points } => {
                let mut best: Option<(&Point, f64)> = None;
                for p in points {
                    let d = (x - p).norm();
                    best = match best {
                        None => Some((p, d)),
                        Some((bp, bd)) => {
                            if d < bd || (d == bd && lex_less(p, bp)) {
                                Some((p, d))
                            } else {
                                Some((bp, bd))
                            }
                        }
                    };
                }
                best.expect("finite critical set must be nonempty")
                    .0
                    .clone()
            }
            CriticalSet::NumericOracle { x_ref, .. } => x_ref.clone(),
        }
    }

    /// Every projection witness. Non-singleton only for finite sets with
    /// distance ties; conditions that take an infimum over the projection
    /// set must consider all of them.
    pub fn projections(&self, x: &Point) -> Vec<Point> {
        match &self.set {
            CriticalSet::Finite { points } => {
                let dmin = self.distance(x);
                let tol = 1e-12 * (1.0 + dmin);
                points
                    .iter()
                    .filter(|p| (x - *p).norm() <= dmin + tol)
                    .cloned()
                    .collect()
            }
            _ => vec![self.project(x)],
        }
    }

    /// A representative point of the set (anchor for sampling).
    pub fn representative(&self) -> Point {
        match &self.set {
            CriticalSet::Affine {
                matrix,
                rhs,
                pseudo_inverse,
            } => {
                // Projection of the origin.
                let zero = Point::zeros(matrix.ncols());
                &zero - pseudo_inverse * (matrix * &zero - rhs)
            }
            CriticalSet::SinglePoint { x_star } => x_star.clone(),
            CriticalSet::Finite { points } => {
                let mut best = &points[0];
                for p in &points[1..] {
                    if lex_less(p, best) {
                        best = p;
                    }
                }
                best.clone()
            }
            CriticalSet::NumericOracle { x_ref, .. } => x_ref.clone(),
        }
    }
}

fn lex_less(a: &Point, b: &Point) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// A sublevel region `{x : φ(x) ≤ min φ + r}`, with an optional extra
/// domain predicate.
#[derive(Clone)]
pub struct Region {
    pub level_offset: f64,
    pub predicate: Option<PredicateFn>,
}

impl Region {
    pub fn sublevel(level_offset: f64) -> Self {
        Self {
            level_offset,
            predicate: None,
        }
    }
}

impl std::fmt::Debug for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Region")
            .field("level_offset", &self.level_offset)
            .field("predicate", &self.predicate.as_ref().map(|_| ".."))
            .finish()
    }
}

/// A composite objective `φ = f + g` with explicit critical-set geometry.
#[derive(Clone)]
pub struct ObjectiveModel {
    pub dim: usize,
    pub smooth: SmoothPart,
    pub simple: SimplePart,
    /// Proximal oracle of the *full* objective, when available (quadratics,
    /// purely simple objectives). Required by the proximal point method and
    /// the Moreau-envelope operator.
    pub full_prox: Option<ProxFn>,
    pub blocks: Option<Vec<Block>>,
    pub critical: CriticalSetDescriptor,
    pub strong_convexity: Option<f64>,
}

impl ObjectiveModel {
    /// Validates the structural invariants (positive moduli, block
    /// partition, finite dimensions).
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidModel("dimension must be at least 1".into()));
        }
        if !(self.smooth.lipschitz > 0.0) {
            return Err(Error::InvalidModel(
                "smooth Lipschitz modulus must be positive".into(),
            ));
        }
        if let SimplePart::Separable(cs) = &self.simple {
            if cs.len() != self.dim {
                return Err(Error::InvalidModel(format!(
                    "separable simple part has {} coordinates, model dimension is {}",
                    cs.len(),
                    self.dim
                )));
            }
        }
        if let Some(mu) = self.strong_convexity {
            if !(mu > 0.0) {
                return Err(Error::InvalidModel(
                    "strong convexity modulus must be positive".into(),
                ));
            }
        }
        if let Some(blocks) = &self.blocks {
            let mut cursor = 0;
            for b in blocks {
                if b.offset != cursor || b.len == 0 {
                    return Err(Error::InvalidModel(
                        "blocks must partition [0, n) exactly".into(),
                    ));
                }
                if !(b.lipschitz > 0.0) {
                    return Err(Error::InvalidModel(
                        "block Lipschitz modulus must be positive".into(),
                    ));
                }
                cursor += b.len;
            }
            if cursor != self.dim {
                return Err(Error::InvalidModel(
                    "blocks must partition [0, n) exactly".into(),
                ));
            }
        }
        Ok(())
    }

    /// `φ(x) = f(x) + g(x)`; `+∞` outside `dom g`.
    pub fn value(&self, x: &Point) -> f64 {
        (self.smooth.value)(x) + self.simple.value(x)
    }

    /// `φ(x)` with a malformed-model check on the smooth part.
    pub fn try_value(&self, x: &Point) -> Result<f64> {
        let fv = (self.smooth.value)(x);
        if fv.is_nan() || fv == f64::NEG_INFINITY {
            return Err(Error::InvalidModel(format!(
                "smooth value is {fv} at {x:?}"
            )));
        }
        Ok(fv + self.simple.value(x))
    }

    pub fn smooth_value(&self, x: &Point) -> f64 {
        (self.smooth.value)(x)
    }

    pub fn gradient(&self, x: &Point) -> DVector<f64> {
        (self.smooth.gradient)(x)
    }

    /// `φ(x) − min φ`.
    pub fn gap(&self, x: &Point) -> f64 {
        self.value(x) - self.critical.min_value
    }

    pub fn min_value(&self) -> f64 {
        self.critical.min_value
    }

    pub fn prox_simple(&self, v: &Point, t: f64) -> Point {
        self.simple.prox(v, t)
    }

    /// `prox_{λφ}` through the full-objective oracle.
    pub fn prox_full(&self, x: &Point, lambda: f64) -> Result<Point> {
        match &self.full_prox {
            Some(p) => Ok(p(x, lambda)),
            None => Err(Error::OperatorNotApplicable {
                operator: "prox(full objective)".into(),
                reason: "no full-objective proximal oracle on this model".into(),
            }),
        }
    }

    /// Least-norm element of `∂φ(x) = ∇f(x) + ∂g(x)`, computed
    /// coordinatewise by projecting `−∇f(x)_i` onto the coordinate
    /// subdifferential interval of `g`.
    pub fn least_norm_subgradient(&self, x: &Point) -> Result<DVector<f64>> {
        let grad = self.gradient(x);
        match &self.simple {
            SimplePart::Zero => Ok(grad),
            SimplePart::Separable(cs) => {
                let mut out = DVector::zeros(self.dim);
                for i in 0..self.dim {
                    let (lo, hi) = cs[i]
                        .subgradient_interval(x[i])
                        .ok_or(Error::OutsideDomain { index: i })?;
                    out[i] = grad[i] + (-grad[i]).clamp(lo, hi);
                }
                Ok(out)
            }
        }
    }

    pub fn distance_to_critical(&self, x: &Point) -> f64 {
        self.critical.distance(x)
    }

    pub fn project_to_critical(&self, x: &Point) -> Point {
        self.critical.project(x)
    }

    pub fn critical_projections(&self, x: &Point) -> Vec<Point> {
        self.critical.projections(x)
    }

    pub fn in_region(&self, region: &Region, x: &Point) -> bool {
        let inside = self.value(x) <= self.critical.min_value + region.level_offset;
        match &region.predicate {
            Some(p) => inside && p(x),
            None => inside,
        }
    }
}
