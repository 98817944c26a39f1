//! Deterministic sampling of sublevel regions.
//!
//! Conditions quantify over a whole region; the checkers approximate that
//! by seeded sampling. Three strategies: gaussian draws around a critical
//! anchor with rejection, rays from the critical set with log-spaced radii,
//! and a deterministic grid for one or two dimensions. Identical plans
//! (seed included) produce bit-identical sample sets.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ObjectiveModel, Point, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleStrategy {
    GaussianRejection,
    RayFromCritical,
    Grid,
}

impl std::str::FromStr for SampleStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "gaussian-rejection" => Ok(SampleStrategy::GaussianRejection),
            "ray" | "ray-from-critical" => Ok(SampleStrategy::RayFromCritical),
            "grid" => Ok(SampleStrategy::Grid),
            other => Err(Error::InvalidParameter(format!(
                "unknown sample strategy `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplePlan {
    /// Sublevel offset of the sampled region `{φ ≤ min φ + r}`.
    pub region_r: f64,
    pub count: usize,
    pub seed: u64,
    pub strategy: SampleStrategy,
}

impl SamplePlan {
    pub fn gaussian(region_r: f64, count: usize, seed: u64) -> Self {
        Self {
            region_r,
            count,
            seed,
            strategy: SampleStrategy::GaussianRejection,
        }
    }

    pub fn ray(region_r: f64, count: usize, seed: u64) -> Self {
        Self {
            region_r,
            count,
            seed,
            strategy: SampleStrategy::RayFromCritical,
        }
    }

    pub fn grid(region_r: f64, count: usize) -> Self {
        Self {
            region_r,
            count,
            seed: 0,
            strategy: SampleStrategy::Grid,
        }
    }
}

pub struct SampleSet {
    pub points: Vec<Point>,
    pub rejected: usize,
    /// Scale estimate of the region used by the gaussian strategy.
    pub sigma: f64,
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller on uniforms; keeps the dependency surface small and the
    // stream reproducible.
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn unit_direction(rng: &mut ChaCha8Rng, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| standard_normal(rng));
        let n = v.norm();
        if n > 1e-12 {
            return v.unscale(n);
        }
    }
}

/// Boundary radius of the region along `direction` from `anchor`, found by
/// doubling plus bisection. Capped for regions that are unbounded along
/// the direction.
fn ray_radius(
    model: &ObjectiveModel,
    region: &Region,
    anchor: &Point,
    direction: &DVector<f64>,
    cap: f64,
) -> f64 {
    let inside = |s: f64| model.in_region(region, &(anchor + direction.scale(s)));
    if !inside(0.0) {
        return 0.0;
    }
    let mut hi = 1.0_f64;
    while inside(hi) {
        hi *= 2.0;
        if hi >= cap {
            return cap;
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Median boundary radius over a handful of probe directions; the sigma of
/// the gaussian strategy and the extent of grids and rays.
pub fn region_radius_estimate(
    model: &ObjectiveModel,
    region: &Region,
    rng: &mut ChaCha8Rng,
) -> f64 {
    const CAP: f64 = 1e6;
    let anchor = model.critical.representative();
    let mut radii: Vec<f64> = (0..8)
        .map(|_| {
            let u = unit_direction(rng, model.dim);
            ray_radius(model, region, &anchor, &u, CAP)
        })
        .collect();
    radii.sort_by(|a, b| a.total_cmp(b));
    let median = 0.5 * (radii[3] + radii[4]);
    if median > 0.0 {
        median
    } else {
        1.0
    }
}

/// Draws `plan.count` samples lying in the region and satisfying `admit`
/// (operator-domain membership). Deterministic in the plan.
pub fn draw_samples(
    model: &ObjectiveModel,
    plan: &SamplePlan,
    admit: &dyn Fn(&Point) -> bool,
) -> Result<SampleSet> {
    if plan.count == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be positive".into(),
        ));
    }
    let region = Region::sublevel(plan.region_r);
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let anchor = model.critical.representative();
    let sigma = region_radius_estimate(model, &region, &mut rng);
    let mut points = Vec::with_capacity(plan.count);
    let mut rejected = 0usize;
    let budget = plan.count.saturating_mul(1000);

    match plan.strategy {
        SampleStrategy::GaussianRejection => {
            let mut tries = 0usize;
            while points.len() < plan.count && tries < budget {
                tries += 1;
                let x = &anchor
                    + DVector::from_fn(model.dim, |_, _| standard_normal(&mut rng)).scale(sigma);
                if model.in_region(&region, &x) && admit(&x) {
                    points.push(x);
                } else {
                    rejected += 1;
                }
            }
        }
        SampleStrategy::RayFromCritical => {
            // Log-spaced radii between 1e-3 and 1 of each ray's own extent.
            let mut tries = 0usize;
            let mut i = 0usize;
            while points.len() < plan.count && tries < budget {
                tries += 1;
                let u = unit_direction(&mut rng, model.dim);
                let extent = ray_radius(model, &region, &anchor, &u, 1e6);
                if extent <= 0.0 {
                    rejected += 1;
                    continue;
                }
                let frac = if plan.count > 1 {
                    i as f64 / (plan.count - 1) as f64
                } else {
                    1.0
                };
                let s = extent * 10f64.powf(-3.0 * (1.0 - frac));
                let x = &anchor + u.scale(s);
                if model.in_region(&region, &x) && admit(&x) {
                    points.push(x);
                    i += 1;
                } else {
                    rejected += 1;
                }
            }
        }
        SampleStrategy::Grid => {
            if model.dim > 2 {
                return Err(Error::InvalidParameter(
                    "grid sampling is limited to one or two dimensions".into(),
                ));
            }
            let mut per_axis = if model.dim == 1 {
                plan.count.max(3)
            } else {
                (plan.count as f64).sqrt().ceil() as usize
            }
            .max(3);
            if per_axis % 2 == 0 {
                per_axis += 1;
            }
            // Symmetric about the anchor with an exact zero offset in the
            // middle, so grids cover the critical directions exactly.
            let extent = 1.05 * sigma;
            let half = (per_axis / 2) as f64;
            let spacing = extent / half;
            let coords: Vec<f64> = (0..per_axis).map(|i| (i as f64 - half) * spacing).collect();
            if model.dim == 1 {
                for &c in &coords {
                    let x = &anchor + DVector::from_vec(vec![c]);
                    if model.in_region(&region, &x) && admit(&x) {
                        points.push(x);
                    } else {
                        rejected += 1;
                    }
                }
            } else {
                for &c0 in &coords {
                    for &c1 in &coords {
                        let x = &anchor + DVector::from_vec(vec![c0, c1]);
                        if model.in_region(&region, &x) && admit(&x) {
                            points.push(x);
                        } else {
                            rejected += 1;
                        }
                    }
                }
            }
        }
    }

    if points.is_empty() {
        return Err(Error::EmptySampleSet { rejected });
    }
    Ok(SampleSet {
        points,
        rejected,
        sigma,
    })
}

/// All combinations of two one-dimensional grids, for inequality checks
/// quantified over pairs `(x, y)`.
pub fn pair_grid_1d(x_range: (f64, f64), y_range: (f64, f64), step: f64) -> Vec<(Point, Point)> {
    let xs = grid_1d(x_range.0, x_range.1, step);
    let ys = grid_1d(y_range.0, y_range.1, step);
    let mut pairs = Vec::with_capacity(xs.len() * ys.len());
    for &y in &ys {
        for &x in &xs {
            pairs.push((Point::from_element(1, x), Point::from_element(1, y)));
        }
    }
    pairs
}

pub fn grid_1d(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}
