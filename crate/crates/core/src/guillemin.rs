//! Floating-point evaluation of the canonical symplectic potential of a
//! labelled polygon, its Legendre dual, and the volume identity that ties
//! them together.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{half_plane_intersection, rat_to_f64, shoelace_area, HalfPlane, RatVec};
use crate::toric::{AugmentedFan, SupportFunction};

/// Points closer than this to a facet (in the affine distance `l_k`) are
/// rejected by [`symplectic_potential`].
pub const EPS_BOUNDARY: f64 = 1e-9;

/// Final residual `|grad G(y) - x|` that [`legendre_inverse`] must reach.
pub const LEGENDRE_TOLERANCE: f64 = 1e-10;

const MAX_NEWTON_STEPS: usize = 200;

/// Polygon `{ y : <y, u_k> >= lambda_k }` with every facet irredundant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<HalfPlane>", into = "Vec<HalfPlane>")]
pub struct LabeledPolytope {
    facets: Vec<HalfPlane>,
    vertices: Vec<RatVec>,
    float_facets: Vec<([f64; 2], f64)>,
}

impl TryFrom<Vec<HalfPlane>> for LabeledPolytope {
    type Error = Error;
    fn try_from(facets: Vec<HalfPlane>) -> Result<Self> {
        LabeledPolytope::new(facets)
    }
}

impl From<LabeledPolytope> for Vec<HalfPlane> {
    fn from(p: LabeledPolytope) -> Self {
        p.facets
    }
}

impl LabeledPolytope {
    pub fn new(facets: Vec<HalfPlane>) -> Result<Self> {
        let vertices = half_plane_intersection(&facets)?;
        if vertices.is_empty() {
            return Err(Error::DegenerateInput(
                "labelled polytope has empty interior".into(),
            ));
        }
        for (i, f) in facets.iter().enumerate() {
            let on_facet = vertices.iter().filter(|v| f.slack(v).is_zero()).count();
            if on_facet < 2 {
                return Err(Error::DegenerateInput(format!(
                    "facet {i} ({f}) is redundant"
                )));
            }
        }
        let float_facets = facets
            .iter()
            .map(|f| {
                (
                    [
                        rat_to_f64(&f.normal.to_rat().x),
                        rat_to_f64(&f.normal.to_rat().y),
                    ],
                    rat_to_f64(&f.bound),
                )
            })
            .collect();
        Ok(LabeledPolytope {
            facets,
            vertices,
            float_facets,
        })
    }

    /// `Sigma_h` with its facets labelled by the marks of the fan.
    pub fn from_fan(fan: &AugmentedFan, h: &SupportFunction) -> Result<Self> {
        let planes = fan
            .marks()
            .iter()
            .zip(&h.values)
            .map(|(n, v)| HalfPlane::new(n.clone(), BigRational::from_integer(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        LabeledPolytope::new(planes)
    }

    pub fn facets(&self) -> &[HalfPlane] {
        &self.facets
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn area(&self) -> BigRational {
        shoelace_area(&self.vertices).expect("polytope has at least 3 vertices")
    }

    /// Mean of the vertices, an interior point.
    pub fn vertex_mean(&self) -> [f64; 2] {
        let n = self.vertices.len() as f64;
        let (sx, sy) = self.vertices.iter().fold((0.0, 0.0), |(a, b), v| {
            let [x, y] = v.to_f64();
            (a + x, b + y)
        });
        [sx / n, sy / n]
    }

    fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let pts: Vec<[f64; 2]> = self.vertices.iter().map(RatVec::to_f64).collect();
        let lo = [
            pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
            pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min),
        ];
        let hi = [
            pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max),
            pts.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max),
        ];
        (lo, hi)
    }

    /// Affine distances `l_k(y) = <y, u_k> - lambda_k`.
    pub fn distances(&self, y: [f64; 2]) -> Vec<f64> {
        self.float_facets
            .iter()
            .map(|(u, lambda)| u[0] * y[0] + u[1] * y[1] - lambda)
            .collect()
    }
}

/// Value, gradient and Hessian of the symplectic potential at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialEval {
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: [[f64; 2]; 2],
}

impl PotentialEval {
    pub fn hessian_det(&self) -> f64 {
        let h = self.hessian;
        h[0][0] * h[1][1] - h[0][1] * h[1][0]
    }

    pub fn hessian_positive_definite(&self) -> bool {
        self.hessian[0][0] > 0.0 && self.hessian_det() > 0.0
    }
}

fn eval_unchecked(p: &LabeledPolytope, ls: &[f64]) -> PotentialEval {
    let mut value = 0.0;
    let mut gradient = [0.0; 2];
    let mut hessian = [[0.0; 2]; 2];
    for ((u, _), &l) in p.float_facets.iter().zip(ls) {
        let log_l = l.ln();
        value += 0.5 * l * log_l;
        for i in 0..2 {
            gradient[i] += 0.5 * u[i] * (log_l + 1.0);
            for j in 0..2 {
                hessian[i][j] += 0.5 * u[i] * u[j] / l;
            }
        }
    }
    PotentialEval {
        value,
        gradient,
        hessian,
    }
}

/// `G(y) = 1/2 sum_k l_k(y) log l_k(y)` with its first two derivatives.
pub fn symplectic_potential(p: &LabeledPolytope, y: [f64; 2]) -> Result<PotentialEval> {
    let ls = p.distances(y);
    if let Some(facet) = ls.iter().position(|&l| l.is_nan() || l <= EPS_BOUNDARY) {
        return Err(Error::BoundaryProximity {
            facet,
            eps: EPS_BOUNDARY,
        });
    }
    Ok(eval_unchecked(p, &ls))
}

fn residual(g: &PotentialEval, x: [f64; 2]) -> f64 {
    (g.gradient[0] - x[0]).hypot(g.gradient[1] - x[1])
}

/// Damped Newton on the strictly convex `G(y) - <x, y>` from `start`.
fn newton(p: &LabeledPolytope, x: [f64; 2], start: [f64; 2]) -> Result<[f64; 2]> {
    let objective = |ev: &PotentialEval, y: [f64; 2]| ev.value - x[0] * y[0] - x[1] * y[1];
    let interior = |y: [f64; 2]| {
        let ls = p.distances(y);
        ls.iter().all(|&l| l > 0.0).then_some(ls)
    };
    let mut y = start;
    let ls = interior(y)
        .ok_or_else(|| Error::InternalInconsistency("Newton start is not interior".into()))?;
    let mut ev = eval_unchecked(p, &ls);
    let mut best = (residual(&ev, x), y);
    let target = 1e-15 * (1.0 + x[0].abs().max(x[1].abs()));
    for _ in 0..MAX_NEWTON_STEPS {
        if best.0 < target {
            break;
        }
        let r = [ev.gradient[0] - x[0], ev.gradient[1] - x[1]];
        let h = ev.hessian;
        let det = ev.hessian_det();
        let step = [
            -(h[1][1] * r[0] - h[0][1] * r[1]) / det,
            -(h[0][0] * r[1] - h[1][0] * r[0]) / det,
        ];
        let f0 = objective(&ev, y);
        let slope = r[0] * step[0] + r[1] * step[1];
        let res = residual(&ev, x);
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-20 {
            let cand = [y[0] + t * step[0], y[1] + t * step[1]];
            if let Some(ls) = interior(cand) {
                let ev_c = eval_unchecked(p, &ls);
                // Armijo once far away; near the solution accept any decrease of the residual
                if objective(&ev_c, cand) <= f0 + 1e-4 * t * slope || residual(&ev_c, x) < res {
                    accepted = Some((cand, ev_c));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((cand, ev_c)) = accepted else { break };
        y = cand;
        ev = ev_c;
        let res = residual(&ev, x);
        if res < best.0 {
            best = (res, y);
        }
    }
    if best.0 > LEGENDRE_TOLERANCE {
        return Err(Error::NonConvergence { residual: best.0 });
    }
    Ok(best.1)
}

/// The interior `y` with `grad G(y) = x`.
pub fn legendre_inverse(p: &LabeledPolytope, x: [f64; 2]) -> Result<[f64; 2]> {
    newton(p, x, p.vertex_mean())
}

/// The Kähler potential `F(x) = <x, y> - G(y)` at `y` = [`legendre_inverse`]`(x)`,
/// cross-checked against `1/2 (sum lambda_k log l_k(y) + <y, sum u_k>)`: the
/// two must differ by the same constant here and at `x = 0`.
pub fn kahler_potential(p: &LabeledPolytope, x: [f64; 2]) -> Result<f64> {
    let (bt, cf) = both_forms(p, x)?;
    let (bt0, cf0) = both_forms(p, [0.0, 0.0])?;
    let drift = ((bt - bt0) - (cf - cf0)).abs();
    if drift > 1e-8 * (1.0 + bt.abs()) {
        return Err(Error::InternalInconsistency(format!(
            "Kähler potential forms disagree by {drift:e} at {x:?}"
        )));
    }
    Ok(bt)
}

fn both_forms(p: &LabeledPolytope, x: [f64; 2]) -> Result<(f64, f64)> {
    let y = legendre_inverse(p, x)?;
    let ls = p.distances(y);
    let g = eval_unchecked(p, &ls);
    let back = x[0] * y[0] + x[1] * y[1] - g.value;
    let mut closed = 0.0;
    for ((u, lambda), l) in p.float_facets.iter().zip(&ls) {
        closed += lambda * l.ln() + u[0] * y[0] + u[1] * y[1];
    }
    Ok((back, 0.5 * closed))
}

/// `d y / d x`, the Hessian of `F`, by Richardson-extrapolated central
/// differences of the Legendre inverse.
fn hessian_f(p: &LabeledPolytope, x: [f64; 2], y: [f64; 2]) -> Result<[[f64; 2]; 2]> {
    let central = |h: f64| -> Result<[[f64; 2]; 2]> {
        let mut out = [[0.0; 2]; 2];
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let yp = newton(p, xp, y)?;
            let ym = newton(p, xm, y)?;
            for i in 0..2 {
                out[i][j] = (yp[i] - ym[i]) / (2.0 * h);
            }
        }
        Ok(out)
    };
    let coarse = central(2e-3)?;
    let fine = central(1e-3)?;
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
        }
    }
    Ok(out)
}

/// Result of [`volume_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeCheck {
    /// Hit-or-miss estimate of the area.
    pub mc_estimate: f64,
    /// Exact area by the shoelace formula.
    pub exact: f64,
    pub rel_err: f64,
    /// Largest `|det Hess G(y) * det Hess F(x(y)) - 1|` over the sampled points.
    pub max_duality_deviation: f64,
    pub points_checked: usize,
}

/// Samples below this distance from a facet are counted for the area but
/// skipped by the Jacobian check, where finite differences lose precision.
const EPS_SAMPLE: f64 = 1e-6;

/// The area of the polygon equals the integral of `det Hess F` over the
/// plane. Checked through the change of variables `x = grad G(y)`: samples
/// `y` uniformly, verifies `det Hess G(y) det Hess F(x) = 1` at each, and
/// estimates the area by hit-or-miss.
pub fn volume_check(p: &LabeledPolytope, samples: usize, seed: u64) -> Result<VolumeCheck> {
    if samples < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "volume check needs at least 10000 samples, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = p.bounding_box();
    let box_area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
    let mut hits = 0usize;
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let y = [rng.gen_range(lo[0]..hi[0]), rng.gen_range(lo[1]..hi[1])];
        let ls = p.distances(y);
        if ls.iter().any(|&l| l <= 0.0) {
            continue;
        }
        hits += 1;
        if ls.iter().any(|&l| l <= EPS_SAMPLE) {
            continue;
        }
        let g = eval_unchecked(p, &ls);
        let hf = hessian_f(p, g.gradient, y)?;
        let det_f = hf[0][0] * hf[1][1] - hf[0][1] * hf[1][0];
        worst = worst.max((g.hessian_det() * det_f - 1.0).abs());
        checked += 1;
    }
    let mc_estimate = box_area * hits as f64 / samples as f64;
    let exact = rat_to_f64(&p.area());
    Ok(VolumeCheck {
        mc_estimate,
        exact,
        rel_err: (mc_estimate - exact).abs() / exact,
        max_duality_deviation: worst,
        points_checked: checked,
    })
}
