//! Gaussian orthogonal separators with buffers.
//!
//! A draw projects every unit vector onto one Gaussian direction g and
//! thresholds the projection g_u = ⟨ψ_u, g⟩:
//!
//! | set | interval            |
//! |-----|---------------------|
//! | X   | `[t, ∞)`            |
//! | Y   | `(t − ε′, t)`       |
//! | Z   | `(t − 2ε′, t − ε′]` |
//!
//! `t` is calibrated so that two vectors at distance ≥ R land together in X
//! with probability at most α/m, where α = Φ̄(t).

mod gaussian;
pub mod montecarlo;

pub use gaussian::{density, gaussian_tail, gaussian_tail_inv, log_gaussian_tail};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::rng::StreamRng;

/// Largest threshold the strict calibration will search.
pub const MAX_THRESHOLD: f64 = 40.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorParams {
    pub epsilon: f64,
    /// Separation radius R: the rejection test of the measured variants
    /// uses balls of this radius.
    pub radius: f64,
    /// Radius at which the joint-tail condition was calibrated (≥ R).
    pub calibration_radius: f64,
    /// Separation strength m.
    pub strength: f64,
    /// δ of the measured variants (m = 2/δ), if any.
    pub delta: Option<f64>,
    pub threshold: f64,
    pub alpha: f64,
    /// ε′ = ε / (e (t + 1/t)).
    pub buffer_width: f64,
    /// ln(m)/ε, the scale of the distortion bound; its constant is not fixed.
    pub distortion_scale: f64,
    /// True when the exact condition needed a threshold above the cap and
    /// the threshold was clamped; the joint-tail guarantee then does not hold.
    pub capped: bool,
}

fn joint_tail_ok(t: f64, rho: f64, ln_m: f64) -> bool {
    log_gaussian_tail(rho * t) + ln_m <= log_gaussian_tail(t)
}

/// Smallest t with m·Φ̄(t/√(1 − r²/4)) ≤ Φ̄(t), searched up to `t_cap`.
/// Returns `None` if even `t_cap` fails.
pub fn calibrated_threshold(m: f64, r: f64, t_cap: f64) -> Option<f64> {
    let rho = 1.0 / (1.0 - r * r / 4.0).sqrt();
    let ln_m = m.ln();
    if !joint_tail_ok(t_cap, rho, ln_m) {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, t_cap);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if joint_tail_ok(mid, rho, ln_m) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Some(hi)
}

fn check_common(epsilon: f64, m: f64, r: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("separator epsilon {epsilon} outside (0, 1)")));
    }
    if !(m >= 3.0) || !m.is_finite() {
        return Err(Error::InvalidParameter(format!("separation strength {m} below 3")));
    }
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::InvalidParameter(format!("radius {r} outside (0, 2)")));
    }
    Ok(())
}

impl SeparatorParams {
    fn build(epsilon: f64, m: f64, r: f64, r_cal: f64, t: f64, capped: bool, delta: Option<f64>) -> Result<Self> {
        let alpha = gaussian_tail(t);
        let buffer_width = epsilon / (std::f64::consts::E * (t + 1.0 / t));
        if buffer_width >= t {
            return Err(Error::Calibration(format!("buffer width {buffer_width} >= threshold {t}")));
        }
        Ok(SeparatorParams {
            epsilon,
            radius: r,
            calibration_radius: r_cal,
            strength: m,
            delta,
            threshold: t,
            alpha,
            buffer_width,
            distortion_scale: m.ln() / epsilon,
            capped,
        })
    }

    /// Exact calibration at radius `r`; fails if no t ≤ 40 works.
    pub fn calibrate(epsilon: f64, m: f64, r: f64) -> Result<Self> {
        check_common(epsilon, m, r)?;
        let t = calibrated_threshold(m, r, MAX_THRESHOLD)
            .ok_or_else(|| Error::Calibration(format!("no threshold below {MAX_THRESHOLD} for m={m}, r={r}")))?;
        Self::build(epsilon, m, r, r, t, false, None)
    }

    /// Measured variant: m = 2/δ.
    pub fn calibrate_measured(epsilon: f64, delta: f64, r: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 2.0 / 3.0) {
            return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 2/3]")));
        }
        let mut p = Self::calibrate(epsilon, 2.0 / delta, r)?;
        p.delta = Some(delta);
        Ok(p)
    }

    /// Calibration for a concrete point set: the joint-tail condition only
    /// has to hold for pairs at distance ≥ `r`, so it is calibrated at
    /// `r_cal` = the smallest such distance actually present (≥ r). If the
    /// required threshold exceeds `t_cap`, t is clamped and `capped` is set.
    pub fn calibrate_for_points(epsilon: f64, delta: f64, r: f64, r_cal: f64, t_cap: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 2.0 / 3.0) {
            return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 2/3]")));
        }
        let m = 2.0 / delta;
        check_common(epsilon, m, r)?;
        let r_cal = r_cal.clamp(r, 1.99);
        let cap = t_cap.min(MAX_THRESHOLD);
        let (t, capped) = match calibrated_threshold(m, r_cal, cap) {
            Some(t) => (t, false),
            None => (cap, true),
        };
        Self::build(epsilon, m, r, r_cal, t, capped, Some(delta))
    }
}

/// Row-major set of unit vectors.
#[derive(Clone, Copy, Debug)]
pub struct UnitVectors<'a> {
    data: &'a [f64],
    dim: usize,
}

impl<'a> UnitVectors<'a> {
    pub fn new(data: &'a [f64], dim: usize) -> Result<Self> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(Error::InvalidParameter("vector data not a multiple of the dimension".into()));
        }
        for (i, v) in data.chunks(dim).enumerate() {
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if (n2.sqrt() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!("vector {i} has norm {}", n2.sqrt())));
            }
        }
        Ok(UnitVectors { data, dim })
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> &'a [f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        crate::spectral::euclidean(self.get(i), self.get(j))
    }

    /// Smallest pairwise distance that is at least `r`; `None` if all
    /// pairs are closer than `r`.
    pub fn min_distance_at_least(&self, r: f64) -> Option<f64> {
        let n = self.len();
        let mut best: Option<f64> = None;
        for i in 0..n {
            for j in i + 1..n {
                let d = self.distance(i, j);
                if d >= r && best.map_or(true, |b| d < b) {
                    best = Some(d);
                }
            }
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorSample {
    pub x: VertexSet,
    pub y: VertexSet,
    pub z: VertexSet,
    /// The draw failed the measure test and was replaced by empty sets.
    pub rejected: bool,
}

/// Region of a projection value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    X,
    Y,
    Z,
    Outside,
}

/// Which interval contains projection `g`; `two_buffers` enables Z.
pub fn classify(g: f64, p: &SeparatorParams, two_buffers: bool) -> Region {
    let t = p.threshold;
    let e = p.buffer_width;
    if g >= t {
        Region::X
    } else if g > t - e {
        Region::Y
    } else if two_buffers && g > t - 2.0 * e {
        Region::Z
    } else {
        Region::Outside
    }
}

/// One Gaussian direction in the vectors' dimension and all projections.
pub fn projections(v: &UnitVectors, rng: &mut StreamRng) -> Vec<f64> {
    let g = rng.normal_vec(v.dim());
    (0..v.len()).map(|i| v.get(i).iter().zip(&g).map(|(a, b)| a * b).sum()).collect()
}

fn split(v: &UnitVectors, proj: &[f64], p: &SeparatorParams, two_buffers: bool) -> SeparatorSample {
    let n = v.len();
    let mut s = SeparatorSample { x: VertexSet::new(n), y: VertexSet::new(n), z: VertexSet::new(n), rejected: false };
    for (i, &g) in proj.iter().enumerate() {
        match classify(g, p, two_buffers) {
            Region::X => s.x.insert(i),
            Region::Y => s.y.insert(i),
            Region::Z => s.z.insert(i),
            Region::Outside => {}
        }
    }
    s
}

/// min over u ∈ X of μ(X ∖ Ball(u, R)).
pub fn min_outside_ball(v: &UnitVectors, measures: &[f64], x: &VertexSet, r: f64) -> f64 {
    let members: Vec<usize> = x.iter().collect();
    let total: f64 = members.iter().map(|&i| measures[i]).sum();
    let mut best = f64::INFINITY;
    for &u in &members {
        let inside: f64 = members.iter().filter(|&&w| v.distance(u, w) <= r).map(|&w| measures[w]).sum();
        best = best.min(total - inside);
        if best <= 0.0 {
            break;
        }
    }
    best
}

fn measured(v: &UnitVectors, measures: &[f64], p: &SeparatorParams, two_buffers: bool, rng: &mut StreamRng) -> Result<SeparatorSample> {
    let delta = p
        .delta
        .ok_or_else(|| Error::InvalidParameter("measured separator needs params with delta".into()))?;
    if measures.len() != v.len() || measures.iter().any(|&m| m < 0.0) {
        return Err(Error::InvalidParameter("measures must be nonnegative, one per vector".into()));
    }
    let proj = projections(v, rng);
    let mut s = split(v, &proj, p, two_buffers);
    if !s.x.is_empty() {
        let total: f64 = measures.iter().sum();
        if min_outside_ball(v, measures, &s.x, p.radius) > delta * total {
            let n = v.len();
            s = SeparatorSample { x: VertexSet::new(n), y: VertexSet::new(n), z: VertexSet::new(n), rejected: true };
        }
    }
    Ok(s)
}

/// X = {g_u ≥ t}, Y = {t − ε′ < g_u < t}; Z stays empty.
pub fn sample_one_buffer(v: &UnitVectors, p: &SeparatorParams, rng: &mut StreamRng) -> SeparatorSample {
    let proj = projections(v, rng);
    split(v, &proj, p, false)
}

/// One-buffer draw, replaced by empty sets unless
/// min_{u∈X} μ(X ∖ Ball(u, R)) ≤ δ·μ(U).
pub fn sample_measured(v: &UnitVectors, measures: &[f64], p: &SeparatorParams, rng: &mut StreamRng) -> Result<SeparatorSample> {
    measured(v, measures, p, false, rng)
}

/// Like [`sample_measured`] with the second buffer Z.
pub fn sample_two_buffers(v: &UnitVectors, measures: &[f64], p: &SeparatorParams, rng: &mut StreamRng) -> Result<SeparatorSample> {
    measured(v, measures, p, true, rng)
}
