//! Standard normal tail Φ̄(t) = Pr{N(0,1) ≥ t} and its inverse.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Standard normal density.
pub fn density(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * PI).sqrt()
}

/// Φ̄(t), via `erfc` (FreeBSD-derived rational approximations, < 1 ulp).
pub fn gaussian_tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / SQRT_2)
}

/// ln Φ̄(t), finite far beyond the point where Φ̄ underflows.
pub fn log_gaussian_tail(t: f64) -> f64 {
    if t < 30.0 {
        return gaussian_tail(t).ln();
    }
    // Asymptotic series: Φ̄(t) = φ(t)/t · (1 − 1/t² + 3/t⁴ − 15/t⁶ + 105/t⁸ − …).
    let s = 1.0 / (t * t);
    let series = 1.0 - s * (1.0 - s * (3.0 - s * (15.0 - s * 105.0)));
    -0.5 * t * t - (2.0 * PI).sqrt().ln() - t.ln() + series.ln()
}

/// Φ̄⁻¹(p) for p ∈ (0, 1).
pub fn gaussian_tail_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("tail probability {p} outside (0, 1)")));
    }
    if p > 0.5 {
        return Ok(-gaussian_tail_inv(1.0 - p)?);
    }
    // Abramowitz–Stegun 26.2.23 starting point (|error| < 4.5e-4) ...
    let s = (-2.0 * p.ln()).sqrt();
    let mut t = s - (2.515517 + 0.802853 * s + 0.010328 * s * s) / (1.0 + 1.432788 * s + 0.189269 * s * s + 0.001308 * s * s * s);
    // ... then Newton on ln Φ̄(t) − ln p, whose derivative is −φ(t)/Φ̄(t).
    let lp = p.ln();
    for _ in 0..50 {
        let q = gaussian_tail(t);
        let step = (q.ln() - lp) * q / density(t);
        t += step;
        if step.abs() <= 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    Ok(t)
}
