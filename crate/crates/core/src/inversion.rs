//! Characteristic functions of `Wₙ` and their Gil-Pelaez inversion.
//!
//! With `r(z) = πz / sinh(πz)` the characteristic function is `r^{n/2}` for
//! even n and `r^{(n−1)/2} Γ(1+iz)` for odd n. Gil-Pelaez then gives
//! `F_{Wₙ}(w) = 1/2 + ∫₀^∞ g(z) dz` with
//!
//! * even n: `g = r^{n/2} sin(wz) / (πz)`,
//! * odd n:  `g = r^{(n−1)/2} Im(e^{iwz} Γ(1−iz)) / (πz)`.
//!
//! The odd-n form already contains the collapsed inner integral
//! `∫₀^∞ e^{−t} sin((w − ln t) z) dt = Im(e^{iwz} Γ(1−iz))`, so a single
//! one-dimensional quadrature suffices. Both kernels are bounded by
//! `r^{n/2} / (πz)`, which is what the truncation bound uses.
//!
//! n = 1 is not inverted: its kernel `Im(…)/(πz)` does not decay.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::EULER_GAMMA;
use crate::distribution::{cdf_y_exact, SequenceIndex};
use crate::quadrature::integrate_adaptive;
use crate::special::{ln_complex_gamma, ln_sinh_ratio, ComplexValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InversionError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("n = 1 has a non-decaying kernel; use the closed form")]
    UnsupportedIndex,
    #[error("tolerance not met: best estimate {:.12} with error bound {:.3e}", .best.value, .best.est_error)]
    ToleranceNotMet { best: InversionResult },
    #[error("quadrature diverged: raw value {0} is outside [-0.05, 1.05]")]
    Divergence(f64),
}

/// Settings for the semi-infinite inversion integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub z_max: f64,
    pub abs_tol: f64,
    pub max_nodes: usize,
    /// Radius of the analytic patch at the origin.
    pub small_z_cut: f64,
}

pub const DEFAULT_ABS_TOL: f64 = 1e-10;
pub const DEFAULT_SMALL_Z_CUT: f64 = 1e-6;
pub const DEFAULT_MAX_NODES: usize = 400_000;

impl QuadratureConfig {
    pub fn new(
        z_max: f64,
        abs_tol: f64,
        max_nodes: usize,
        small_z_cut: f64,
    ) -> Result<Self, InversionError> {
        let cfg = Self {
            z_max,
            abs_tol,
            max_nodes,
            small_z_cut,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults for index n: `z_max = 40/(n−1) + 5`, since the kernel decays
    /// roughly like `e^{−nπz/2}`.
    pub fn for_index(n: SequenceIndex) -> Self {
        let z_max = if n.get() > 1 {
            40.0 / (n.get() - 1) as f64 + 5.0
        } else {
            45.0
        };
        Self {
            z_max,
            abs_tol: DEFAULT_ABS_TOL,
            max_nodes: DEFAULT_MAX_NODES,
            small_z_cut: DEFAULT_SMALL_Z_CUT,
        }
    }

    pub fn with_tol(self, abs_tol: f64) -> Self {
        Self { abs_tol, ..self }
    }

    pub fn with_z_max(self, z_max: f64) -> Self {
        Self { z_max, ..self }
    }

    pub fn validate(&self) -> Result<(), InversionError> {
        let bad = |m: &str| Err(InversionError::InvalidConfig(m.to_string()));
        if self.small_z_cut.is_nan() || self.small_z_cut <= 0.0 {
            return bad("small_z_cut must be positive");
        }
        if !self.z_max.is_finite() || self.z_max <= self.small_z_cut {
            return bad("z_max must be finite and exceed small_z_cut");
        }
        if !(self.abs_tol > 0.0 && self.abs_tol <= 1e-2) {
            return bad("abs_tol must lie in (0, 1e-2]");
        }
        if self.max_nodes == 0 {
            return bad("max_nodes must be positive");
        }
        Ok(())
    }
}

/// Raw inversion output. `value` is never clamped into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionResult {
    pub value: f64,
    pub est_error: f64,
    pub nodes_used: usize,
    pub truncation_bound: f64,
}

/// `φ_{Wₙ}(z)`.
pub fn charfn_wn(n: SequenceIndex, z: f64) -> ComplexValue {
    let m = n.get() as f64;
    let lr = ln_sinh_ratio(z);
    if n.is_even() {
        return Complex64::new((0.5 * m * lr).exp(), 0.0);
    }
    // Γ(1 + iz) never hits a pole; very large |z| only underflows
    let lg =
        ln_complex_gamma(Complex64::new(1.0, z)).unwrap_or(Complex64::new(f64::NEG_INFINITY, 0.0));
    let log = Complex64::new(0.5 * (m - 1.0) * lr, 0.0) + lg;
    Complex64::from_polar(log.re.exp(), log.im)
}

/// The Gil-Pelaez kernel `g(z)`; at `z = 0` returns its limit
/// (`w/π` for even n, `(w + γ)/π` for odd n).
pub fn gil_pelaez_integrand(n: SequenceIndex, w: f64, z: f64) -> f64 {
    if z == 0.0 {
        return origin_limit(n, w);
    }
    let m = n.get() as f64;
    let lr = ln_sinh_ratio(z);
    let pz = PI * z;
    if n.is_even() {
        (0.5 * m * lr).exp() * (w * z).sin() / pz
    } else {
        let lg = ln_complex_gamma(Complex64::new(1.0, -z))
            .unwrap_or(Complex64::new(f64::NEG_INFINITY, 0.0));
        (0.5 * (m - 1.0) * lr + lg.re).exp() * (w * z + lg.im).sin() / pz
    }
}

fn origin_limit(n: SequenceIndex, w: f64) -> f64 {
    if n.is_even() {
        w / PI
    } else {
        (w + EULER_GAMMA) / PI
    }
}

/// Upper bound on `∫_{z_max}^∞ |g(z)| dz` using `|g| ≤ r^{n/2}/(πz)` and
/// `d/dz ln(r^{n/2}/(πz)) ≤ −(n/2)(π − 1/z_max)` past `z_max`.
pub fn truncation_bound(n: SequenceIndex, z_max: f64) -> f64 {
    let half_n = 0.5 * n.get() as f64;
    let rate = half_n * (PI - 1.0 / z_max);
    if rate <= 0.0 {
        return f64::INFINITY;
    }
    let envelope = (half_n * ln_sinh_ratio(z_max)).exp() / (PI * z_max);
    envelope / rate
}

/// `F_{Wₙ}(w)` for n ≥ 2 by numerical inversion.
pub fn cdf_wn(
    n: SequenceIndex,
    w: f64,
    cfg: &QuadratureConfig,
) -> Result<InversionResult, InversionError> {
    cfg.validate()?;
    if n.get() < 2 {
        return Err(InversionError::UnsupportedIndex);
    }
    if n.is_even() && w == 0.0 {
        // odd integrand in w: identically zero
        return Ok(InversionResult {
            value: 0.5,
            est_error: 0.0,
            nodes_used: 0,
            truncation_bound: 0.0,
        });
    }

    let g = |z: f64| gil_pelaez_integrand(n, w, z);
    let cut = cfg.small_z_cut;
    let g0 = origin_limit(n, w);
    let g_cut = g(cut);
    let patch = 0.5 * cut * (g0 + g_cut);
    let patch_err = cut * (g_cut - g0).abs();

    let tail = truncation_bound(n, cfg.z_max);
    let budget = (cfg.abs_tol - tail - patch_err).max(0.25 * cfg.abs_tol);
    let oscillations = (cfg.z_max * w.abs() / PI).ceil() as usize;
    let panels = oscillations.clamp(8, 4096);
    let quad = integrate_adaptive(&g, cut, cfg.z_max, 0.5 * budget, cfg.max_nodes, panels);

    let value = 0.5 + patch + quad.value;
    let result = InversionResult {
        value,
        est_error: quad.est_error + tail + patch_err,
        nodes_used: quad.nodes_used + 1,
        truncation_bound: tail,
    };
    if !(-0.05..=1.05).contains(&value) {
        return Err(InversionError::Divergence(value));
    }
    if result.est_error > cfg.abs_tol || !quad.converged {
        return Err(InversionError::ToleranceNotMet { best: result });
    }
    Ok(result)
}

/// `κₙ = F_{Yₙ}(1) = F_{Wₙ}(0)`; closed form for n = 1, exactly 1/2 for even n.
pub fn kappa(n: SequenceIndex, cfg: &QuadratureConfig) -> Result<InversionResult, InversionError> {
    if n.get() == 1 {
        let value = cdf_y_exact(n, 1.0).map(|p| p.value()).unwrap_or(f64::NAN);
        return Ok(InversionResult {
            value,
            est_error: 0.0,
            nodes_used: 0,
            truncation_bound: 0.0,
        });
    }
    cdf_wn(n, 0.0, cfg)
}
