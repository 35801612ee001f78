//! Closed forms for the first members of the sequence and the function
//! `G(w) = ∫_w^∞ [1 − F_{W₃}(s)] ds = −e^{eʷ} Ei(−eʷ)`.
//!
//! Only n ≤ 3 has a closed form. Larger n must go through
//! [`crate::inversion`] or [`crate::monte_carlo`]; the functions here refuse
//! rather than approximate.

use std::f64::consts::PI;

use thiserror::Error;

use crate::constants::EULER_GAMMA;
use crate::special::scaled_e1;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DistributionError {
    #[error("sequence index must be at least 1")]
    ZeroIndex,
    #[error("no closed form for n = {0}; use inversion or simulation")]
    UnsupportedIndex(u32),
    #[error("the Y scale needs y > 0, got {0}")]
    NonPositive(f64),
    #[error("{0} is not a probability")]
    NotAProbability(f64),
}

/// Position `n ≥ 1` in the nested sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequenceIndex(u32);

impl SequenceIndex {
    pub fn new(n: u32) -> Result<Self, DistributionError> {
        if n == 0 {
            Err(DistributionError::ZeroIndex)
        } else {
            Ok(Self(n))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn is_even(self) -> bool {
        !self.is_odd()
    }
}

impl TryFrom<u32> for SequenceIndex {
    type Error = DistributionError;

    fn try_from(n: u32) -> Result<Self, Self::Error> {
        Self::new(n)
    }
}

impl std::fmt::Display for SequenceIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(p: f64) -> Result<Self, DistributionError> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(DistributionError::NotAProbability(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// `G^{(k)}(w)` for `k = 0 … k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeVector {
    pub values: Vec<f64>,
    /// Set when `k_max > 30`, past which the binomial sums lose digits quickly.
    pub accuracy_warning: bool,
}

pub const DERIVATIVE_ACCURACY_LIMIT: usize = 30;

/// `F_{Yₙ}(y)` for n ∈ {1, 2, 3}.
pub fn cdf_y_exact(n: SequenceIndex, y: f64) -> Result<Probability, DistributionError> {
    if y.is_nan() || y <= 0.0 {
        return Err(DistributionError::NonPositive(y));
    }
    let p = match n.get() {
        1 => -(-y).exp_m1(),
        2 => y / (y + 1.0),
        // −y eʸ Ei(−y) = y · eʸ E1(y)
        3 => y * scaled_e1(y, y.ln()),
        m => return Err(DistributionError::UnsupportedIndex(m)),
    };
    Ok(Probability(p.min(1.0)))
}

/// `F_{Wₙ}(w) = F_{Yₙ}(eʷ)` for n ∈ {1, 2, 3}.
pub fn cdf_w_exact(n: SequenceIndex, w: f64) -> Result<Probability, DistributionError> {
    match n.get() {
        1 => Ok(Probability(-(-w.exp()).exp_m1())),
        2 => Ok(Probability(logistic(w))),
        3 => Ok(cdf_w3(w)),
        m => Err(DistributionError::UnsupportedIndex(m)),
    }
}

/// `eʷ / (1 + eʷ)`, the CDF of `W₂`.
pub fn logistic(w: f64) -> f64 {
    if w >= 0.0 {
        1.0 / (1.0 + (-w).exp())
    } else {
        let e = w.exp();
        e / (1.0 + e)
    }
}

// e^w overflows past this
const W_OVERFLOW: f64 = 709.0;

/// `F_{W₃}(w) = −e^{eʷ + w} Ei(−eʷ)` for every real `w`.
pub fn cdf_w3(w: f64) -> Probability {
    if w > W_OVERFLOW {
        // ∫₀^∞ e^{−t} / (1 + t e^{−w}) dt = Σ (−1)^k k! e^{−kw}
        let u = (-w).exp();
        return Probability(1.0 - u + 2.0 * u * u);
    }
    let x = w.exp();
    Probability((x * scaled_e1(x, w)).min(1.0))
}

/// `G(w) = −e^{eʷ} Ei(−eʷ)`, strictly positive and decreasing.
pub fn g_function(w: f64) -> f64 {
    if w > W_OVERFLOW {
        let u = (-w).exp();
        return u * (1.0 - u + 2.0 * u * u);
    }
    scaled_e1(w.exp(), w)
}

/// `γ + w + G(w)`, the integral of `F_{W₃}` from −∞ to `w`.
pub fn integrated_cdf_w3(w: f64) -> f64 {
    EULER_GAMMA + w + g_function(w)
}

/// Derivatives of `G` via `G' = eʷG − 1` and
/// `G^{(k+1)} = eʷ Σ_{j≤k} C(k, j) G^{(j)}` for `k ≥ 1`.
pub fn g_derivatives(w: f64, k_max: usize) -> DerivativeVector {
    let ew = w.exp();
    let mut values = Vec::with_capacity(k_max + 1);
    values.push(g_function(w));
    if k_max >= 1 {
        values.push(ew * values[0] - 1.0);
    }
    let mut row = vec![1.0, 1.0]; // C(1, ·)
    for _ in 1..k_max {
        let s: f64 = row.iter().zip(&values).map(|(c, g)| c * g).sum();
        values.push(ew * s);
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1.0);
        next.extend(row.windows(2).map(|p| p[0] + p[1]));
        next.push(1.0);
        row = next;
    }
    DerivativeVector {
        values,
        accuracy_warning: k_max > DERIVATIVE_ACCURACY_LIMIT,
    }
}

/// Exact mean and variance of `Wₙ`, a signed sum of n i.i.d. Gumbel terms:
/// mean `−γ` for odd n and `0` for even n, variance `nπ²/6`.
pub fn wn_moments(n: SequenceIndex) -> (f64, f64) {
    let mean = if n.is_odd() { -EULER_GAMMA } else { 0.0 };
    (mean, n.get() as f64 * PI * PI / 6.0)
}
