//! Taylor series of `G^{(k)}` around 0 built from Bell and Gould numbers:
//!
//! `Σ_{ℓ≥0} (δB_{ℓ+k} − A_{ℓ+k}) wˡ / ℓ!`
//!
//! plus the remainder envelope that governs its (pointwise, non-uniform)
//! convergence, Hardy's series for δ and the `w → −∞` limit `G(w) + w → −γ`.

use std::f64::consts::E;

use thiserror::Error;

use crate::distribution::g_function;
use crate::sequences::{CoefficientTable, SequenceError};

pub const MAX_PARTIAL_ORDER: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TaylorError {
    #[error(transparent)]
    Table(#[from] SequenceError),
    #[error("invalid series query: {0}")]
    InvalidQuery(String),
    #[error("expected w < 0, got {0}")]
    NonNegative(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesQuery {
    /// Derivative order.
    pub k: usize,
    pub w: f64,
    /// Highest power kept in the partial sum.
    pub m: usize,
    pub delta_ref: f64,
}

impl SeriesQuery {
    pub fn new(k: usize, w: f64, m: usize, delta_ref: f64) -> Result<Self, TaylorError> {
        if m > MAX_PARTIAL_ORDER {
            return Err(TaylorError::InvalidQuery(format!(
                "m = {m} exceeds {MAX_PARTIAL_ORDER}"
            )));
        }
        if !(delta_ref > 0.59 && delta_ref < 0.60) {
            return Err(TaylorError::InvalidQuery(format!(
                "delta_ref = {delta_ref} is not near δ"
            )));
        }
        if !w.is_finite() {
            return Err(TaylorError::InvalidQuery("w must be finite".into()));
        }
        Ok(Self { k, w, m, delta_ref })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummationOrder {
    Forward,
    Backward,
}

/// Partial sums over a shared coefficient table.
#[derive(Debug, Clone)]
pub struct TaylorEngine {
    table: CoefficientTable,
}

impl TaylorEngine {
    /// Table with indices `0 ..= max_index`.
    pub fn new(max_index: usize) -> Result<Self, TaylorError> {
        Ok(Self {
            table: CoefficientTable::new(max_index + 1)?,
        })
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    fn terms(&self, q: &SeriesQuery) -> Result<Vec<f64>, TaylorError> {
        let top = q.m + q.k;
        if top >= self.table.len() {
            return Err(SequenceError::Exhausted {
                index: top,
                len: self.table.len(),
            }
            .into());
        }
        (0..=q.m)
            .map(|ell| {
                let c = self
                    .table
                    .coefficient_over_factorial(ell + q.k, ell, q.delta_ref)?;
                Ok(if ell == 0 {
                    c
                } else {
                    c * q.w.powi(ell as i32)
                })
            })
            .collect()
    }

    pub fn partial_sum(&self, q: &SeriesQuery) -> Result<f64, TaylorError> {
        self.partial_sum_ordered(q, SummationOrder::Forward)
    }

    /// Kahan-compensated partial sum in the given order.
    pub fn partial_sum_ordered(
        &self,
        q: &SeriesQuery,
        order: SummationOrder,
    ) -> Result<f64, TaylorError> {
        let terms = self.terms(q)?;
        Ok(match order {
            SummationOrder::Forward => kahan_sum(terms.iter().copied()),
            SummationOrder::Backward => kahan_sum(terms.iter().rev().copied()),
        })
    }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `Σ_{ℓ=0}^{m} (δB_{ℓ+k} − A_{ℓ+k}) wˡ / ℓ!` with a table sized for the query.
pub fn taylor_partial_sum(q: &SeriesQuery) -> Result<f64, TaylorError> {
    TaylorEngine::new(q.m + q.k)?.partial_sum(q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderEstimate {
    pub m: usize,
    pub bound_shape: f64,
    /// The shape at m is below the shape at m/2.
    pub converged: bool,
}

/// Log of the remainder envelope with the unknown decay constant set to 0:
///
/// `(0.792e)^{N} (m+1)^{−1/2} N^k |w|^{m+1} / ln(N+1)^{N}`, `N = m+k+1`.
fn ln_remainder_shape(m: usize, k: usize, w: f64) -> f64 {
    let big_n = (m + k + 1) as f64;
    let mf = m as f64;
    big_n * (0.792f64.ln() + 1.0) - 0.5 * (mf + 1.0).ln()
        + k as f64 * big_n.ln()
        + (mf + 1.0) * w.abs().ln()
        - big_n * (big_n + 1.0).ln().ln()
}

/// Envelope of the m-th remainder; an upper-shape diagnostic, not a certified bound.
pub fn remainder_shape(m: usize, k: usize, w: f64) -> RemainderEstimate {
    let m = m.max(1);
    let here = ln_remainder_shape(m, k, w);
    let half = ln_remainder_shape(m / 2, k, w);
    RemainderEstimate {
        m,
        bound_shape: here.exp(),
        converged: here < half,
    }
}

/// Hardy's relation `δ = e(−γ + Σ_{k=1}^{terms} (−1)^{k+1} / (k·k!))`.
pub fn hardy_delta(terms: usize, gamma_ref: f64) -> f64 {
    let mut term_fact = 1.0;
    let mut sum = 0.0;
    for k in 1..=terms.max(1) {
        let kf = k as f64;
        term_fact /= kf;
        let t = term_fact / kf;
        sum += if k % 2 == 1 { t } else { -t };
    }
    E * (sum - gamma_ref)
}

/// Alternating-series bound on the error of [`hardy_delta`].
pub fn hardy_remainder_bound(terms: usize) -> f64 {
    let next = (terms + 1) as f64;
    let fact: f64 = (1..=terms + 1).map(|i| i as f64).product();
    E / (next * fact)
}

/// `G(w) + w`, which tends to `−γ` as `w → −∞`.
pub fn limit_gap(w: f64) -> Result<f64, TaylorError> {
    if w.is_nan() || w >= 0.0 {
        return Err(TaylorError::NonNegative(w));
    }
    Ok(g_function(w) + w)
}
