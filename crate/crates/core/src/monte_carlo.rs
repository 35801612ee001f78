//! Monte Carlo sampling of `Wₙ` and distributional tests.
//!
//! Two constructions are available:
//!
//! * [`SampleMethod::Nested`]: `Y₁ ~ Exp(1)`, then `Yⱼ ~ Exp(rate = Yⱼ₋₁)`,
//!   drawn as `Xⱼ / Yⱼ₋₁` and tracked on the log scale,
//! * [`SampleMethod::LogSum`]: `Wₙ = Σ_{j≤⌈n/2⌉} ln Xⱼ − Σ_{j>⌈n/2⌉} ln Xⱼ`.
//!
//! # Random source
//!
//! ChaCha8 is counter-based: the generator for `(seed, method)` is
//! `ChaCha8Rng::seed_from_u64(seed)` on stream 0 (nested) or 1 (log-sum).
//! Sample `i` consumes exactly `n` 64-bit words starting at word position
//! `2·n·i`, so any chunk can seek to its start and parallel generation
//! reproduces the sequential stream bit for bit.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::{wn_moments, SequenceIndex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonteCarloError {
    #[error("sample count must be positive")]
    EmptyBatch,
    #[error("inverse symmetry only holds for even n, got {0}")]
    OddIndex(u32),
    #[error("CLT check needs n >= 100, got {0}")]
    IndexTooSmall(u32),
    #[error("CLT check needs at least 10000 samples, got {0}")]
    TooFewSamples(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMethod {
    Nested,
    LogSum,
}

impl SampleMethod {
    fn stream(self) -> u64 {
        match self {
            SampleMethod::Nested => 0,
            SampleMethod::LogSum => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SampleMethod::Nested => "nested",
            SampleMethod::LogSum => "log_sum",
        }
    }
}

/// Draws of `Wₙ` (log scale).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub n: SequenceIndex,
    pub method: SampleMethod,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl SampleBatch {
    pub fn count(&self) -> usize {
        self.values.len()
    }

    fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistTestReport {
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub sample_count: usize,
}

impl DistTestReport {
    fn new(statistic: f64, threshold: f64, sample_count: usize) -> Self {
        Self {
            statistic,
            threshold,
            pass: statistic <= threshold,
            sample_count,
        }
    }
}

/// Asymptotic Kolmogorov critical value at α ≈ 0.01.
pub const KS_CRITICAL: f64 = 1.63;
/// Relaxed critical value for the CLT comparison, absorbing finite-n skew.
pub const CLT_CRITICAL: f64 = 2.2;

const CHUNK: usize = 1 << 14;
const TWO_POW_M53: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Uniform in `[2⁻⁵³, 1 − 2⁻⁵³]` from the top 52 bits: `(2k + 1) · 2⁻⁵³`.
#[inline]
fn open_uniform(bits: u64) -> f64 {
    let k = bits >> 12;
    (2 * k + 1) as f64 * TWO_POW_M53
}

/// `ln X` for `X = −ln U ~ Exp(1)`.
#[inline]
fn ln_exponential(bits: u64) -> f64 {
    let u = open_uniform(bits);
    // −ln U, accurate near U = 1 where 1 − U is exact
    let x = if u > 0.5 { -(u - 1.0).ln_1p() } else { -u.ln() };
    x.ln()
}

fn draw(n: u32, method: SampleMethod, rng: &mut ChaCha8Rng) -> f64 {
    match method {
        SampleMethod::Nested => {
            // Y₁ = X₁; Yⱼ = Xⱼ / Yⱼ₋₁ is Exp with rate Yⱼ₋₁
            let mut w = ln_exponential(rng.next_u64());
            for _ in 1..n {
                w = ln_exponential(rng.next_u64()) - w;
            }
            w
        }
        SampleMethod::LogSum => {
            let plus = n.div_ceil(2);
            let mut w = 0.0;
            for j in 0..n {
                let lx = ln_exponential(rng.next_u64());
                if j < plus {
                    w += lx;
                } else {
                    w -= lx;
                }
            }
            w
        }
    }
}

/// Draws `count` values of `Wₙ`; parallel over chunks, deterministic in
/// `(n, method, seed, count)` regardless of thread count.
pub fn sample_wn(
    n: SequenceIndex,
    count: usize,
    seed: u64,
    method: SampleMethod,
) -> Result<SampleBatch, MonteCarloError> {
    if count == 0 {
        return Err(MonteCarloError::EmptyBatch);
    }
    let mut values = vec![0.0; count];
    let words_per_sample = 2 * n.get() as u128;
    values
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(chunk, out)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(method.stream());
            rng.set_word_pos((chunk * CHUNK) as u128 * words_per_sample);
            for v in out.iter_mut() {
                *v = draw(n.get(), method, &mut rng);
            }
        });
    Ok(SampleBatch {
        n,
        method,
        seed,
        values,
    })
}

/// Fraction of draws `≤ point` and its binomial standard error.
pub fn empirical_cdf_at(batch: &SampleBatch, point: f64) -> (f64, f64) {
    let c = batch.count().max(1) as f64;
    let hits = batch.values.iter().filter(|&&v| v <= point).count() as f64;
    let p = hits / c;
    (p, (p * (1.0 - p) / c).sqrt())
}

/// One-sample Kolmogorov–Smirnov distance to `reference`, threshold `1.63/√N`.
pub fn ks_test<F: Fn(f64) -> f64>(batch: &SampleBatch, reference: F) -> DistTestReport {
    let sorted = batch.sorted();
    let d = ks_statistic(&sorted, reference);
    let n = sorted.len();
    DistTestReport::new(d, KS_CRITICAL / (n as f64).sqrt(), n)
}

fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], reference: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = reference(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Two-sample KS distance between sorted samples.
pub fn ks_two_sample_statistic(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Two-sample KS between two batches, threshold `1.63·√((Na + Nb)/(Na·Nb))`.
pub fn two_sample_check(a: &SampleBatch, b: &SampleBatch) -> DistTestReport {
    let d = ks_two_sample_statistic(&a.sorted(), &b.sorted());
    let (na, nb) = (a.count() as f64, b.count() as f64);
    let threshold = KS_CRITICAL * ((na + nb) / (na * nb)).sqrt();
    DistTestReport::new(d, threshold, a.count().min(b.count()))
}

/// Nested construction against the log-sum construction.
pub fn equivalence_check(
    n: SequenceIndex,
    count: usize,
    seed_a: u64,
    seed_b: u64,
) -> Result<DistTestReport, MonteCarloError> {
    let nested = sample_wn(n, count, seed_a, SampleMethod::Nested)?;
    let log_sum = sample_wn(n, count, seed_b, SampleMethod::LogSum)?;
    Ok(two_sample_check(&nested, &log_sum))
}

/// `Wₙ` against `−Wₙ`, i.e. `Yₙ` against `1/Yₙ`.
pub fn inverse_symmetry_check(
    n: SequenceIndex,
    count: usize,
    seed: u64,
) -> Result<DistTestReport, MonteCarloError> {
    if n.is_odd() {
        return Err(MonteCarloError::OddIndex(n.get()));
    }
    let batch = sample_wn(n, count, seed, SampleMethod::LogSum)?;
    Ok(symmetry_report(&batch))
}

/// Two-sample KS between the first half of the batch and the negated second
/// half. Comparing the batch with its own negation would correlate the two
/// empirical CDFs and roughly double the null variance near 0, so the
/// independent-sample threshold would no longer apply.
pub fn symmetry_report(batch: &SampleBatch) -> DistTestReport {
    let half = batch.count() / 2;
    let mut a = batch.values[..half].to_vec();
    let mut b: Vec<f64> = batch.values[half..].iter().map(|v| -v).collect();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    if a.is_empty() {
        return DistTestReport::new(0.0, f64::INFINITY, 0);
    }
    let d = ks_two_sample_statistic(&a, &b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    DistTestReport::new(d, KS_CRITICAL * ((na + nb) / (na * nb)).sqrt(), a.len())
}

/// Which parity's centre the standardized draws are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// `Wₙ / (π√(n/6))` against the normal law with unit variance centred at
/// the standardized mean (`−γ/(π√(n/6))` for odd n, 0 for even n).
pub fn clt_check(
    n: SequenceIndex,
    count: usize,
    seed: u64,
) -> Result<DistTestReport, MonteCarloError> {
    let parity = if n.is_odd() {
        Parity::Odd
    } else {
        Parity::Even
    };
    clt_check_centered(n, count, seed, parity)
}

/// [`clt_check`] with the reference centre chosen explicitly.
pub fn clt_check_centered(
    n: SequenceIndex,
    count: usize,
    seed: u64,
    centre: Parity,
) -> Result<DistTestReport, MonteCarloError> {
    if n.get() < 100 {
        return Err(MonteCarloError::IndexTooSmall(n.get()));
    }
    if count < 10_000 {
        return Err(MonteCarloError::TooFewSamples(count));
    }
    let batch = sample_wn(n, count, seed, SampleMethod::LogSum)?;
    Ok(clt_report(&batch, centre))
}

/// Standardized KS distance of an existing batch to the CLT reference.
pub fn clt_report(batch: &SampleBatch, centre: Parity) -> DistTestReport {
    let scale = PI * (batch.n.get() as f64 / 6.0).sqrt();
    let mean = match centre {
        Parity::Odd => -crate::constants::EULER_GAMMA / scale,
        Parity::Even => 0.0,
    };
    let mut sorted: Vec<f64> = batch.values.iter().map(|v| v / scale).collect();
    sorted.sort_by(f64::total_cmp);
    let d = ks_statistic(&sorted, |x| normal_cdf(x - mean));
    let count = sorted.len();
    DistTestReport::new(d, CLT_CRITICAL / (count as f64).sqrt(), count)
}

/// Sample moments against the exact mean and variance of `Wₙ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
    pub reference_mean: f64,
    pub reference_variance: f64,
    pub pass: bool,
}

/// Standard errors allowed by [`moment_check`].
pub const MOMENT_SE_LIMIT: f64 = 5.0;

/// Mean and variance within 5 standard errors; the variance SE uses the
/// sample fourth central moment.
pub fn moment_check(batch: &SampleBatch) -> MomentReport {
    let c = batch.count() as f64;
    let mean = batch.values.par_iter().sum::<f64>() / c;
    let (m2, m4) = batch
        .values
        .par_iter()
        .map(|v| {
            let d = v - mean;
            let d2 = d * d;
            (d2, d2 * d2)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let (m2, m4) = (m2 / c, m4 / c);
    let variance = m2 * c / (c - 1.0).max(1.0);
    let mean_se = (variance / c).sqrt();
    let variance_se = ((m4 - m2 * m2).max(0.0) / c).sqrt();
    let (reference_mean, reference_variance) = wn_moments(batch.n);
    let pass = (mean - reference_mean).abs() <= MOMENT_SE_LIMIT * mean_se
        && (variance - reference_variance).abs() <= MOMENT_SE_LIMIT * variance_se;
    MomentReport {
        mean,
        variance,
        mean_se,
        variance_se,
        reference_mean,
        reference_variance,
        pass,
    }
}

/// Standard normal CDF, `Φ(x) = erfc(−x/√2)/2`.
pub fn normal_cdf(x: f64) -> f64 {
    let t = x / std::f64::consts::SQRT_2;
    if t >= 0.0 {
        1.0 - 0.5 * erfc_pos(t)
    } else {
        0.5 * erfc_pos(-t)
    }
}

/// erfc(t) for t ≥ 0 via the regularized incomplete gamma Q(1/2, t²).
fn erfc_pos(t: f64) -> f64 {
    let x = t * t;
    let a = 0.5;
    let ln_gamma_half = 0.5 * PI.ln();
    if x < a + 1.0 {
        // series for P(a, x)
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        1.0 - sum * (-x + a * x.ln() - ln_gamma_half).exp()
    } else {
        // Lentz continued fraction for Q(a, x)
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x + a * x.ln() - ln_gamma_half).exp() * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{EULER_GAMMA, EULER_GOMPERTZ};
    use crate::distribution::{cdf_w3, logistic};

    fn idx(n: u32) -> SequenceIndex {
        SequenceIndex::new(n).unwrap()
    }

    #[test]
    fn uniform_endpoints() {
        assert_eq!(open_uniform(0), TWO_POW_M53);
        assert_eq!(open_uniform(u64::MAX), 1.0 - TWO_POW_M53);
        assert!(ln_exponential(0).is_finite());
        assert!(ln_exponential(u64::MAX).is_finite());
    }

    #[test]
    fn normal_cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        // scipy.stats.norm.cdf
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-14);
        assert!((normal_cdf(-2.5) - 0.006_209_665_325_776_132).abs() < 1e-15);
        assert!((normal_cdf(0.3) - 0.617_911_422_188_953_2).abs() < 1e-14);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        for method in [SampleMethod::Nested, SampleMethod::LogSum] {
            let a = one.install(|| sample_wn(idx(5), 50_000, 11, method).unwrap());
            let b = four.install(|| sample_wn(idx(5), 50_000, 11, method).unwrap());
            let c = sample_wn(idx(5), 50_000, 11, method).unwrap();
            assert!(a
                .values
                .iter()
                .zip(&b.values)
                .all(|(x, y)| x.to_bits() == y.to_bits()));
            assert_eq!(a, c);
        }
    }

    #[test]
    fn prefix_stability() {
        // a shorter batch is a prefix of a longer one with the same seed
        let short = sample_wn(idx(3), 20_000, 5, SampleMethod::LogSum).unwrap();
        let long = sample_wn(idx(3), 40_000, 5, SampleMethod::LogSum).unwrap();
        assert_eq!(&long.values[..20_000], &short.values[..]);
    }

    #[test]
    fn single_draw_and_empty() {
        let one = sample_wn(idx(2), 1, 3, SampleMethod::Nested).unwrap();
        let (p, _) = empirical_cdf_at(&one, 0.0);
        assert!(p == 0.0 || p == 1.0);
        assert_eq!(
            sample_wn(idx(2), 0, 3, SampleMethod::Nested),
            Err(MonteCarloError::EmptyBatch)
        );
    }

    #[test]
    fn first_member_top_heavy() {
        let b = sample_wn(idx(1), 200_000, 1, SampleMethod::LogSum).unwrap();
        let (p, se) = empirical_cdf_at(&b, 0.0);
        assert!((p - 0.632_120).abs() < 4.0 * (0.632 * 0.368 / 200_000f64).sqrt());
        assert!(se > 0.0);
    }

    #[test]
    fn kappa_estimates() {
        let b4 = sample_wn(idx(4), 200_000, 2, SampleMethod::Nested).unwrap();
        let (p, se) = empirical_cdf_at(&b4, 0.0);
        assert!((p - 0.5).abs() < 4.0 * se);
        let b3 = sample_wn(idx(3), 200_000, 3, SampleMethod::Nested).unwrap();
        let (p, se) = empirical_cdf_at(&b3, 0.0);
        assert!((p - EULER_GOMPERTZ).abs() < 4.0 * se);
    }

    #[test]
    fn odd_members_top_heavy_and_decreasing() {
        let mut previous = 1.0;
        for n in [1u32, 3, 5, 7] {
            let b = sample_wn(idx(n), 1_000_000, 70 + n as u64, SampleMethod::Nested).unwrap();
            let (p, se) = empirical_cdf_at(&b, 0.0);
            assert!(p - 0.5 > 4.0 * se, "n = {n}: {p}");
            assert!(p < previous, "n = {n}: {p} vs {previous}");
            previous = p;
        }
    }

    #[test]
    fn means_match_exact_moments() {
        let b2 = sample_wn(idx(2), 1_000_000, 21, SampleMethod::LogSum).unwrap();
        let r2 = moment_check(&b2);
        assert!(r2.mean.abs() < 4.0 * (PI * PI / 3.0 / 1e6).sqrt());
        let b3 = sample_wn(idx(3), 1_000_000, 22, SampleMethod::Nested).unwrap();
        let r3 = moment_check(&b3);
        assert!((r3.mean + EULER_GAMMA).abs() < 4.0 * (PI * PI / 2.0 / 1e6).sqrt());
        assert!(r2.pass && r3.pass);
    }

    #[test]
    fn ks_against_closed_forms() {
        let b2 = sample_wn(idx(2), 100_000, 31, SampleMethod::Nested).unwrap();
        assert!(ks_test(&b2, logistic).pass);
        assert!(!ks_test(&b2, |w| logistic(w - 1.0)).pass);
        let b3 = sample_wn(idx(3), 100_000, 32, SampleMethod::LogSum).unwrap();
        let r = ks_test(&b3, |w| cdf_w3(w).value());
        assert!(r.pass, "{r:?}");
        assert_eq!(r.sample_count, 100_000);
        assert!((r.threshold - 1.63 / 100_000f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constructions_agree() {
        assert!(equivalence_check(idx(3), 100_000, 41, 42).unwrap().pass);
        assert!(equivalence_check(idx(6), 100_000, 43, 44).unwrap().pass);
        let nested3 = sample_wn(idx(3), 100_000, 45, SampleMethod::Nested).unwrap();
        let log5 = sample_wn(idx(5), 100_000, 46, SampleMethod::LogSum).unwrap();
        assert!(!two_sample_check(&nested3, &log5).pass);
    }

    #[test]
    fn even_members_are_self_inverse() {
        assert!(inverse_symmetry_check(idx(2), 100_000, 51).unwrap().pass);
        assert!(inverse_symmetry_check(idx(4), 100_000, 52).unwrap().pass);
        assert_eq!(
            inverse_symmetry_check(idx(3), 100_000, 53),
            Err(MonteCarloError::OddIndex(3))
        );
        let odd = sample_wn(idx(3), 100_000, 54, SampleMethod::LogSum).unwrap();
        assert!(!symmetry_report(&odd).pass);
    }

    #[test]
    fn central_limit() {
        assert!(clt_check(idx(200), 50_000, 61).unwrap().pass);
        assert!(clt_check(idx(201), 50_000, 62).unwrap().pass);
        assert!(
            !clt_check_centered(idx(200), 50_000, 61, Parity::Odd)
                .unwrap()
                .pass
        );
        assert_eq!(
            clt_check(idx(50), 50_000, 1),
            Err(MonteCarloError::IndexTooSmall(50))
        );
        assert_eq!(
            clt_check(idx(200), 500, 1),
            Err(MonteCarloError::TooFewSamples(500))
        );
    }

    #[test]
    fn two_sample_statistic_basics() {
        assert_eq!(ks_two_sample_statistic(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample_statistic(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample_statistic(&[1.0, 3.0], &[2.0, 4.0]) - 0.5).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]
            #[test]
            fn regenerating_is_bit_identical(seed in any::<u64>(), n in 1u32..12, count in 1usize..40_000) {
                let a = sample_wn(idx(n), count, seed, SampleMethod::Nested).unwrap();
                let b = sample_wn(idx(n), count, seed, SampleMethod::Nested).unwrap();
                prop_assert_eq!(a.values.len(), count);
                prop_assert!(a.values.iter().all(|v| v.is_finite()));
                prop_assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
            }
        }
    }
}
