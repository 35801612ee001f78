//! Acceptance suite: eight criteria covering the constants, inversion,
//! integer tables, Taylor expansion, limits and the Monte Carlo harness.
//!
//! Each criterion reports its worst measured discrepancy, the tolerance it
//! was held to, and its wall time against a runtime limit. A criterion
//! passes only if both the numerical check and the time limit hold.

use std::f64::consts::E;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constants::{EULER_GAMMA, EULER_GOMPERTZ};
use crate::distribution::{cdf_w3, g_derivatives, logistic, SequenceIndex};
use crate::inversion::{cdf_wn, kappa, QuadratureConfig};
use crate::monte_carlo::{
    clt_check, equivalence_check, inverse_symmetry_check, moment_check, sample_wn, SampleMethod,
};
use crate::oracles::{
    bell_triangle, euler_maclaurin_gamma, gould_via_complementary_bell,
    gould_via_finite_differences,
};
use crate::sequences::{berend_tassa_log_bound, ln_big, CoefficientTable};
use crate::special::{expint_ei, NegativeArgument};
use crate::taylor::{hardy_delta, limit_gap, SeriesQuery, TaylorEngine};

/// `κₙ = F_{Yₙ}(1)` for n = 1 … 8, truncated (not rounded) to six decimals.
pub const KAPPA_TABLE: [f64; 8] = [0.632120, 0.5, 0.596347, 0.5, 0.577215, 0.5, 0.566094, 0.5];

/// True when the first `digits` decimals of `value` are those of `printed`,
/// i.e. `printed ≤ value < printed + 10^−digits`.
pub fn truncates_to(value: f64, printed: f64, digits: i32) -> bool {
    let scale = 10f64.powi(digits);
    (value * scale).floor() == (printed * scale).round()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Criteria 1–7 in full; Monte Carlo at 10⁵ samples.
    Quick,
    /// Everything, Monte Carlo at 10⁶ samples.
    Full,
}

impl Profile {
    pub fn mc_samples(self) -> usize {
        match self {
            Profile::Quick => 100_000,
            Profile::Full => 1_000_000,
        }
    }

    fn mc_runtime_limit_ms(self) -> u64 {
        match self {
            Profile::Quick => 45_000,
            Profile::Full => 15 * 60 * 1000,
        }
    }
}

/// Reference constants the suite checks against. Overriding them is how the
/// suite's own sensitivity is tested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub profile: Profile,
    pub delta_ref: f64,
    pub gamma_ref: f64,
}

impl VerifyOptions {
    pub fn new(profile: Profile) -> Self {
        Self {
            profile,
            delta_ref: EULER_GOMPERTZ,
            gamma_ref: EULER_GAMMA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub criterion: u8,
    pub name: String,
    pub pass: bool,
    /// Worst discrepancy observed (or worst statistic-to-threshold ratio).
    pub measured: f64,
    pub tolerance: f64,
    pub runtime_ms: u64,
    pub runtime_limit_ms: u64,
    pub detail: String,
}

impl VerificationReport {
    /// One human-readable line.
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] criterion {} {}: measured {:.3e} tol {:.3e} time {} ms (limit {} ms) {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.measured,
            self.tolerance,
            self.runtime_ms,
            self.runtime_limit_ms,
            self.detail
        )
    }
}

struct Check {
    measured: f64,
    tolerance: f64,
    ok: bool,
    detail: String,
}

impl Check {
    fn within(measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            measured,
            tolerance,
            ok: measured <= tolerance,
            detail,
        }
    }
}

fn timed(
    criterion: u8,
    name: &str,
    limit_ms: u64,
    f: impl FnOnce() -> Check,
) -> VerificationReport {
    let start = Instant::now();
    let c = f();
    let runtime_ms = start.elapsed().as_millis() as u64;
    let detail = if runtime_ms > limit_ms {
        format!("{} (over time limit)", c.detail)
    } else {
        c.detail
    };
    VerificationReport {
        criterion,
        name: name.to_string(),
        pass: c.ok && c.measured.is_finite() && runtime_ms <= limit_ms,
        measured: c.measured,
        tolerance: c.tolerance,
        runtime_ms,
        runtime_limit_ms: limit_ms,
        detail,
    }
}

fn idx(n: u32) -> SequenceIndex {
    SequenceIndex::new(n).expect("positive index")
}

/// Failed computations count as an infinite discrepancy.
fn or_inf<E>(r: Result<f64, E>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

pub fn criterion_table(_opts: &VerifyOptions) -> VerificationReport {
    timed(1, "kappa table n=1..8", 5_000, || {
        let mut worst = 0.0f64;
        let mut mismatches = Vec::new();
        let mut values = Vec::new();
        for (i, &want) in KAPPA_TABLE.iter().enumerate() {
            let n = idx(i as u32 + 1);
            let got = or_inf(kappa(n, &QuadratureConfig::for_index(n)).map(|r| r.value));
            worst = worst.max((got - want).abs());
            if !truncates_to(got, want, 6) {
                mismatches.push(n.get());
            }
            values.push(format!("{got:.9}"));
        }
        Check {
            measured: worst,
            tolerance: 1e-6,
            ok: mismatches.is_empty(),
            detail: format!(
                "kappa = [{}] digit mismatches {mismatches:?}",
                values.join(", ")
            ),
        }
    })
}

pub fn criterion_delta(opts: &VerifyOptions) -> VerificationReport {
    timed(2, "delta triple agreement", 1_000, || {
        let n = idx(3);
        let by_inversion = or_inf(kappa(n, &QuadratureConfig::for_index(n)).map(|r| r.value));
        let by_ei = -E * expint_ei(NegativeArgument::new(-1.0).expect("negative"));
        let by_series = hardy_delta(30, opts.gamma_ref);
        let all = [by_inversion, by_ei, by_series, opts.delta_ref];
        let mut worst = 0.0f64;
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                worst = worst.max((a - b).abs());
            }
        }
        Check::within(
            worst,
            1e-10,
            format!(
                "inversion {by_inversion:.15} ei {by_ei:.15} series {by_series:.15} stored {:.15}",
                opts.delta_ref
            ),
        )
    })
}

pub fn criterion_gamma(_opts: &VerifyOptions) -> VerificationReport {
    timed(3, "kappa(5) equals gamma", 2_000, || {
        let n = idx(5);
        let k5 = or_inf(kappa(n, &QuadratureConfig::for_index(n)).map(|r| r.value));
        let gamma = euler_maclaurin_gamma();
        Check::within(
            (k5 - gamma).abs(),
            1e-9,
            format!("kappa(5) {k5:.15} gamma {gamma:.15}"),
        )
    })
}

pub fn criterion_closed_forms(_opts: &VerifyOptions) -> VerificationReport {
    timed(4, "closed forms vs inversion", 10_000, || {
        let (n2, n3) = (idx(2), idx(3));
        let (c2, c3) = (
            QuadratureConfig::for_index(n2),
            QuadratureConfig::for_index(n3),
        );
        let mut worst2 = 0.0f64;
        let mut worst3 = 0.0f64;
        for i in 0..25 {
            let w = -8.0 + 16.0 * i as f64 / 24.0;
            let a = or_inf(cdf_wn(n2, w, &c2).map(|r| r.value));
            worst2 = worst2.max((a - logistic(w)).abs());
            let b = or_inf(cdf_wn(n3, w, &c3).map(|r| r.value));
            worst3 = worst3.max((b - cdf_w3(w).value()).abs());
        }
        Check::within(
            worst2.max(worst3),
            1e-9,
            format!("n=2 {worst2:.2e} n=3 {worst3:.2e}"),
        )
    })
}

pub fn criterion_integers(opts: &VerifyOptions) -> VerificationReport {
    timed(5, "Bell and Gould tables", 2_000, || {
        const COUNT: usize = 61;
        let mut failures = Vec::new();
        let table = match CoefficientTable::new(COUNT) {
            Ok(t) => t,
            Err(e) => {
                return Check {
                    measured: f64::INFINITY,
                    tolerance: 0.0,
                    ok: false,
                    detail: e.to_string(),
                }
            }
        };
        let tri = bell_triangle(COUNT);
        let gould = gould_via_complementary_bell(COUNT);
        for k in 0..COUNT {
            let row = &table.rows()[k];
            if row.bell != tri[k] {
                failures.push(format!("bell k={k}"));
            }
            if row.gould != gould[k] {
                failures.push(format!("gould k={k}"));
            }
        }
        for (k, a) in gould_via_finite_differences(6, opts.delta_ref)
            .iter()
            .enumerate()
        {
            if table.rows()[k].gould != (*a as u64).into() {
                failures.push(format!("gould fd k={k}"));
            }
        }
        for ell in 1..=50 {
            if ln_big(&table.rows()[ell].bell) >= berend_tassa_log_bound(ell) {
                failures.push(format!("bound l={ell}"));
            }
        }
        let g20 = or_inf(table.ratio_gap(20, opts.delta_ref));
        let g40 = or_inf(table.ratio_gap(40, opts.delta_ref));
        if g40 >= g20 {
            failures.push("gap(40) >= gap(20)".into());
        }
        Check {
            measured: failures.len() as f64,
            tolerance: 0.0,
            ok: failures.is_empty(),
            detail: if failures.is_empty() {
                format!("exact to k=60, gap(20) {g20:.2e} gap(40) {g40:.2e}")
            } else {
                failures.join(", ")
            },
        }
    })
}

pub fn criterion_taylor(opts: &VerifyOptions) -> VerificationReport {
    timed(6, "Taylor convergence", 5_000, || {
        const M_MAX: usize = 120;
        let engine = match TaylorEngine::new(M_MAX + 2) {
            Ok(e) => e,
            Err(e) => {
                return Check {
                    measured: f64::INFINITY,
                    tolerance: 1e-8,
                    ok: false,
                    detail: e.to_string(),
                }
            }
        };
        let mut worst_best = 0.0f64;
        let mut orders = Vec::new();
        for k in 0..=2 {
            for w in [-2.0, -0.5, 0.5, 1.0] {
                let oracle = g_derivatives(w, k).values[k];
                let mut best = f64::INFINITY;
                let mut hit = None;
                for m in 0..=M_MAX {
                    let gap = SeriesQuery::new(k, w, m, opts.delta_ref)
                        .and_then(|q| engine.partial_sum(&q))
                        .map(|p| (p - oracle).abs())
                        .unwrap_or(f64::INFINITY);
                    best = best.min(gap);
                    if gap <= 1e-8 {
                        hit = Some(m);
                        break;
                    }
                }
                worst_best = worst_best.max(best);
                orders.push(match hit {
                    Some(m) => format!("({k},{w}):m={m}"),
                    None => format!("({k},{w}):none"),
                });
            }
        }
        Check::within(worst_best, 1e-8, orders.join(" "))
    })
}

pub fn criterion_limit(opts: &VerifyOptions) -> VerificationReport {
    timed(7, "G(w)+w tends to -gamma", 1_000, || {
        let gap = or_inf(limit_gap(-30.0));
        Check::within(
            (gap + opts.gamma_ref).abs(),
            1e-11,
            format!("G(-30)-30 = {gap:.15}"),
        )
    })
}

pub fn criterion_monte_carlo(opts: &VerifyOptions) -> VerificationReport {
    let profile = opts.profile;
    timed(
        8,
        "Monte Carlo suite",
        profile.mc_runtime_limit_ms(),
        || {
            let count = profile.mc_samples();
            let mut failures = Vec::new();
            // ratio of statistic to threshold; below 1 passes
            let mut worst = 0.0f64;
            for n in 1..=8u32 {
                match sample_wn(idx(n), count, 1000 + n as u64, SampleMethod::Nested) {
                    Ok(batch) => {
                        let m = moment_check(&batch);
                        let zm = (m.mean - m.reference_mean).abs() / m.mean_se;
                        let zv = (m.variance - m.reference_variance).abs() / m.variance_se;
                        worst = worst.max(zm.max(zv) / 5.0);
                        if !m.pass {
                            failures.push(format!("moments n={n} z=({zm:.2},{zv:.2})"));
                        }
                    }
                    Err(e) => failures.push(format!("moments n={n}: {e}")),
                }
            }
            let mut record =
                |label: String, r: Result<crate::monte_carlo::DistTestReport, _>| match r {
                    Ok(rep) => {
                        worst = worst.max(rep.statistic / rep.threshold);
                        if !rep.pass {
                            failures.push(format!(
                                "{label} D={:.4e} thr={:.4e}",
                                rep.statistic, rep.threshold
                            ));
                        }
                    }
                    Err(e) => failures.push(format!("{label}: {e}")),
                };
            for n in [3u32, 6] {
                record(
                    format!("equivalence n={n}"),
                    equivalence_check(idx(n), count, 2000 + n as u64, 3000 + n as u64),
                );
            }
            for n in [2u32, 4] {
                record(
                    format!("symmetry n={n}"),
                    inverse_symmetry_check(idx(n), count, 4000 + n as u64),
                );
            }
            for n in [200u32, 201] {
                record(
                    format!("clt n={n}"),
                    clt_check(idx(n), count, 5000 + n as u64),
                );
            }
            Check {
                measured: worst,
                tolerance: 1.0,
                ok: failures.is_empty(),
                detail: if failures.is_empty() {
                    format!("{count} samples per batch")
                } else {
                    failures.join(", ")
                },
            }
        },
    )
}

/// Runs every criterion in index order.
pub fn run_all(opts: &VerifyOptions) -> Vec<VerificationReport> {
    let criteria: [fn(&VerifyOptions) -> VerificationReport; 8] = [
        criterion_table,
        criterion_delta,
        criterion_gamma,
        criterion_closed_forms,
        criterion_integers,
        criterion_taylor,
        criterion_limit,
        criterion_monte_carlo,
    ];
    criteria.iter().map(|c| c(opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        let opts = VerifyOptions::new(Profile::Quick);
        for r in [
            criterion_delta(&opts),
            criterion_gamma(&opts),
            criterion_limit(&opts),
        ] {
            assert!(r.pass, "{}", r.summary_line());
        }
    }

    #[test]
    fn corrupted_delta_is_caught() {
        let opts = VerifyOptions {
            delta_ref: EULER_GOMPERTZ + 1e-6,
            ..VerifyOptions::new(Profile::Quick)
        };
        assert!(!criterion_delta(&opts).pass);
        assert!(!criterion_taylor(&opts).pass);
    }

    #[test]
    fn corrupted_gamma_is_caught() {
        let opts = VerifyOptions {
            gamma_ref: EULER_GAMMA + 1e-9,
            ..VerifyOptions::new(Profile::Quick)
        };
        assert!(!criterion_limit(&opts).pass);
    }
}
