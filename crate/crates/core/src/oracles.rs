//! Independent reference computations.
//!
//! Each routine reaches its answer by a different path from the production
//! code it is compared against, so agreement is evidence rather than an echo.
//! They are used by the unit tests and by the verification suite.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::distribution::g_function;

/// Bell numbers from the Bell (Aitken) triangle: each row starts with the
/// last entry of the previous row and adds the entry above.
pub fn bell_triangle(count: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut row = vec![BigUint::one()];
    out.push(BigUint::one());
    while out.len() < count {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap_or_default());
        for prev in &row {
            let v = next.last().unwrap() + prev;
            next.push(v);
        }
        out.push(next[0].clone());
        row = next;
    }
    out
}

/// Gould numbers from Stirling numbers of the second kind.
///
/// The exponential generating function `a(w)` of `A_k` solves
/// `a' = eʷ a + 1, a(0) = 0`, hence `a = e^{eʷ−1} ∫₀ʷ e^{1−eˢ} ds`. The second
/// factor integrates the complementary Bell numbers
/// `φ_k = Σ_j (−1)^j S(k, j)`, giving `A_k = Σ_{j≥1} C(k, j) B_{k−j} φ_{j−1}`.
pub fn gould_via_complementary_bell(count: usize) -> Vec<BigUint> {
    if count == 0 {
        return Vec::new();
    }
    let bell = bell_triangle(count);
    // Stirling triangle S(k, j), k < count
    let mut stirling: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for k in 1..count {
        let prev = &stirling[k - 1];
        let mut row = vec![BigInt::zero(); k + 1];
        for (j, slot) in row.iter_mut().enumerate().skip(1) {
            let keep = prev.get(j).cloned().unwrap_or_default() * BigInt::from(j);
            *slot = keep + &prev[j - 1];
        }
        stirling.push(row);
    }
    let phi: Vec<BigInt> = stirling
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, s)| if j % 2 == 0 { s.clone() } else { -s.clone() })
                .sum()
        })
        .collect();

    (0..count)
        .map(|k| {
            let mut binom = BigInt::one(); // C(k, 0)
            let mut total = BigInt::zero();
            for j in 1..=k {
                binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j);
                let b = BigInt::from_biguint(Sign::Plus, bell[k - j].clone());
                total += &binom * b * &phi[j - 1];
            }
            total.to_biguint().expect("Gould numbers are non-negative")
        })
        .collect()
}

/// Fornberg's finite-difference weights for the `order`-th derivative at `x0`.
pub fn fornberg_weights(order: usize, x0: f64, nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// `G^{(k)}(0)` by a wide central finite-difference stencil on the closed form.
pub fn g_derivative_finite_difference(k: usize) -> f64 {
    if k == 0 {
        return g_function(0.0);
    }
    let h = 0.05;
    let half = k / 2 + 4;
    let nodes: Vec<f64> = (-(half as i64)..=half as i64)
        .map(|i| i as f64 * h)
        .collect();
    let weights = fornberg_weights(k, 0.0, &nodes);
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, wt)| wt * g_function(x))
        .sum()
}

/// Gould numbers recovered as `round(δB_k − G^{(k)}(0))`, with the derivative
/// from finite differences and `B_k` from the Bell triangle. Only reliable for
/// small k (the rounding margin of ±0.5 is lost past k ≈ 6).
pub fn gould_via_finite_differences(count: usize, delta_ref: f64) -> Vec<i64> {
    let bell = bell_triangle(count);
    (0..count)
        .map(|k| {
            let b: f64 = bell[k].to_string().parse().unwrap_or(f64::INFINITY);
            (delta_ref * b - g_derivative_finite_difference(k)).round() as i64
        })
        .collect()
}

/// γ by Euler–Maclaurin on the harmonic sum at N = 20:
/// `γ = H_N − ln N − 1/(2N) + Σ_k B_{2k} / (2k N^{2k})`.
pub fn euler_maclaurin_gamma() -> f64 {
    const N: u32 = 20;
    let n = N as f64;
    // sum small terms first
    let harmonic: f64 = (1..=N).rev().map(|k| 1.0 / k as f64).sum();
    let bernoulli = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];
    let mut corr = 0.0;
    for (i, b) in bernoulli.iter().enumerate().rev() {
        let two_k = 2 * (i + 1);
        corr += b / (two_k as f64 * n.powi(two_k as i32));
    }
    harmonic - n.ln() - 0.5 / n + corr
}

/// Adaptive Simpson quadrature, kept apart from the Gauss–Legendre code it
/// is used to check.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `F_{W₃}(w)` from its integral form `∫₀^∞ e^{w−t} / (t + eʷ) dt`,
/// truncated at t = 60.
pub fn cdf_w3_by_quadrature(w: f64) -> f64 {
    let ew = w.exp();
    let f = |t: f64| (w - t).exp() / (t + ew);
    adaptive_simpson(&f, 0.0, 60.0, 1e-13)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn triangle_first_values() {
        let b: Vec<String> = bell_triangle(8).iter().map(|x| x.to_string()).collect();
        assert_eq!(b, ["1", "1", "2", "5", "15", "52", "203", "877"]);
        assert!(bell_triangle(0).is_empty());
    }

    #[test]
    fn stirling_route_first_values() {
        let a: Vec<String> = gould_via_complementary_bell(10)
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(
            a,
            ["0", "1", "1", "3", "9", "31", "121", "523", "2469", "12611"]
        );
    }

    #[test]
    fn em_gamma_digits() {
        assert!((euler_maclaurin_gamma() - 0.577_215_664_901_532_860_6).abs() < 2e-16);
    }

    #[test]
    fn fornberg_second_derivative() {
        let w = fornberg_weights(2, 0.0, &[-1.0, 0.0, 1.0]);
        assert!(
            (w[0] - 1.0).abs() < 1e-15 && (w[1] + 2.0).abs() < 1e-15 && (w[2] - 1.0).abs() < 1e-15
        );
    }

    #[test]
    fn quadrature_cdf_w3_at_ln2() {
        // mpmath: 2 e² E1(2)
        assert!((cdf_w3_by_quadrature(2f64.ln()) - 0.722_657_233_776_445_2).abs() < 1e-10);
    }
}
