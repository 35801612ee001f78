//! Globally adaptive Gauss–Legendre quadrature on a finite interval.
//!
//! Each panel carries a coarse estimate (one rule on the panel) and a fine
//! estimate (the rule on both halves); their difference is the panel's error
//! estimate. The panel with the largest error is bisected until the summed
//! error drops below the tolerance or the node budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an n-point Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// The shared 20-point rule.
    pub fn standard() -> &'static Self {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| Self::new(20))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        s * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome {
    pub value: f64,
    pub est_error: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// `initial_panels` uniform panels seed the refinement, which helps with
/// oscillatory integrands whose coarse and fine estimates could agree by
/// accident on one wide panel.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_nodes: usize,
    initial_panels: usize,
) -> QuadratureOutcome {
    let rule = GaussLegendre::standard();
    let n = rule.len();
    let mut nodes_used = 0usize;
    let make_panel = |lo: f64, hi: f64, coarse: f64, used: &mut usize| {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(f, lo, mid);
        let right = rule.integrate(f, mid, hi);
        *used += 2 * n;
        Panel {
            a: lo,
            b: hi,
            left,
            right,
            err: (left + right - coarse).abs(),
        }
    };

    let panels = initial_panels.max(1);
    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(4 * panels);
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        let coarse = rule.integrate(f, lo, hi);
        nodes_used += n;
        heap.push(make_panel(lo, hi, coarse, &mut nodes_used));
    }

    let total_err = |h: &BinaryHeap<Panel>| h.iter().map(|p| p.err).sum::<f64>();
    // seeding alone may overrun a tight budget
    let seeded_within_budget = nodes_used <= max_nodes;
    let mut converged = seeded_within_budget && total_err(&heap) <= abs_tol;
    while !converged && seeded_within_budget {
        if nodes_used + 4 * n > max_nodes {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split any further
            heap.push(Panel { err: 0.0, ..worst });
            converged = total_err(&heap) <= abs_tol;
            continue;
        }
        heap.push(make_panel(worst.a, mid, worst.left, &mut nodes_used));
        heap.push(make_panel(mid, worst.b, worst.right, &mut nodes_used));
        converged = total_err(&heap) <= abs_tol;
    }

    let mut parts: Vec<Panel> = heap.into_vec();
    parts.sort_by(|p, q| p.a.total_cmp(&q.a));
    QuadratureOutcome {
        value: parts.iter().map(Panel::value).sum(),
        est_error: parts.iter().map(|p| p.err).sum(),
        nodes_used,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(20);
        for deg in 0..40 {
            let got = rule.integrate(&|x: f64| x.powi(deg), 0.0, 1.0);
            let want = 1.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-14, "degree {deg}");
        }
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn small_rules() {
        let r1 = GaussLegendre::new(1);
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - 2.0).abs() < 1e-15);
        let r2 = GaussLegendre::new(2);
        assert!((r2.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn adaptive_oscillatory() {
        // ∫₀^{20} sin(10x) e^{−x} dx
        let f = |x: f64| (10.0 * x).sin() * (-x).exp();
        let out = integrate_adaptive(&f, 0.0, 20.0, 1e-12, 100_000, 4);
        let exact =
            (10.0 - (-20.0f64).exp() * (10.0 * (200.0f64).cos() + (200.0f64).sin())) / 101.0;
        assert!(out.converged);
        assert!((out.value - exact).abs() < 1e-12);
        assert!(out.est_error <= 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let f = |x: f64| (1.0 / x.max(1e-300)).sin();
        let out = integrate_adaptive(&f, 1e-6, 1.0, 1e-14, 500, 1);
        assert!(!out.converged);
        assert!(out.nodes_used <= 500);
        assert!(out.value.is_finite());
    }
}
