//! Partial sums of the Taylor expansion of G^{(k)} at 0, against the direct value.

use nestexp::constants::{EULER_GAMMA, EULER_GOMPERTZ};
use nestexp::distribution::g_derivatives;
use nestexp::taylor::{hardy_delta, limit_gap, remainder_shape, SeriesQuery, TaylorEngine};

fn main() {
    let engine = TaylorEngine::new(200).unwrap();
    for (k, w) in [(0, -1.0), (1, 0.5), (2, 6.0)] {
        let oracle = g_derivatives(w, k).values[k];
        println!("k = {k}, w = {w}: G^(k)(w) = {oracle:.15e}");
        for m in [5, 10, 20, 40, 80] {
            let q = SeriesQuery::new(k, w, m, EULER_GOMPERTZ).unwrap();
            let p = engine.partial_sum(&q).unwrap();
            let shape = remainder_shape(m, k, w);
            println!(
                "  m = {m:>3}: gap {:.3e}  remainder shape {:.3e}{}",
                (p - oracle).abs(),
                shape.bound_shape,
                if shape.converged {
                    ""
                } else {
                    "  (not yet converging)"
                }
            );
        }
    }
    println!(
        "δ from the alternating series: {:.15}",
        hardy_delta(20, EULER_GAMMA)
    );
    for w in [-5.0, -10.0, -30.0] {
        println!("G({w}) + {w} = {:.15}", limit_gap(w).unwrap());
    }
}
