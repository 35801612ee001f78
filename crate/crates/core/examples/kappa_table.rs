//! κₙ = P(Yₙ ≤ 1) for n = 1..12 by Gil-Pelaez inversion.

use nestexp::distribution::SequenceIndex;
use nestexp::inversion::{cdf_wn, kappa, QuadratureConfig};

fn main() {
    for n in 1..=12 {
        let idx = SequenceIndex::new(n).unwrap();
        let cfg = QuadratureConfig::for_index(idx);
        let r = kappa(idx, &cfg).unwrap();
        println!(
            "κ_{n:<2} = {:.12}  (error ≤ {:.1e}, {} nodes)",
            r.value, r.est_error, r.nodes_used
        );
    }

    let idx = SequenceIndex::new(10).unwrap();
    let cfg = QuadratureConfig::for_index(idx).with_tol(1e-12);
    for w in [-10.0, -5.0, 0.0, 5.0, 10.0] {
        let r = cdf_wn(idx, w, &cfg).unwrap();
        println!("F_W10({w:>5}) = {:.12}", r.value);
    }
}
