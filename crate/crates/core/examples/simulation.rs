//! Monte Carlo draws of Wₙ by both constructions, with the distributional checks.

use nestexp::distribution::{cdf_w3, SequenceIndex};
use nestexp::monte_carlo::{
    clt_check, empirical_cdf_at, equivalence_check, inverse_symmetry_check, ks_test, moment_check,
    sample_wn, SampleMethod,
};

fn main() {
    let n3 = SequenceIndex::new(3).unwrap();
    let batch = sample_wn(n3, 1_000_000, 2024, SampleMethod::Nested).unwrap();
    let (p, se) = empirical_cdf_at(&batch, 0.0);
    println!("P(W3 <= 0) ≈ {p:.5} ± {se:.5}");
    let m = moment_check(&batch);
    println!(
        "mean {:.5} (exact {:.5}), variance {:.4} (exact {:.4})",
        m.mean, m.reference_mean, m.variance, m.reference_variance
    );
    println!(
        "KS vs closed form: {:?}",
        ks_test(&batch, |w| cdf_w3(w).value())
    );
    println!(
        "nested vs log-sum, n = 6: {:?}",
        equivalence_check(SequenceIndex::new(6).unwrap(), 200_000, 1, 2).unwrap()
    );
    println!(
        "W4 vs -W4: {:?}",
        inverse_symmetry_check(SequenceIndex::new(4).unwrap(), 200_000, 3).unwrap()
    );
    println!(
        "CLT n = 201: {:?}",
        clt_check(SequenceIndex::new(201).unwrap(), 50_000, 4).unwrap()
    );
}
