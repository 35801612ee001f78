//! Complex Gamma on the critical line, Ei on the negative axis and the
//! sinh ratio that forms the characteristic function of W₂.

use nestexp::special::{complex_gamma, expint_ei, sinh_ratio, NegativeArgument};
use num_complex::Complex64;

fn main() {
    for y in [0.5, 1.0, 5.0, 20.0] {
        let g = complex_gamma(Complex64::new(1.0, y)).unwrap();
        let product = (g * g.conj()).re;
        println!(
            "Γ(1+{y}i) = {g:.6e}   |Γ|² = {product:.6e}   πy/sinh(πy) = {:.6e}",
            sinh_ratio(y)
        );
    }
    for x in [-1e-8, -0.5, -1.0, -10.0, -100.0] {
        let ei = expint_ei(NegativeArgument::new(x).unwrap());
        println!("Ei({x}) = {ei:.15e}");
    }
    let delta = -std::f64::consts::E * expint_ei(NegativeArgument::new(-1.0).unwrap());
    println!("-e Ei(-1) = {delta:.15}");
}
