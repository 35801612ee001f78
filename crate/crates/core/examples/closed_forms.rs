//! Exact CDFs for the first three members of the sequence.

use nestexp::distribution::{
    cdf_w_exact, cdf_y_exact, g_derivatives, integrated_cdf_w3, SequenceIndex,
};

fn main() {
    for n in 1..=3 {
        let idx = SequenceIndex::new(n).unwrap();
        let at_one = cdf_y_exact(idx, 1.0).unwrap().value();
        let row: Vec<String> = [-2.0, -1.0, 0.0, 1.0, 2.0]
            .iter()
            .map(|&w| format!("{:.6}", cdf_w_exact(idx, w).unwrap().value()))
            .collect();
        println!(
            "n = {n}: F_Y(1) = {at_one:.9}   F_W at w = -2..2: {}",
            row.join(" ")
        );
    }
    println!("∫ F_W3 over (-∞, 0] = {:.12}", integrated_cdf_w3(0.0));
    let d = g_derivatives(0.0, 5);
    println!("G^(k)(0), k = 0..5: {:?}", d.values);
}
