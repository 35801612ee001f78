//! Bell and Gould numbers and how fast A_k / B_k approaches δ.

use nestexp::constants::EULER_GOMPERTZ;
use nestexp::sequences::{berend_tassa_log_bound, ln_big, CoefficientTable};

fn main() {
    let table = CoefficientTable::new(41).unwrap();
    println!("{:>3} {:>24} {:>24} {:>12}", "k", "B_k", "A_k", "|A/B - δ|");
    for k in (0..=40).step_by(4) {
        let row = table.row(k).unwrap();
        let gap = table.ratio_gap(k, EULER_GOMPERTZ).unwrap();
        println!(
            "{k:>3} {:>24} {:>24} {gap:>12.3e}",
            row.bell.to_string(),
            row.gould.to_string()
        );
    }
    println!("A_40/B_40 = {}", table.ratio_decimal(40, 25).unwrap());
    let b40 = &table.row(40).unwrap().bell;
    println!(
        "ln B_40 = {:.4} < bound {:.4}",
        ln_big(b40),
        berend_tassa_log_bound(40)
    );
}
