//! Runs the quick verification profile and prints one line per criterion.

use nestexp::verify::{run_all, Profile, VerifyOptions};

fn main() {
    let reports = run_all(&VerifyOptions::new(Profile::Quick));
    for r in &reports {
        println!("{}", r.summary_line());
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{failed} failures");
}
