//! Reference constants, rounded to the nearest `f64`.
//!
//! Both values are re-derived by independent routes in the test and
//! verification code: γ from Euler–Maclaurin on the harmonic sum
//! ([`crate::oracles::euler_maclaurin_gamma`]) and δ from `−e·Ei(−1)` and
//! Hardy's series ([`crate::taylor::hardy_delta`]).

/// Euler–Mascheroni constant γ = 0.5772156649015328606…
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Euler–Gompertz constant δ = 0.5963473623231940743…
pub const EULER_GOMPERTZ: f64 = 0.596_347_362_323_194_1;
