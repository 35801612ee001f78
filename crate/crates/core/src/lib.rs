//! Distributions of the nested exponential sequence
//! `Y₁ ~ Exp(1)`, `Yₙ ~ Exp(rate = Yₙ₋₁)` and of its log-scale companion
//! `Wₙ = ln Yₙ`.
//!
//! The crate covers:
//!
//! * closed forms for n ≤ 3 and the integrated survival function of `W₃`
//!   ([`distribution`]),
//! * characteristic-function inversion for arbitrary n, which yields the
//!   constants `κₙ = P(Yₙ ≤ 1)` ([`inversion`]),
//! * Bell and Gould numbers and the Taylor series they generate
//!   ([`sequences`], [`taylor`]),
//! * Monte Carlo sampling by both constructions with distributional tests
//!   ([`monte_carlo`]),
//! * a verification suite and a CLI surface ([`verify`], [`cli`]).
//!
//! ```
//! use nestexp::inversion::{kappa, QuadratureConfig};
//! use nestexp::distribution::SequenceIndex;
//!
//! let n = SequenceIndex::new(5).unwrap();
//! let k5 = kappa(n, &QuadratureConfig::for_index(n)).unwrap();
//! assert!((k5.value - nestexp::constants::EULER_GAMMA).abs() < 1e-9);
//! ```

pub mod cli;
pub mod constants;
pub mod distribution;
pub mod inversion;
pub mod json;
pub mod monte_carlo;
pub mod oracles;
pub mod quadrature;
pub mod sequences;
pub mod special;
pub mod taylor;
pub mod verify;
