//! Real and complex special functions: the complex Gamma function, the
//! exponential integral on the negative axis and the `πz / sinh(πz)` kernel.
//!
//! Everything here is plain `f64`; the accuracy targets are the ones the
//! inversion and closed-form code need (about 13 significant digits).

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::EULER_GAMMA;

/// Complex value used throughout the crate.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecialError {
    #[error("Gamma has a pole at {0}")]
    Pole(f64),
    #[error("Gamma({re} + {im}i) is outside the representable range")]
    Overflow { re: f64, im: f64 },
    #[error("argument {0} is outside the domain (expected x < 0)")]
    Domain(f64),
}

/// A strictly negative real argument, the domain of [`expint_ei`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NegativeArgument(f64);

impl NegativeArgument {
    pub fn new(x: f64) -> Result<Self, SpecialError> {
        if x < 0.0 {
            Ok(Self(x))
        } else {
            Err(SpecialError::Domain(x))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for NegativeArgument {
    type Error = SpecialError;

    fn try_from(x: f64) -> Result<Self, Self::Error> {
        Self::new(x)
    }
}

// Lanczos approximation with g = 671/128 and fourteen terms, from Press et
// al., Numerical Recipes (3rd ed., §6.1, routine gammln). The nine-term g = 7
// set is good to 1e-15 on the real axis but degrades to ~2e-13 relative at
// |Im z| = 50; this set stays below 4e-14 on Re z = 1, |Im z| ≤ 50.
const LANCZOS_G: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// exp() overflows above this and underflows to subnormals below the negation
// of ~745; both are reported as overflow of the result.
const LN_MAX: f64 = 709.78;
const LN_MIN: f64 = -745.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Γ(z)`, with the imaginary part determined only modulo 2π.
pub fn ln_complex_gamma(z: ComplexValue) -> Result<ComplexValue, SpecialError> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(SpecialError::Overflow { re: z.re, im: z.im });
    }
    if is_nonpositive_integer(z) {
        return Err(SpecialError::Pole(z.re));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1 − z) = π / sin(πz)
        let s = (z * PI).sin();
        let reflected = ln_complex_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - reflected);
    }
    Ok(lanczos_ln_gamma(z))
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let mut series = Complex64::new(LANCZOS_C0, 0.0);
    for (j, &c) in LANCZOS_COEF.iter().enumerate() {
        series += c / (z + (j + 1) as f64);
    }
    let t = z + LANCZOS_G;
    (z + 0.5) * t.ln() - t + (series / z).ln() + LN_SQRT_2PI
}

/// Γ(z) for complex `z`.
///
/// Evaluated in log space, so arguments far up the imaginary axis are fine as
/// long as the result itself is representable.
pub fn complex_gamma(z: ComplexValue) -> Result<ComplexValue, SpecialError> {
    let lg = ln_complex_gamma(z)?;
    if lg.re > LN_MAX || lg.re < LN_MIN {
        return Err(SpecialError::Overflow { re: z.re, im: z.im });
    }
    Ok(Complex64::from_polar(lg.re.exp(), lg.im))
}

/// `πz / sinh(πz)`, an even function equal to 1 at the origin.
pub fn sinh_ratio(z: f64) -> f64 {
    let x = (PI * z).abs();
    if x < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0 - 31.0 * x2 * x2 * x2 / 15_120.0
    } else if x < 20.0 {
        x / x.sinh()
    } else {
        // sinh x = e^x (1 − e^{−2x}) / 2, without overflowing for large x
        2.0 * x * (-x).exp() / (-(-2.0 * x).exp()).ln_1p().exp()
    }
}

/// `ln(πz / sinh(πz))`, finite for every real `z`.
pub fn ln_sinh_ratio(z: f64) -> f64 {
    let x = (PI * z).abs();
    if x < 1e-4 {
        sinh_ratio(z).ln()
    } else {
        x.ln() - ln_sinh(x)
    }
}

fn ln_sinh(x: f64) -> f64 {
    if x < 20.0 {
        x.sinh().ln()
    } else {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// Crossover between the power series and the continued fraction for E1.
const E1_SERIES_MAX: f64 = 2.0;

/// Ei(x) for x < 0, i.e. `−E1(−x)`.
pub fn expint_ei(x: NegativeArgument) -> f64 {
    let y = -x.get();
    if y <= E1_SERIES_MAX {
        -e1_series(y, y.ln())
    } else {
        -(e1_continued_fraction(y) * (-y).exp())
    }
}

/// `e^y · E1(y)` for `y > 0`, with `ln_y = ln(y)` supplied by the caller so
/// that arguments of the form `y = e^w` keep full precision as `w → −∞`.
pub(crate) fn scaled_e1(y: f64, ln_y: f64) -> f64 {
    if y <= E1_SERIES_MAX {
        y.exp() * e1_series(y, ln_y)
    } else {
        e1_continued_fraction(y)
    }
}

/// E1(y) = −γ − ln y − Σ_{k≥1} (−y)^k / (k·k!).
pub(crate) fn e1_series(y: f64, ln_y: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -y / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.abs() <= f64::EPSILON * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    -EULER_GAMMA - ln_y - sum
}

/// `e^y · E1(y)` by the modified Lentz evaluation of
/// `1/(y+1− 1/(y+3− 4/(y+5− …)))`; converges for y ≳ 1.
pub(crate) fn e1_continued_fraction(y: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = y + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    h
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Stirling series with an upward shift: Γ(z) = Γ(z + N) / (z (z+1) … (z+N−1)).
    fn stirling_ln_gamma(z: Complex64) -> Complex64 {
        const SHIFT: usize = 20;
        let mut shifted = z;
        let mut ln_prod = c(0.0, 0.0);
        for _ in 0..SHIFT {
            ln_prod += shifted.ln();
            shifted += 1.0;
        }
        let inv = 1.0 / shifted;
        let inv2 = inv * inv;
        // Bernoulli terms B_{2k} / (2k (2k − 1) z^{2k−1})
        let bern = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360_360.0,
            1.0 / 156.0,
        ];
        let mut corr = c(0.0, 0.0);
        let mut p = inv;
        for b in bern {
            corr += p * b;
            p *= inv2;
        }
        (shifted - 0.5) * shifted.ln() - shifted + LN_SQRT_2PI + corr - ln_prod
    }

    #[test]
    fn gamma_at_integers() {
        let g1 = complex_gamma(c(1.0, 0.0)).unwrap();
        assert!((g1.re - 1.0).abs() < 1e-15 && g1.im.abs() < 1e-15);
        let g5 = complex_gamma(c(5.0, 0.0)).unwrap();
        assert!(rel(g5.re, 24.0) < 1e-14);
    }

    #[test]
    fn gamma_reflection_at_one() {
        let p = complex_gamma(c(1.0, 1.0)).unwrap() * complex_gamma(c(1.0, -1.0)).unwrap();
        let direct = PI / PI.sinh();
        assert!(rel(p.re, direct) < 1e-13);
        assert!(p.im.abs() < 1e-15);
        assert!((direct - 0.272_029).abs() < 1e-6);
    }

    #[test]
    fn gamma_matches_stirling_on_unit_line() {
        for i in 0..=100 {
            let y = -50.0 + i as f64;
            let z = c(1.0, y);
            let got = complex_gamma(z).unwrap();
            let want = stirling_ln_gamma(z).exp();
            assert!(
                (got - want).norm() / want.norm() < 1e-13,
                "y = {y}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn gamma_frozen_values() {
        // mpmath, 40 digits
        let g = complex_gamma(c(1.0, 0.5)).unwrap();
        let want = c(0.801_694_097_069_717_2, -0.199_639_738_164_596_36);
        assert!((g - want).norm() / want.norm() < 1e-13, "{g}");
        let g = complex_gamma(c(1.0, 30.0)).unwrap();
        let want_norm = (PI * 30.0 / (PI * 30.0).sinh()).sqrt();
        assert!(rel(g.norm(), want_norm) < 1e-13);
    }

    #[test]
    fn gamma_poles_and_overflow() {
        assert_eq!(complex_gamma(c(0.0, 0.0)), Err(SpecialError::Pole(0.0)));
        assert_eq!(complex_gamma(c(-3.0, 0.0)), Err(SpecialError::Pole(-3.0)));
        assert!(matches!(
            complex_gamma(c(1.0, 800.0)),
            Err(SpecialError::Overflow { .. })
        ));
        assert!(matches!(
            complex_gamma(c(200.0, 0.0)),
            Err(SpecialError::Overflow { .. })
        ));
        // left half-plane goes through reflection
        let g = complex_gamma(c(-0.5, 0.0)).unwrap();
        assert!(rel(g.re, -2.0 * PI.sqrt()) < 1e-13);
    }

    #[test]
    fn ei_at_minus_one() {
        let ei = expint_ei(NegativeArgument::new(-1.0).unwrap());
        // series oracle: γ + ln 1 + Σ (−1)^k / (k·k!)
        let mut oracle = EULER_GAMMA;
        let mut fact = 1.0;
        for k in 1..=30 {
            fact *= k as f64;
            oracle += (-1.0f64).powi(k) / (k as f64 * fact);
        }
        assert!((ei - oracle).abs() < 1e-15);
        assert!((ei + 0.219_383_9).abs() < 1e-7);
        assert!((-E * ei - 0.596_347_362_323_194_1).abs() < 1e-15);
    }

    #[test]
    fn ei_frozen_values() {
        // mpmath ei at 40 digits
        let cases = [
            (-1e-300, -690.198_312_233_312_17),
            (-0.5, -0.559_773_594_776_160_8),
            (-2.0, -0.048_900_510_708_061_12),
            (-3.0, -0.013_048_381_094_197_04),
            (-6.0, -3.600_824_521_626_586_6e-4),
            (-10.0, -4.156_968_929_685_324e-6),
            (-50.0, -3.783_264_029_550_459e-24),
            (-700.0, -1.406_518_766_234_032_9e-307),
        ];
        for (x, want) in cases {
            let got = expint_ei(NegativeArgument::new(x).unwrap());
            assert!(rel(got, want) < 1e-13, "Ei({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn ei_domain() {
        assert_eq!(NegativeArgument::new(0.0), Err(SpecialError::Domain(0.0)));
        assert!(NegativeArgument::try_from(2.0).is_err());
        let far = expint_ei(NegativeArgument::new(-1e4).unwrap());
        assert!(far <= 0.0 && far.abs() < 1e-300);
    }

    #[test]
    fn ei_derivative_matches_finite_difference() {
        let h = 1e-5;
        for i in 0..20 {
            let x = -10.0 + (9.9 / 19.0) * i as f64;
            let ei = |t: f64| expint_ei(NegativeArgument::new(t).unwrap());
            let fd = (ei(x + h) - ei(x - h)) / (2.0 * h);
            let exact = x.exp() / x;
            assert!(rel(fd, exact) < 1e-6, "x = {x}");
        }
    }

    #[test]
    fn ei_expansions_agree_in_overlap_band() {
        for i in 1..60 {
            let y = 2.0 + 6.0 * i as f64 / 60.0;
            let series = e1_series(y, y.ln());
            let cf = e1_continued_fraction(y) * (-y).exp();
            assert!((series - cf).abs() < 1e-12, "y = {y}: {series} vs {cf}");
        }
    }

    #[test]
    fn sinh_ratio_values() {
        assert_eq!(sinh_ratio(0.0), 1.0);
        assert!((sinh_ratio(1.0) - PI / PI.sinh()).abs() < 1e-16);
        let s10 = sinh_ratio(10.0);
        let asym = 2.0 * PI * 10.0 * (-PI * 10.0).exp();
        assert!(s10 > 0.0 && s10 < 1e-11);
        assert!(rel(s10, asym) < 1e-12);
        // Taylor patch joins the direct formula smoothly
        let z = 0.999e-4 / PI;
        let x = PI * z;
        assert!((sinh_ratio(z) - x / x.sinh()).abs() < 1e-15);
        assert!((ln_sinh_ratio(40.0) - sinh_ratio(40.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn sinh_ratio_monotone() {
        let mut prev = sinh_ratio(0.0);
        for i in 1..2000 {
            let v = sinh_ratio(i as f64 * 0.01);
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reflection_identity(z in 0.0f64..30.0) {
                let p = complex_gamma(c(1.0, z)).unwrap() * complex_gamma(c(1.0, -z)).unwrap();
                let r = sinh_ratio(z);
                prop_assert!((p.re - r).abs() <= 1e-11 * r);
                prop_assert!(p.im.abs() <= 1e-11 * r);
            }

            #[test]
            fn conjugate_symmetry(re in 0.5f64..5.0, im in -50.0f64..50.0) {
                let a = complex_gamma(c(re, im)).unwrap();
                let b = complex_gamma(c(re, -im)).unwrap().conj();
                prop_assert!((a - b).norm() <= 1e-13 * a.norm());
            }
        }
    }
}
