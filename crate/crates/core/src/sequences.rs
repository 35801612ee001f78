//! Bell numbers `B_k` and Gould numbers `A_k` in exact arithmetic.
//!
//! The pair enters the Taylor coefficients `δB_k − A_k` of the integrated
//! survival function of `W₃`. Both sequences satisfy the same binomial
//! self-convolution `x_{k+1} = Σ_j C(k, j) x_j`; they differ only in the
//! seeds (`B₀ = 1` versus `A₀ = 0, A₁ = 1`, the latter recurrence starting at
//! k = 1).
//!
//! "Gould numbers" names more than one sequence in the literature; here it is
//! pinned to 0, 1, 1, 3, 9, 31, 121, … .

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Exact non-negative integer.
pub type BigNat = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("a coefficient table needs at least one row")]
    Empty,
    #[error("index {index} is beyond the generated table (len {len})")]
    Exhausted { index: usize, len: usize },
    #[error("ratio convergence needs k_max >= 2, got {0}")]
    TooShort(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientRow {
    pub k: usize,
    pub bell: BigNat,
    pub gould: BigNat,
}

/// Contiguous rows `(k, B_k, A_k)` for `k = 0 … len−1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    rows: Vec<CoefficientRow>,
}

impl CoefficientTable {
    /// Builds `count` rows from the binomial recurrences.
    pub fn new(count: usize) -> Result<Self, SequenceError> {
        if count == 0 {
            return Err(SequenceError::Empty);
        }
        let mut bell: Vec<BigNat> = Vec::with_capacity(count);
        let mut gould: Vec<BigNat> = Vec::with_capacity(count);
        bell.push(BigNat::one());
        gould.push(BigNat::zero());
        if count > 1 {
            gould.push(BigNat::one());
        }
        let mut row = vec![BigNat::one()];
        for k in 0..count - 1 {
            // row holds C(k, 0..=k)
            let next_bell: BigNat = row.iter().zip(&bell).map(|(c, b)| c * b).sum();
            bell.push(next_bell);
            if k >= 1 {
                let next_gould: BigNat = row.iter().zip(&gould).map(|(c, a)| c * a).sum();
                gould.push(next_gould);
            }
            row = next_pascal_row(&row);
        }
        let rows = bell
            .into_iter()
            .zip(gould)
            .enumerate()
            .map(|(k, (bell, gould))| CoefficientRow { k, bell, gould })
            .collect();
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[CoefficientRow] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> Result<&CoefficientRow, SequenceError> {
        self.rows.get(k).ok_or(SequenceError::Exhausted {
            index: k,
            len: self.rows.len(),
        })
    }

    pub fn bell(&self, k: usize) -> Result<&BigNat, SequenceError> {
        self.row(k).map(|r| &r.bell)
    }

    pub fn gould(&self, k: usize) -> Result<&BigNat, SequenceError> {
        self.row(k).map(|r| &r.gould)
    }

    /// Exact numerator of `δB_k − A_k` over `2^shift`, where `δ = mantissa·2^{−shift}`.
    fn scaled_coefficient(&self, k: usize, delta: ExactBinary) -> Result<BigInt, SequenceError> {
        let row = self.row(k)?;
        let lhs = BigInt::from_biguint(Sign::Plus, &row.bell * delta.mantissa);
        let rhs = BigInt::from_biguint(Sign::Plus, &row.gould << delta.shift);
        Ok(lhs - rhs)
    }

    /// `δB_k − A_k` with `delta_ref` taken as its exact binary value; the only
    /// rounding is the final conversion to `f64`.
    pub fn signed_coefficient(&self, k: usize, delta_ref: f64) -> Result<f64, SequenceError> {
        let d = ExactBinary::from_positive(delta_ref);
        let num = self.scaled_coefficient(k, d)?;
        Ok(big_ratio_to_f64(&num, &(BigNat::one() << d.shift)))
    }

    /// `(δB_k − A_k) / ℓ!`, again rounded only once.
    pub fn coefficient_over_factorial(
        &self,
        k: usize,
        ell: usize,
        delta_ref: f64,
    ) -> Result<f64, SequenceError> {
        let d = ExactBinary::from_positive(delta_ref);
        let num = self.scaled_coefficient(k, d)?;
        let den = factorial(ell) << d.shift;
        Ok(big_ratio_to_f64(&num, &den))
    }

    /// `|A_k / B_k − δ|` in exact rational arithmetic.
    pub fn ratio_gap(&self, k: usize, delta_ref: f64) -> Result<f64, SequenceError> {
        let d = ExactBinary::from_positive(delta_ref);
        let num = self.scaled_coefficient(k, d)?;
        let den = &self.row(k)?.bell << d.shift;
        Ok(big_ratio_to_f64(&num, &den).abs())
    }

    /// `A_k / B_k` as a decimal string with `digits` significant digits
    /// (truncated, not rounded).
    pub fn ratio_decimal(&self, k: usize, digits: usize) -> Result<String, SequenceError> {
        let row = self.row(k)?;
        Ok(decimal_ratio(&row.gould, &row.bell, digits))
    }
}

/// `B_0 … B_{count−1}`.
pub fn bell_numbers(count: usize) -> Result<Vec<BigNat>, SequenceError> {
    Ok(CoefficientTable::new(count)?
        .rows
        .into_iter()
        .map(|r| r.bell)
        .collect())
}

/// `A_0 … A_{count−1}`.
pub fn gould_numbers(count: usize) -> Result<Vec<BigNat>, SequenceError> {
    Ok(CoefficientTable::new(count)?
        .rows
        .into_iter()
        .map(|r| r.gould)
        .collect())
}

/// Gap `|A_k/B_k − δ|` for `k = 0 … k_max`.
pub fn ratio_convergence(k_max: usize, delta_ref: f64) -> Result<Vec<(usize, f64)>, SequenceError> {
    if k_max < 2 {
        return Err(SequenceError::TooShort(k_max));
    }
    let table = CoefficientTable::new(k_max + 1)?;
    (0..=k_max)
        .map(|k| table.ratio_gap(k, delta_ref).map(|g| (k, g)))
        .collect()
}

/// `ℓ · ln(0.792 ℓ / ln(ℓ + 1))`, the log of the Berend–Tassa upper bound on `B_ℓ`.
pub fn berend_tassa_log_bound(ell: usize) -> f64 {
    let l = ell as f64;
    l * (0.792 * l / (l + 1.0).ln()).ln()
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigNat) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn next_pascal_row(row: &[BigNat]) -> Vec<BigNat> {
    let mut next = Vec::with_capacity(row.len() + 1);
    next.push(BigNat::one());
    for pair in row.windows(2) {
        next.push(&pair[0] + &pair[1]);
    }
    next.push(BigNat::one());
    next
}

pub(crate) fn factorial(n: usize) -> BigNat {
    (1..=n as u64).fold(BigNat::one(), |acc, i| acc * i)
}

#[derive(Debug, Clone, Copy)]
struct ExactBinary {
    mantissa: u64,
    shift: usize,
}

impl ExactBinary {
    /// Splits a positive finite `x < 2^52` as `mantissa · 2^{−shift}` exactly.
    fn from_positive(x: f64) -> Self {
        assert!(
            x.is_finite() && x > 0.0,
            "expected a positive finite value, got {x}"
        );
        let bits = x.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        // x = mantissa · 2^e; only fractional-magnitude values are needed here
        let shift = (-e).max(0) as usize;
        let mantissa = if e > 0 { mantissa << e } else { mantissa };
        Self { mantissa, shift }
    }
}

/// `num / den` correctly rounded to within one ulp.
pub(crate) fn big_ratio_to_f64(num: &BigInt, den: &BigNat) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.sign() == Sign::Minus;
    let n = num.magnitude();
    // scale so the integer quotient carries about 64 significant bits
    let s = 64 + den.bits() as i64 - n.bits() as i64;
    let q = if s >= 0 {
        (n << s as usize) / den
    } else {
        n / (den << (-s) as usize)
    };
    let v = ldexp(q.to_f64().unwrap_or(f64::INFINITY), -s);
    if negative {
        -v
    } else {
        v
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

fn decimal_ratio(num: &BigNat, den: &BigNat, digits: usize) -> String {
    if num.is_zero() {
        return "0".to_string();
    }
    let int_part = num / den;
    let mut rem = num % den;
    let mut out = int_part.to_string();
    let mut significant = if int_part.is_zero() { 0 } else { out.len() };
    out.push('.');
    let ten = BigNat::from(10u32);
    while significant < digits {
        rem *= &ten;
        let digit = &rem / den;
        rem %= den;
        let d = digit.to_u32().unwrap_or(0);
        if significant > 0 || d != 0 {
            significant += 1;
        }
        out.push(char::from_digit(d, 10).unwrap_or('0'));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EULER_GOMPERTZ;
    use crate::oracles;

    fn ints(v: &[BigNat]) -> Vec<u64> {
        v.iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn first_bell_numbers() {
        assert_eq!(ints(&bell_numbers(6).unwrap()), vec![1, 1, 2, 5, 15, 52]);
        assert_eq!(ints(&bell_numbers(1).unwrap()), vec![1]);
        assert_eq!(bell_numbers(0), Err(SequenceError::Empty));
    }

    #[test]
    fn first_gould_numbers() {
        assert_eq!(ints(&gould_numbers(6).unwrap()), vec![0, 1, 1, 3, 9, 31]);
        assert_eq!(ints(&gould_numbers(1).unwrap()), vec![0]);
        assert_eq!(ints(&gould_numbers(2).unwrap()), vec![0, 1]);
    }

    #[test]
    fn bell_matches_triangle_oracle() {
        let table = CoefficientTable::new(61).unwrap();
        let triangle = oracles::bell_triangle(61);
        for (row, b) in table.rows().iter().zip(&triangle) {
            assert_eq!(&row.bell, b, "k = {}", row.k);
        }
    }

    #[test]
    fn gould_matches_stirling_oracle() {
        let table = CoefficientTable::new(61).unwrap();
        let alt = oracles::gould_via_complementary_bell(61);
        for (row, a) in table.rows().iter().zip(&alt) {
            assert_eq!(&row.gould, a, "k = {}", row.k);
        }
    }

    #[test]
    fn gould_matches_finite_difference_oracle() {
        let table = CoefficientTable::new(6).unwrap();
        let fd = oracles::gould_via_finite_differences(6, EULER_GOMPERTZ);
        for (row, a) in table.rows().iter().zip(fd) {
            assert_eq!(row.gould.to_i64().unwrap(), a, "k = {}", row.k);
        }
    }

    #[test]
    fn table_invariants() {
        let table = CoefficientTable::new(80).unwrap();
        for w in table.rows().windows(2).skip(1) {
            assert!(w[1].bell > w[0].bell);
        }
        for r in table.rows() {
            assert!(r.gould <= r.bell);
        }
        assert_eq!(
            table.rows().iter().map(|r| r.k).collect::<Vec<_>>(),
            (0..80).collect::<Vec<_>>()
        );
    }

    #[test]
    fn pascal_rows_sum_to_powers_of_two() {
        let mut row = vec![BigNat::one()];
        for k in 0..=120usize {
            let sum: BigNat = row.iter().sum();
            assert_eq!(sum, BigNat::one() << k);
            row = next_pascal_row(&row);
        }
    }

    #[test]
    fn berend_tassa_bound() {
        let table = CoefficientTable::new(51).unwrap();
        for ell in 1..=50 {
            let lb = ln_big(table.bell(ell).unwrap());
            assert!(lb < berend_tassa_log_bound(ell), "ell = {ell}");
        }
    }

    #[test]
    fn ratio_gaps_small_k() {
        let gaps = ratio_convergence(40, EULER_GOMPERTZ).unwrap();
        assert!((gaps[4].1 - (0.6 - EULER_GOMPERTZ)).abs() < 1e-16);
        assert!((gaps[4].1 - 3.65e-3).abs() < 5e-6);
        assert!((gaps[2].1 - 9.63e-2).abs() < 5e-5);
        assert!(gaps[40].1 < gaps[2].1);
        assert!(gaps[40].1 < gaps[20].1);
        assert_eq!(
            ratio_convergence(1, EULER_GOMPERTZ),
            Err(SequenceError::TooShort(1))
        );
    }

    #[test]
    fn ratio_gap_block_maxima_decrease() {
        // gap(k) < gap(k−2) fails at k = 18, so test the envelope instead
        let gaps = ratio_convergence(40, EULER_GOMPERTZ).unwrap();
        let block_max: Vec<f64> = (0..4)
            .map(|b| {
                gaps[10 * b + 1..=10 * b + 10]
                    .iter()
                    .map(|g| g.1)
                    .fold(0.0, f64::max)
            })
            .collect();
        for w in block_max.windows(2) {
            assert!(w[1] < w[0], "{block_max:?}");
        }
    }

    #[test]
    fn relative_coefficient_is_small() {
        let table = CoefficientTable::new(41).unwrap();
        for k in 20..=40 {
            let c = table.signed_coefficient(k, EULER_GOMPERTZ).unwrap();
            let b = table.bell(k).unwrap().to_f64().unwrap();
            assert!((c / b).abs() < 0.01, "k = {k}");
        }
    }

    #[test]
    fn exact_coefficient_low_orders() {
        let table = CoefficientTable::new(4).unwrap();
        let d = EULER_GOMPERTZ;
        assert_eq!(table.signed_coefficient(0, d).unwrap(), d);
        assert!((table.signed_coefficient(1, d).unwrap() - (d - 1.0)).abs() < 1e-16);
        assert!((table.signed_coefficient(2, d).unwrap() - (2.0 * d - 1.0)).abs() < 1e-16);
        assert!((table.signed_coefficient(3, d).unwrap() - (5.0 * d - 3.0)).abs() < 1e-15);
        assert!(matches!(
            table.signed_coefficient(4, d),
            Err(SequenceError::Exhausted { index: 4, len: 4 })
        ));
    }

    #[test]
    fn decimal_ratio_digits() {
        let table = CoefficientTable::new(6).unwrap();
        assert_eq!(table.ratio_decimal(4, 5).unwrap(), "0.60000");
        assert_eq!(
            table.ratio_decimal(3, 30).unwrap(),
            format!("0.6{}", "0".repeat(29))
        );
        assert_eq!(
            table.ratio_decimal(5, 30).unwrap(),
            "0.596153846153846153846153846153"
        );
        assert_eq!(table.ratio_decimal(0, 30).unwrap(), "0");
    }

    #[test]
    fn big_ratio_rounding() {
        let num = BigInt::from(1);
        let den = BigNat::from(3u32);
        assert_eq!(big_ratio_to_f64(&num, &den), 1.0 / 3.0);
        let huge = BigNat::one() << 3000usize;
        assert_eq!(big_ratio_to_f64(&BigInt::from(-7), &huge), -7.0 * 0.0);
        let big = BigInt::from_biguint(Sign::Plus, BigNat::one() << 2000usize);
        let v = big_ratio_to_f64(&big, &(BigNat::one() << 1990usize));
        assert_eq!(v, 1024.0);
        assert!(ln_big(&(BigNat::one() << 5000usize)) - 5000.0 * std::f64::consts::LN_2 < 1e-9);
    }
}
