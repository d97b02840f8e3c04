//! Exact rational arithmetic: Bernoulli numbers, `ζ(2k)/π^{2k}`, and the
//! rational radicands that multiply powers of π in the integer-order product
//! formulas.
//!
//! Nothing in this module rounds. Bernoulli numbers and factorials are memoized
//! behind `RwLock`s so any number of threads can call in concurrently.

use std::sync::{OnceLock, RwLock};

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::formula::FormulaId;

/// Exact rational with canonical `gcd(num, den) = 1`, `den > 0` representation.
pub type BigRational = Rational;

/// Closed-form leading coefficient `π^{pi_power} · radicand^{1/root}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientResult {
    /// Order of the zeta value the coefficient belongs to (`3/2` for the
    /// half-integer formulas).
    pub k: Rational,
    pub pi_power: Rational,
    /// 2 for a square root, 4 for a fourth root.
    pub root: u32,
    /// Canonical exact value under the root. Always positive.
    pub radicand: BigRational,
    /// Numerator and denominator as composed before reduction, when that form is
    /// the conventional way to print the coefficient.
    pub unreduced: Option<(Integer, Integer)>,
    pub formula: FormulaId,
}

fn bernoulli_memo() -> &'static RwLock<Vec<Rational>> {
    static MEMO: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    // even-index table: entry i holds B_{2i}
    MEMO.get_or_init(|| RwLock::new(vec![Rational::from(1)]))
}

fn factorial_memo() -> &'static RwLock<Vec<Integer>> {
    static MEMO: OnceLock<RwLock<Vec<Integer>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(vec![Integer::from(1)]))
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> Integer {
    let n = n as usize;
    if let Some(v) = factorial_memo().read().unwrap().get(n) {
        return v.clone();
    }
    let mut table = factorial_memo().write().unwrap();
    while table.len() <= n {
        let next = Integer::from(&table[table.len() - 1] * table.len() as u64);
        table.push(next);
    }
    table[n].clone()
}

/// Bernoulli number `B_n` with the `B_1 = −1/2` convention.
///
/// Even-index values come from the recurrence `Σ_{j=0}^{m} C(m+1, j) B_j = 0`,
/// restricted to the even `j` (and `j = 1`) where `B_j` is nonzero.
pub fn bernoulli(n: u32) -> BigRational {
    if n == 1 {
        return Rational::from((-1, 2));
    }
    if n % 2 == 1 {
        return Rational::new();
    }
    let idx = (n / 2) as usize;
    if let Some(v) = bernoulli_memo().read().unwrap().get(idx) {
        return v.clone();
    }
    let mut table = bernoulli_memo().write().unwrap();
    while table.len() <= idx {
        let m = 2 * table.len() as u32;
        // C(m+1, 0)·B_0 + C(m+1, 1)·B_1 = 1 − (m+1)/2
        let mut sum = Rational::from(1) - Rational::from((m + 1, 2));
        for (i, b) in table.iter().enumerate().skip(1) {
            let binom = Integer::from(Integer::binomial_u(m + 1, 2 * i as u32));
            sum += Rational::from(b * binom);
        }
        let b_m = -sum / Integer::from(m + 1);
        table.push(b_m);
    }
    table[idx].clone()
}

/// The rational `r` with `ζ(2k) = r · π^{2k}`.
///
/// `r = (−1)^{k+1} B_{2k} 2^{2k} / (2 · (2k)!)`, which is always positive.
pub fn zeta_even_rational(k: u32) -> BigRational {
    assert!(k >= 1, "zeta_even_rational needs k >= 1");
    let mut r =
        bernoulli(2 * k) * Integer::from(Integer::u_pow_u(2, 2 * k)) / (factorial(2 * k) * 2u32);
    if k.is_multiple_of(2) {
        r = -r;
    }
    r
}

fn require_order(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::domain(format!(
            "order k = {k} is outside the convergent range k >= 2"
        )));
    }
    Ok(())
}

/// Radicand of `ζ(k) = π^k √r · Π (1 − 2/(p^k + p^{−k}))^{−1/2}`.
///
/// Computed from Bernoulli numbers as
/// `r = (−1)^k 2^{2k} B_{4k} (2k)! / (B_{2k} (4k)!)`, the exact value of
/// `ζ(4k) / (ζ(2k) π^{2k})`.
pub fn main_coefficient(k: u32) -> Result<CoefficientResult> {
    require_order(k)?;
    let num = bernoulli(4 * k) * Integer::from(Integer::u_pow_u(2, 2 * k)) * factorial(2 * k);
    let den = bernoulli(2 * k) * factorial(4 * k);
    let mut radicand = num / den;
    if k % 2 == 1 {
        radicand = -radicand;
    }
    Ok(CoefficientResult {
        k: Rational::from(k),
        pi_power: Rational::from(k),
        root: 2,
        radicand,
        unreduced: None,
        formula: FormulaId::IntegerSqrt,
    })
}

/// Radicand of `ζ(k) = π^k √a · Π ((p^k+1)/(p^k−1))^{1/2}`:
/// `a = (−1)^{k+1} B_{2k} 2^{2k−1} / (2k)!`.
pub fn alt_coefficient(k: u32) -> Result<CoefficientResult> {
    require_order(k)?;
    let mut radicand =
        bernoulli(2 * k) * Integer::from(Integer::u_pow_u(2, 2 * k - 1)) / factorial(2 * k);
    if k.is_multiple_of(2) {
        radicand = -radicand;
    }
    Ok(CoefficientResult {
        k: Rational::from(k),
        pi_power: Rational::from(k),
        root: 2,
        radicand,
        unreduced: None,
        formula: FormulaId::AltProduct,
    })
}

/// Fourth-root radicand of the `ζ(3/2)` formula in the main family.
///
/// Squaring the `σ = 3/2` magnitude identity gives `ζ(3/2)² = ζ(6)/ζ(3) · Π…`;
/// substituting `ζ(6) = π^6/945` and the `k = 3` integer formula for `ζ(3)`
/// leaves `π^{3/2} · (ρ_6² / r_3)^{1/4}` with `ρ_6 = 1/945` and `r_3` the
/// `k = 3` main radicand.
pub fn half_integer_coefficient() -> CoefficientResult {
    let zeta6 = zeta_even_rational(3);
    let r3 = main_coefficient(3).expect("k = 3 is in range").radicand;
    let num = Integer::from(zeta6.numer().square_ref()) * r3.denom();
    let den = Integer::from(zeta6.denom().square_ref()) * r3.numer();
    CoefficientResult {
        k: Rational::from((3, 2)),
        pi_power: Rational::from((3, 2)),
        root: 4,
        radicand: Rational::from((num.clone(), den.clone())),
        unreduced: Some((num, den)),
        formula: FormulaId::HalfIntegerMain,
    }
}

/// Fourth-root radicand of the `ζ(3/2)` formula in the alternate family:
/// `√ζ(3) = π^{3/2} a_3^{1/4} · Π …^{1/4}`.
pub fn half_integer_alt_coefficient() -> CoefficientResult {
    let a3 = alt_coefficient(3).expect("k = 3 is in range").radicand;
    CoefficientResult {
        k: Rational::from((3, 2)),
        pi_power: Rational::from((3, 2)),
        root: 4,
        radicand: a3,
        unreduced: None,
        formula: FormulaId::HalfIntegerAlt,
    }
}

/// Main-family coefficients for `k = 2..=11`.
pub fn appendix_a_table() -> Vec<CoefficientResult> {
    (2..=11)
        .map(|k| main_coefficient(k).expect("k in 2..=11"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_bernoulli_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for n in 1..60 {
            assert_eq!(bernoulli(2 * n + 1), 0);
        }
    }

    #[test]
    fn zeta_even_rational_values() {
        assert_eq!(zeta_even_rational(1), q(1, 6));
        assert_eq!(zeta_even_rational(2), q(1, 90));
        assert_eq!(zeta_even_rational(3), q(1, 945));
    }

    #[test]
    fn main_coefficient_leading_entries() {
        assert_eq!(main_coefficient(2).unwrap().radicand, q(1, 105));
        assert_eq!(main_coefficient(3).unwrap().radicand, q(691, 675675));
        assert_eq!(main_coefficient(4).unwrap().radicand, q(3617, 34459425));
        assert_eq!(main_coefficient(3).unwrap().pi_power, 3);
    }

    #[test]
    fn alt_coefficient_leading_entries() {
        assert_eq!(alt_coefficient(2).unwrap().radicand, q(1, 90));
        assert_eq!(alt_coefficient(3).unwrap().radicand, q(1, 945));
        assert_eq!(alt_coefficient(4).unwrap().radicand, q(1, 9450));
    }

    #[test]
    fn orders_below_two_are_rejected() {
        assert!(matches!(main_coefficient(1), Err(Error::Domain(_))));
        assert!(matches!(main_coefficient(0), Err(Error::Domain(_))));
        assert!(matches!(alt_coefficient(1), Err(Error::Domain(_))));
    }

    #[test]
    fn half_integer_radicand() {
        let c = half_integer_coefficient();
        let (num, den) = c.unreduced.clone().unwrap();
        assert_eq!(num, 675675);
        assert_eq!(den, 617080275);
        assert_eq!(den, Integer::from(691) * 893025);
        assert_eq!(c.radicand, Rational::from((675675, 617080275)));
        assert_eq!(c.radicand, q(143, 130599));
        assert_eq!(c.root, 4);
    }

    #[test]
    fn table_has_ten_rows() {
        let t = appendix_a_table();
        assert_eq!(t.len(), 10);
        assert_eq!(t[0].k, 2);
        assert_eq!(t[9].k, 11);
    }

    #[test]
    fn factorial_memo_matches_gmp() {
        for n in [0u32, 1, 5, 20, 44, 100] {
            assert_eq!(factorial(n), Integer::from(Integer::factorial(n)));
        }
    }
}
