//! Formula identifiers and the complex argument `s = σ + it`.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Which prime-product representation an evaluation uses.
///
/// Every variant has exactly one per-prime factor and one leading-coefficient
/// rule; see [`crate::product::per_prime_factor`] and
/// [`crate::product::leading_coefficient`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    /// `Π (1 − p^{−s})^{−1}`; for `t ≠ 0` the modulus of the partial product.
    EulerProduct,
    /// `|ζ(σ+it)|` from `ζ(4σ)/ζ(2σ) · Π (1 − 2cos(t ln p)/(p^σ + p^{−σ}))^{−1}`.
    MagnitudeMain,
    /// Same magnitude with the prime factor written through `cosh(σ ln p)`.
    MagnitudeCosh,
    /// `ζ(k) = π^k √r_k · Π (1 − 2/(p^k + p^{−k}))^{−1/2}` for integer `k ≥ 2`.
    IntegerSqrt,
    /// `ζ(k) = π^k √r_k · Π √(p^{2k}+1)/(p^k − 1)`.
    IntegerRationalized,
    /// `ζ(k) = π^k √a_k · Π ((p^k+1)/(p^k−1))^{1/2}`.
    AltProduct,
    /// `ζ(3/2)` from the main family, fourth-root coefficient.
    HalfIntegerMain,
    /// `ζ(3/2)` from the alternate family, fourth-root coefficient.
    HalfIntegerAlt,
    /// `Π (1 + p^{−σ})^{−1}`, which converges to `ζ(2σ)/ζ(σ)`.
    RatioIdentity,
}

impl FormulaId {
    pub const ALL: [FormulaId; 9] = [
        FormulaId::EulerProduct,
        FormulaId::MagnitudeMain,
        FormulaId::MagnitudeCosh,
        FormulaId::IntegerSqrt,
        FormulaId::IntegerRationalized,
        FormulaId::AltProduct,
        FormulaId::HalfIntegerMain,
        FormulaId::HalfIntegerAlt,
        FormulaId::RatioIdentity,
    ];

    /// Stable kebab-case name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::EulerProduct => "euler",
            FormulaId::MagnitudeMain => "magnitude-main",
            FormulaId::MagnitudeCosh => "magnitude-cosh",
            FormulaId::IntegerSqrt => "integer-sqrt",
            FormulaId::IntegerRationalized => "integer-rationalized",
            FormulaId::AltProduct => "alt-product",
            FormulaId::HalfIntegerMain => "half-integer-main",
            FormulaId::HalfIntegerAlt => "half-integer-alt",
            FormulaId::RatioIdentity => "ratio-identity",
        }
    }

    /// Equation label carried in machine-readable provenance output.
    pub fn eq_ref(self) -> &'static str {
        match self {
            FormulaId::EulerProduct => "(1)",
            FormulaId::RatioIdentity => "(5)",
            FormulaId::MagnitudeMain => "(6)",
            FormulaId::MagnitudeCosh => "(7)",
            FormulaId::IntegerSqrt => "(11)",
            FormulaId::IntegerRationalized => "(12)",
            FormulaId::HalfIntegerMain => "(20)",
            FormulaId::AltProduct => "(24)",
            FormulaId::HalfIntegerAlt => "(28)",
        }
    }

    pub fn is_magnitude(self) -> bool {
        matches!(self, FormulaId::MagnitudeMain | FormulaId::MagnitudeCosh)
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown formula `{s}`")))
    }
}

/// The argument `s = σ + it`, held as exact rationals.
///
/// Decimal input such as `1.5` or `2.25e0` is a rational number, so both parts
/// are parsed exactly and only rounded when converted to a working precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexArgument {
    pub sigma: Rational,
    pub t: Rational,
}

impl ComplexArgument {
    pub fn new(sigma: Rational, t: Rational) -> Self {
        ComplexArgument { sigma, t }
    }

    pub fn real(sigma: impl Into<Rational>) -> Self {
        ComplexArgument {
            sigma: sigma.into(),
            t: Rational::new(),
        }
    }

    pub fn parse(sigma: &str, t: &str) -> Result<Self> {
        Ok(ComplexArgument {
            sigma: parse_exact(sigma)?,
            t: parse_exact(t)?,
        })
    }

    pub fn is_real(&self) -> bool {
        self.t.cmp0().is_eq()
    }

    /// `σ` as an integer, if it is one.
    pub fn integer_sigma(&self) -> Option<u32> {
        if *self.sigma.denom() == 1 {
            self.sigma.numer().to_u32()
        } else {
            None
        }
    }

    pub fn is_three_halves(&self) -> bool {
        self.sigma == (3, 2)
    }

    pub fn sigma_float(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.sigma)
    }

    pub fn t_float(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.t)
    }

    pub(crate) fn require_convergent(&self) -> Result<()> {
        if self.sigma <= 1 {
            return Err(Error::domain(format!(
                "sigma = {} but the product only converges for sigma > 1",
                fraction_string(&self.sigma)
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ComplexArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}i",
            fraction_string(&self.sigma),
            fraction_string(&self.t)
        )
    }
}

/// Renders a rational as `num/den`, always including the denominator.
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b`, an integer, or a decimal with optional exponent into an exact
/// rational.
pub fn parse_exact(input: &str) -> Result<Rational> {
    let s = input.trim();
    let bad = || Error::Parse(format!("not a rational or decimal number: `{input}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: Integer = n.trim().parse().map_err(|_| bad())?;
        let d: Integer = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in `{input}`")));
        }
        return Ok(Rational::from((n, d)));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(digits.parse::<Integer>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten_pow = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    if scale >= 0 {
        value *= ten_pow;
    } else {
        value /= ten_pow;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_exact("3/2").unwrap(), (3, 2));
        assert_eq!(parse_exact("1.5").unwrap(), (3, 2));
        assert_eq!(parse_exact("15e-1").unwrap(), (3, 2));
        assert_eq!(parse_exact("-0.25").unwrap(), (-1, 4));
        assert_eq!(parse_exact("3").unwrap(), 3);
        assert_eq!(parse_exact("3.0").unwrap(), 3);
        assert_eq!(parse_exact(".5").unwrap(), (1, 2));
        assert_eq!(parse_exact("6/4").unwrap(), (3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "--1", "1e", "."] {
            assert!(parse_exact(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formula_names_round_trip() {
        for id in FormulaId::ALL {
            assert_eq!(id.name().parse::<FormulaId>().unwrap(), id);
        }
        assert!("zeta".parse::<FormulaId>().is_err());
    }

    #[test]
    fn integer_sigma_detection() {
        assert_eq!(
            ComplexArgument::parse("3", "0").unwrap().integer_sigma(),
            Some(3)
        );
        assert_eq!(
            ComplexArgument::parse("1.5", "0").unwrap().integer_sigma(),
            None
        );
        assert!(ComplexArgument::parse("1.5", "0")
            .unwrap()
            .is_three_halves());
    }

    #[test]
    fn fraction_string_keeps_unit_denominator() {
        assert_eq!(fraction_string(&Rational::from(7)), "7/1");
        assert_eq!(fraction_string(&Rational::from((-2, 4))), "-1/2");
    }
}
