//! Decimal rendering of multiprecision values.

use primezeta::rug::float::Round;
use primezeta::rug::{Float, Rational};

/// How a value is cut down to a fixed number of significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigitConvention {
    RoundHalfEven,
    Truncate,
}

impl DigitConvention {
    pub fn name(self) -> &'static str {
        match self {
            DigitConvention::RoundHalfEven => "round-half-even",
            DigitConvention::Truncate => "truncate",
        }
    }

    fn round(self) -> Round {
        match self {
            DigitConvention::RoundHalfEven => Round::Nearest,
            DigitConvention::Truncate => Round::Zero,
        }
    }
}

/// `value` with exactly `digits` significant decimals, in positional notation.
pub fn significant(value: &Float, digits: u32, convention: DigitConvention) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value.is_sign_negative() {
            "-inf"
        } else {
            "inf"
        }
        .into();
    }
    let digits = digits.max(1) as usize;
    if value.is_zero() {
        return if digits == 1 {
            "0".into()
        } else {
            format!("0.{}", "0".repeat(digits - 1))
        };
    }
    let (negative, mantissa, exp) =
        value.to_sign_string_exp_round(10, Some(digits), convention.round());
    // value = 0.mantissa × 10^exp
    let exp = exp.unwrap_or(0) as i64;
    let len = mantissa.len() as i64;
    let body = if exp <= 0 {
        format!("0.{}{}", "0".repeat((-exp) as usize), mantissa)
    } else if exp < len {
        format!(
            "{}.{}",
            &mantissa[..exp as usize],
            &mantissa[exp as usize..]
        )
    } else {
        format!("{}{}", mantissa, "0".repeat((exp - len) as usize))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Short scientific rendering for bounds, rounded up so the printed bound never
/// understates the true one.
pub fn bound(value: &Float) -> String {
    if value.is_infinite() {
        return "inf".into();
    }
    if value.is_zero() {
        return "0".into();
    }
    let (negative, mantissa, exp) = value.to_sign_string_exp_round(10, Some(2), Round::Up);
    let exp = exp.unwrap_or(0) - 1;
    let sign = if negative { "-" } else { "" };
    format!("{sign}{}.{}e{exp}", &mantissa[..1], &mantissa[1..])
}

/// Exact value of a positional decimal string.
pub fn decimal_to_rational(s: &str) -> Option<Rational> {
    primezeta::parse_exact(s).ok()
}
