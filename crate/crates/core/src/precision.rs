use crate::error::{Error, Result};

/// Minimum number of bits carried beyond the target accuracy.
pub const MIN_GUARD_BITS: u32 = 32;
/// Guard bits used by [`PrecisionContext::for_digits`].
pub const DEFAULT_GUARD_BITS: u32 = 64;

/// Working precision and target accuracy for an inexact evaluation.
///
/// All floating-point operations round to nearest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    working_precision_bits: u32,
    target_decimal_digits: u32,
}

/// `ceil(digits · log2 10)`.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32
}

impl PrecisionContext {
    /// Target `digits` decimal digits with the default guard.
    pub fn for_digits(digits: u32) -> Self {
        let digits = digits.max(1);
        PrecisionContext {
            working_precision_bits: bits_for_digits(digits) + DEFAULT_GUARD_BITS,
            target_decimal_digits: digits,
        }
    }

    pub fn new(target_decimal_digits: u32, working_precision_bits: u32) -> Result<Self> {
        if target_decimal_digits == 0 {
            return Err(Error::Parse("target digits must be positive".into()));
        }
        let needed = bits_for_digits(target_decimal_digits) + MIN_GUARD_BITS;
        if working_precision_bits < needed {
            return Err(Error::Parse(format!(
                "{working_precision_bits} bits cannot carry {target_decimal_digits} digits; need at least {needed}"
            )));
        }
        Ok(PrecisionContext {
            working_precision_bits,
            target_decimal_digits,
        })
    }

    pub fn working_precision_bits(&self) -> u32 {
        self.working_precision_bits
    }

    pub fn target_decimal_digits(&self) -> u32 {
        self.target_decimal_digits
    }

    /// Unit roundoff `2^{−bits}` of the working precision, as an f64.
    pub fn unit_roundoff(&self) -> f64 {
        (-f64::from(self.working_precision_bits)).exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_guard() {
        let ctx = PrecisionContext::for_digits(15);
        assert_eq!(ctx.working_precision_bits(), 50 + 64);
        assert_eq!(ctx.target_decimal_digits(), 15);
    }

    #[test]
    fn enforces_minimum_guard() {
        assert!(PrecisionContext::new(15, 82).is_ok());
        assert!(PrecisionContext::new(15, 81).is_err());
        assert!(PrecisionContext::new(0, 200).is_err());
    }
}
