//! Independent reference values of `ζ(s)` for `Re(s) > 1`.
//!
//! The oracle sums the alternating Dirichlet eta series with Borwein's
//! Chebyshev-weighted acceleration and divides by `1 − 2^{1−s}`. It touches
//! neither the prime sieve nor the Bernoulli tables, so agreement with the
//! product formulas is a genuine cross-check.
//!
//! With `d_k = n Σ_{i=0}^{k} (n+i−1)! 4^i / ((n−i)! (2i)!)`,
//!
//! ```text
//! ζ(s) = −1/(d_n (1 − 2^{1−s})) Σ_{k=0}^{n−1} (−1)^k (d_k − d_n)/(k+1)^s + γ_n(s)
//! |γ_n(s)| ≤ 3 (1 + 2|t|) e^{π|t|/2} / ((3 + √8)^n |1 − 2^{1−s}|)     (σ ≥ 1/2)
//! ```

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::formula::ComplexArgument;
use crate::precision::PrecisionContext;

/// Extra bits carried through the series beyond the working precision.
const ORACLE_GUARD_BITS: u32 = 32;
/// Multiplier applied to both the remainder and rounding estimates.
const SAFETY: u32 = 4;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub argument: ComplexArgument,
    pub re: Float,
    pub im: Float,
    /// Absolute bound on `|computed − ζ(s)|` (or on the modulus error for
    /// [`reference_magnitude`], where `im` is zero).
    pub error_bound: Float,
    pub terms: u32,
}

impl OracleResult {
    pub fn modulus(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }
}

#[derive(Clone)]
struct Complex {
    re: Float,
    im: Float,
}

impl Complex {
    fn mul(&self, other: &Complex, prec: u32) -> Complex {
        let re = Float::with_val(prec, &self.re * &other.re)
            - Float::with_val(prec, &self.im * &other.im);
        let im = Float::with_val(prec, &self.re * &other.im)
            + Float::with_val(prec, &self.im * &other.re);
        Complex { re, im }
    }

    fn div(&self, other: &Complex, prec: u32) -> Complex {
        let den = Float::with_val(prec, other.re.square_ref())
            + Float::with_val(prec, other.im.square_ref());
        let conj = Complex {
            re: other.re.clone(),
            im: Float::with_val(prec, -&other.im),
        };
        let num = self.mul(&conj, prec);
        Complex {
            re: num.re / &den,
            im: num.im / &den,
        }
    }

    fn abs(&self, prec: u32) -> Float {
        Float::with_val(prec, self.re.hypot_ref(&self.im))
    }
}

/// `n^{−s}` as a complex number.
fn inverse_power(n: u32, sigma: &Float, t: &Float, prec: u32) -> Complex {
    let ln_n = Float::with_val(prec, n).ln();
    let mag = (-Float::with_val(prec, sigma * &ln_n)).exp();
    let angle = Float::with_val(prec, t * &ln_n);
    let (sin, cos) = angle.sin_cos(Float::new(prec));
    Complex {
        re: Float::with_val(prec, &mag * &cos),
        im: -(mag * sin),
    }
}

/// Integer weights `d_0 … d_n` of the accelerated series.
fn borwein_weights(n: u32) -> Vec<Rational> {
    let nn = Integer::from(n);
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut partial = Rational::new();
    for i in 0..=n {
        let num =
            Integer::from(Integer::factorial(n + i - 1)) * Integer::from(Integer::u_pow_u(4, i));
        let den =
            Integer::from(Integer::factorial(n - i)) * Integer::from(Integer::factorial(2 * i));
        partial += Rational::from((num, den));
        d.push(Rational::from(&partial * &nn));
    }
    d
}

fn check_domain(arg: &ComplexArgument) -> Result<()> {
    if arg.sigma <= 1 {
        return Err(Error::domain(
            "the reference oracle is only defined for Re(s) > 1",
        ));
    }
    Ok(())
}

/// `ζ(σ + it)` to `ctx.target_decimal_digits() + 2` decimals, with an
/// absolute error bound.
///
/// Fails with a precision error when the term count needed exceeds
/// `4 × target_digits` (large `|t|` makes the remainder bound grow like
/// `e^{π|t|/2}`).
pub fn reference_zeta(arg: &ComplexArgument, ctx: &PrecisionContext) -> Result<OracleResult> {
    check_domain(arg)?;
    let target = ctx.target_decimal_digits();
    let prec = ctx.working_precision_bits() + ORACLE_GUARD_BITS;
    let sigma = arg.sigma_float(prec);
    let t = arg.t_float(prec);
    let abs_t = Float::with_val(prec, t.abs_ref());

    // 1 − 2^{1−s}
    let two_pow = inverse_power(2, &Float::with_val(prec, &sigma - 1u32), &t, prec);
    let denom = Complex {
        re: Float::with_val(prec, 1u32 - &two_pow.re),
        im: Float::with_val(prec, -&two_pow.im),
    };
    let denom_abs = denom.abs(prec);

    // ln of the remainder prefactor 3(1+2|t|)e^{π|t|/2}/|1−2^{1−s}|, times SAFETY
    let t_f64 = abs_t.to_f64();
    let ln_prefactor =
        f64::from(3 * SAFETY).ln() + (1.0 + 2.0 * t_f64).ln() + std::f64::consts::FRAC_PI_2 * t_f64
            - denom_abs.to_f64().ln();
    let tolerance_ln = -f64::from(target + 2) * std::f64::consts::LN_10 - std::f64::consts::LN_2;
    let rate = (3.0 + 8f64.sqrt()).ln();
    let needed = ((ln_prefactor - tolerance_ln) / rate).ceil().max(1.0);
    let cap = 4 * target;
    if needed > f64::from(cap) {
        return Err(Error::precision(format!(
            "reference value for s = {arg} needs {needed} series terms, cap is {cap}"
        )));
    }
    let n = needed as u32;

    let d = borwein_weights(n);
    let d_n = &d[n as usize];
    let mut sum = Complex {
        re: Float::new(prec),
        im: Float::new(prec),
    };
    for k in 0..n {
        let weight = Float::with_val(prec, Rational::from(&d[k as usize] - d_n) / d_n);
        let term = inverse_power(k + 1, &sigma, &t, prec);
        let re = Float::with_val(prec, &weight * &term.re);
        let im = Float::with_val(prec, &weight * &term.im);
        if k % 2 == 0 {
            sum.re += re;
            sum.im += im;
        } else {
            sum.re -= re;
            sum.im -= im;
        }
    }
    let zeta = sum.div(&denom, prec);
    let re = Float::with_val(prec, -&zeta.re);
    let im = Float::with_val(prec, -&zeta.im);

    let bound_prec = 64;
    let remainder = Float::with_val(bound_prec, 3 * SAFETY)
        * Float::with_val(
            bound_prec,
            1u32 + Float::with_val(bound_prec, &abs_t * 2u32),
        )
        * Float::with_val(
            bound_prec,
            Float::with_val(bound_prec, Constant::Pi) * &abs_t / 2u32,
        )
        .exp()
        / Float::with_val(bound_prec, 3u32 + Float::with_val(bound_prec, 8u32).sqrt()).pow(n)
        / Float::with_val(bound_prec, &denom_abs);
    // each term carries ≲ (8 + 2(σ+|t|) ln(k+1)) ulps; the division adds a few more
    let per_term = 8.0 + 2.0 * (sigma.to_f64() + t_f64) * f64::from(n + 1).ln();
    let ulps = f64::from(n) * (per_term + 1.0) + 16.0;
    let rounding = Float::with_val(bound_prec, f64::from(SAFETY) * ulps)
        * Float::with_val(bound_prec, Float::i_exp(1, -(prec as i32)))
        / Float::with_val(bound_prec, &denom_abs);
    let error_bound = remainder + rounding;

    let tolerance = Float::with_val(bound_prec, 10u32).pow(-(target as i32 + 2));
    if error_bound >= tolerance {
        return Err(Error::precision(format!(
            "reference error bound for s = {arg} does not reach 1e-{}",
            target + 2
        )));
    }

    Ok(OracleResult {
        argument: arg.clone(),
        re,
        im,
        error_bound,
        terms: n,
    })
}

/// `|ζ(σ + it)|` with the error bound carried through the modulus.
pub fn reference_magnitude(arg: &ComplexArgument, ctx: &PrecisionContext) -> Result<OracleResult> {
    let z = reference_zeta(arg, ctx)?;
    let prec = z.re.prec();
    let modulus = z.modulus();
    // ||a| − |b|| ≤ |a − b|, plus one rounding of the hypot
    let error_bound = Float::with_val(64, &z.error_bound)
        + Float::with_val(64, &modulus) * Float::with_val(64, Float::i_exp(1, 1 - prec as i32));
    Ok(OracleResult {
        argument: z.argument,
        re: modulus,
        im: Float::new(prec),
        error_bound,
        terms: z.terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(value: &Float, expected: &str, tol: f64) -> bool {
        let e = Float::with_val(value.prec(), Float::parse(expected).unwrap());
        Float::with_val(value.prec(), value - &e).abs().to_f64() < tol
    }

    #[test]
    fn zeta_two_and_three_halves() {
        let ctx = PrecisionContext::for_digits(30);
        let z2 = reference_zeta(&ComplexArgument::real(2), &ctx).unwrap();
        // π²/6
        assert!(close(
            &z2.re,
            "1.6449340668482264364724151666460251892",
            1e-31
        ));
        assert!(z2.im.is_zero());
        let z32 = reference_zeta(&ComplexArgument::real(Rational::from((3, 2))), &ctx).unwrap();
        assert!(close(
            &z32.re,
            "2.6123753486854883433485675679240716305",
            1e-31
        ));
    }

    #[test]
    fn magnitude_at_two_plus_i() {
        let ctx = PrecisionContext::for_digits(20);
        let arg = ComplexArgument::parse("2", "1").unwrap();
        let m = reference_magnitude(&arg, &ctx).unwrap();
        assert!(close(&m.re, "1.2307524132186146489", 1e-19));
    }

    #[test]
    fn t_zero_magnitude_equals_value() {
        let ctx = PrecisionContext::for_digits(20);
        let arg = ComplexArgument::real(3);
        let z = reference_zeta(&arg, &ctx).unwrap();
        let m = reference_magnitude(&arg, &ctx).unwrap();
        assert_eq!(z.re, m.re);
    }

    #[test]
    fn rejects_sigma_at_most_one() {
        let ctx = PrecisionContext::for_digits(10);
        assert!(matches!(
            reference_zeta(&ComplexArgument::real(1), &ctx),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            reference_zeta(&ComplexArgument::parse("0.5", "14").unwrap(), &ctx),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn large_height_hits_term_cap() {
        let ctx = PrecisionContext::for_digits(10);
        let arg = ComplexArgument::parse("2", "200").unwrap();
        assert!(matches!(
            reference_zeta(&arg, &ctx),
            Err(Error::Precision { .. })
        ));
    }

    #[test]
    fn weights_start_at_one() {
        let d = borwein_weights(5);
        assert_eq!(d[0], 1);
        // d_1 = 1 + 2n²
        assert_eq!(d[1], 51);
    }
}
