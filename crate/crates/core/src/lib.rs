//! Euler prime-product formulas for the Riemann zeta function.
//!
//! The crate evaluates `ζ(k)` for integers `k ≥ 2`, `ζ(3/2)`, and the magnitude
//! `|ζ(σ + it)|` for `σ > 1` as finite products over the first `N` primes, with
//! a rigorous bound on the relative error from the omitted primes and on
//! accumulated rounding. The closed-form coefficients in front of the products
//! are exact rationals built from Bernoulli numbers, and an independent
//! eta-series oracle supplies reference values.
//!
//! ```
//! use primezeta::{evaluate, ComplexArgument, FormulaId, PrecisionContext};
//!
//! let ctx = PrecisionContext::for_digits(15);
//! let eval = evaluate(FormulaId::IntegerSqrt, &ComplexArgument::real(10), 1000, &ctx).unwrap();
//! assert_eq!(eval.value.to_string_radix(10, Some(15)), "1.00099457512782");
//! assert!(eval.certified_digits >= 15);
//! ```

// gmp-mpfr-sys is a direct dependency only to link against the system GMP/MPFR
use gmp_mpfr_sys as _;

pub use rug;

pub mod error;
pub mod formula;
pub mod oracle;
pub mod precision;
pub mod primes;
pub mod product;
pub mod rational;

pub use error::{Error, Result};
pub use formula::{fraction_string, parse_exact, ComplexArgument, FormulaId};
pub use oracle::{reference_magnitude, reference_zeta, OracleResult};
pub use precision::PrecisionContext;
pub use primes::{first_n_primes, prime_blocks, PrimeBlock};
pub use product::{
    evaluate, evaluate_uncertified, evaluate_with, parallel_reduce, per_prime_factor,
    ratio_identity_residual, tail_bound, PrimeCount, ProductEvaluation, ReduceOptions,
};
pub use rational::{
    alt_coefficient, appendix_a_table, bernoulli, half_integer_coefficient, main_coefficient,
    zeta_even_rational, BigRational, CoefficientResult,
};
