//! Evaluation of the prime-product formulas with truncation and rounding
//! bounds.
//!
//! Every formula has the shape
//!
//! ```text
//! value = C · (Π_{p ≤ P} F(p))^e
//! ```
//!
//! where `C` is a leading coefficient, `F` the per-prime factor and `e` the
//! outer exponent (`1/2` for the magnitude forms, `1` otherwise). Fractional
//! exponents that belong to the factor itself (the `−1/2` of the integer
//! formula, the `1/4` of the half-integer ones) are applied per prime, so every
//! partial product is itself a meaningful approximation.
//!
//! Factors are computed at the working precision plus enough guard bits that
//! their own error is negligible next to the one rounding incurred when they
//! are multiplied into the running product.

use std::time::Instant;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::formula::{ComplexArgument, FormulaId};
use crate::oracle;
use crate::precision::PrecisionContext;
use crate::primes::{self, PrimeBlock, DEFAULT_BLOCK_SIZE};
use crate::rational::{self, CoefficientResult};

/// Largest `|t · ln p|` accepted for the cosine; beyond it no extended-range
/// argument reduction is attempted.
pub const MAX_ANGLE: f64 = (1u64 << 30) as f64;

/// Default ceiling on the primes consumed by [`PrimeCount::Auto`].
pub const DEFAULT_AUTO_MAX_PRIMES: u64 = 1 << 21;

/// Precision used when computing bounds.
const BOUND_PREC: u32 = 128;

/// How many primes to multiply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeCount {
    Fixed(u64),
    /// Grow block by block until the truncation bound drops below
    /// `10^{−(target_digits + 1)}`, or `max_primes` is reached.
    Auto {
        max_primes: u64,
    },
}

/// Block partitioning and thread count for [`parallel_reduce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceOptions {
    pub block_size: usize,
    /// `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            block_size: DEFAULT_BLOCK_SIZE,
            threads: None,
        }
    }
}

/// The result of multiplying out one formula.
#[derive(Debug, Clone)]
pub struct ProductEvaluation {
    pub formula: FormulaId,
    pub argument: ComplexArgument,
    pub primes_used: u64,
    pub last_prime: u64,
    /// `Π F(p)` over the primes used, before the coefficient and outer exponent.
    pub product: Float,
    pub coefficient: Float,
    pub value: Float,
    /// Relative error bound from the omitted primes; `+∞` when nothing can be
    /// certified.
    pub truncation_bound: Float,
    /// Relative bound on accumulated rounding (including the coefficient).
    pub rounding_bound: Float,
    pub certified_digits: u32,
    pub working_precision_bits: u32,
    pub elapsed_ms: u64,
}

impl ProductEvaluation {
    pub fn total_bound(&self) -> Float {
        Float::with_val(BOUND_PREC, &self.truncation_bound + &self.rounding_bound)
    }
}

/// `floor(−log10(bound))`, never rounded up, and zero for bounds `≥ 1`.
pub fn certified_digits(bound: &Float) -> u32 {
    if bound.is_nan() || bound.is_infinite() || *bound >= 1u32 {
        return 0;
    }
    if bound.is_zero() {
        return u32::MAX;
    }
    // nudge the bound up so the floor can only err low
    let nudged = Float::with_val(64, bound * Float::with_val(64, 1.0 + 1e-12));
    let digits = (-nudged.log10()).floor();
    digits.to_f64().max(0.0) as u32
}

fn validate(formula: FormulaId, arg: &ComplexArgument) -> Result<()> {
    arg.require_convergent()?;
    match formula {
        FormulaId::EulerProduct | FormulaId::MagnitudeMain | FormulaId::MagnitudeCosh => Ok(()),
        FormulaId::RatioIdentity => {
            if arg.is_real() {
                Ok(())
            } else {
                Err(Error::domain(
                    "the ratio identity product is only evaluated for real sigma",
                ))
            }
        }
        FormulaId::IntegerSqrt | FormulaId::IntegerRationalized | FormulaId::AltProduct => {
            if arg.integer_sigma().is_none() {
                return Err(Error::domain(format!(
                    "{formula} needs an integer sigma >= 2, got {}",
                    crate::formula::fraction_string(&arg.sigma)
                )));
            }
            if !arg.is_real() {
                return Err(Error::domain(format!(
                    "{formula} is a real-argument formula; use magnitude-main or magnitude-cosh for t != 0"
                )));
            }
            Ok(())
        }
        FormulaId::HalfIntegerMain | FormulaId::HalfIntegerAlt => {
            if !arg.is_three_halves() || !arg.is_real() {
                return Err(Error::domain(format!(
                    "{formula} is defined only at s = 3/2"
                )));
            }
            Ok(())
        }
    }
}

fn check_angle(arg: &ComplexArgument, max_prime: u64) -> Result<()> {
    let angle = arg.t_float(64).abs().to_f64() * (max_prime as f64).ln();
    if angle > MAX_ANGLE {
        return Err(Error::domain(format!(
            "|t ln p| reaches {angle:.3e}, above the supported 2^30"
        )));
    }
    Ok(())
}

/// Guard bits for per-prime factors: enough to absorb amplification through
/// `ln`, `cos`, `cosh` and real powers for primes up to `max_prime`.
fn factor_guard_bits(arg: &ComplexArgument, max_prime: u64) -> u32 {
    let scale = (arg.sigma_float(64).to_f64() + arg.t_float(64).abs().to_f64())
        * (max_prime.max(2) as f64).ln();
    24 + (2.0 + scale).log2().ceil() as u32
}

/// Per-prime factor evaluator with the argument converted once.
pub(crate) struct FactorKernel {
    formula: FormulaId,
    prec: u32,
    sigma: Float,
    t: Float,
    int_sigma: Option<u32>,
    three_halves: bool,
    real: bool,
}

impl FactorKernel {
    pub(crate) fn new(formula: FormulaId, arg: &ComplexArgument, prec: u32) -> Self {
        FactorKernel {
            formula,
            prec,
            sigma: arg.sigma_float(prec),
            t: arg.t_float(prec),
            int_sigma: arg.integer_sigma(),
            three_halves: arg.is_three_halves(),
            real: arg.is_real(),
        }
    }

    fn int_pow(&self, p: u64, k: u32) -> Integer {
        Integer::from(p).pow(k)
    }

    /// `p^σ` at factor precision.
    fn p_sigma(&self, p: u64) -> Float {
        let prec = self.prec;
        if let Some(k) = self.int_sigma {
            Float::with_val(prec, self.int_pow(p, k))
        } else if self.three_halves {
            Float::with_val(prec, self.int_pow(p, 3)).sqrt()
        } else {
            Float::with_val(prec, p).pow(&self.sigma)
        }
    }

    fn cos_t_ln_p(&self, p: u64) -> Float {
        if self.real {
            return Float::with_val(self.prec, 1u32);
        }
        let ln_p = Float::with_val(self.prec, p).ln();
        Float::with_val(self.prec, &self.t * &ln_p).cos()
    }

    /// `2/(P + 1/P)`, i.e. `1/cosh(σ ln p)` built from the power `P = p^σ`.
    fn sech_from_power(power: &Float) -> Float {
        let sum = Float::with_val(power.prec(), power + power.clone().recip());
        Float::with_val(power.prec(), 2u32 / sum)
    }

    /// `(a + 1)/(a − 1)` for an exact integer `a ≥ 2`, correctly rounded.
    fn exact_ratio(&self, a: &Integer, plus: bool) -> Float {
        let (num, den) = if plus {
            (Integer::from(a + 1u32), Integer::from(a - 1u32))
        } else {
            (a.clone(), Integer::from(a - 1u32))
        };
        Float::with_val(self.prec, Rational::from((num, den)))
    }

    pub(crate) fn factor(&self, p: u64) -> Float {
        let prec = self.prec;
        let f = match self.formula {
            FormulaId::EulerProduct => {
                if self.real {
                    match self.int_sigma {
                        Some(k) => self.exact_ratio(&self.int_pow(p, k), false),
                        None => {
                            let ps = self.p_sigma(p);
                            let den = Float::with_val(prec, &ps - 1u32);
                            ps / den
                        }
                    }
                } else {
                    // |1 − p^{−s}|^{−1} = (1 − 2u cos(t ln p) + u²)^{−1/2}, u = p^{−σ}
                    let u = self.p_sigma(p).recip();
                    let c = self.cos_t_ln_p(p);
                    let two_uc = Float::with_val(prec, &u * &c) * 2u32;
                    let inner = Float::with_val(prec, 1u32 - two_uc)
                        + Float::with_val(prec, u.square_ref());
                    inner.recip_sqrt()
                }
            }
            FormulaId::RatioIdentity => match self.int_sigma {
                Some(k) => {
                    let a = self.int_pow(p, k);
                    let den = Integer::from(&a + 1u32);
                    Float::with_val(prec, Rational::from((a, den)))
                }
                None => {
                    let ps = self.p_sigma(p);
                    let den = Float::with_val(prec, &ps + 1u32);
                    ps / den
                }
            },
            FormulaId::MagnitudeMain => {
                let x = Self::sech_from_power(&self.p_sigma(p));
                let cx = x * self.cos_t_ln_p(p);
                Float::with_val(prec, 1u32 - cx).recip()
            }
            FormulaId::MagnitudeCosh => {
                let ln_p = Float::with_val(prec, p).ln();
                let ch = Float::with_val(prec, &self.sigma * &ln_p).cosh();
                let ratio = self.cos_t_ln_p(p) / ch;
                Float::with_val(prec, 1u32 - ratio).recip()
            }
            FormulaId::IntegerSqrt => {
                let x = Self::sech_from_power(&self.p_sigma(p));
                Float::with_val(prec, 1u32 - x).recip_sqrt()
            }
            FormulaId::IntegerRationalized => {
                let k = self.int_sigma.expect("validated integer sigma");
                let a = self.int_pow(p, k);
                let num = Float::with_val(prec, Integer::from(a.square_ref()) + 1u32).sqrt();
                num / (a - 1u32)
            }
            FormulaId::AltProduct => {
                let k = self.int_sigma.expect("validated integer sigma");
                self.exact_ratio(&self.int_pow(p, k), true).sqrt()
            }
            FormulaId::HalfIntegerMain => {
                let x1 = Self::sech_from_power(&self.p_sigma(p));
                let x3 = Self::sech_from_power(&Float::with_val(prec, self.int_pow(p, 3)));
                let a = Float::with_val(prec, 1u32 - x1).recip_sqrt();
                let b = Float::with_val(prec, 1u32 - x3).sqrt().sqrt();
                a * b
            }
            FormulaId::HalfIntegerAlt => {
                let ps = self.p_sigma(p);
                let a = Float::with_val(prec, &ps + 1u32) / Float::with_val(prec, &ps - 1u32);
                let b = self.exact_ratio(&self.int_pow(p, 3), true);
                a.sqrt() * b.sqrt().sqrt()
            }
        };
        debug_assert!(f.is_finite() && f.is_sign_positive());
        f
    }
}

/// A single prime factor `F(p)`, without the outer exponent.
///
/// For the magnitude forms this is `(1 − cos(t ln p)/cosh(σ ln p))^{−1}` (the
/// square root is taken once, on the whole product); for the integer and
/// half-integer forms the fractional exponents are already applied.
pub fn per_prime_factor(
    formula: FormulaId,
    arg: &ComplexArgument,
    p: u64,
    ctx: &PrecisionContext,
) -> Result<Float> {
    validate(formula, arg)?;
    if p < 2 {
        return Err(Error::domain(format!("{p} is not a prime")));
    }
    check_angle(arg, p)?;
    let prec = ctx.working_precision_bits() + factor_guard_bits(arg, p);
    Ok(FactorKernel::new(formula, arg, prec).factor(p))
}

/// Outer exponent applied to the whole product.
fn outer_exponent_is_half(formula: FormulaId) -> bool {
    formula.is_magnitude()
}

/// `π^{pi_power} · radicand^{1/root}` at precision `prec`.
pub fn coefficient_value(c: &CoefficientResult, prec: u32) -> Float {
    let pi = Float::with_val(prec, Constant::Pi);
    let pi_part = if *c.pi_power.denom() == 1 {
        pi.pow(c.pi_power.numer().to_u32().expect("small pi power"))
    } else {
        // only halves occur
        debug_assert_eq!(*c.pi_power.denom(), 2);
        let whole = c.pi_power.numer().to_u32().expect("small pi power");
        Float::with_val(prec, pi.clone().pow(whole)).sqrt()
    };
    let r = Float::with_val(prec, &c.radicand);
    let root = match c.root {
        2 => r.sqrt(),
        4 => r.sqrt().sqrt(),
        n => r.pow(Float::with_val(prec, n).recip()),
    };
    pi_part * root
}

/// Leading coefficient `C` and a relative bound on its error (beyond the few
/// ulps covered by the rounding budget).
///
/// For the magnitude forms `C = √(ζ(4σ)/ζ(2σ))`. Even zeta values come from
/// exact rationals; any other zeta value needed is taken from the reference
/// oracle at the factor precision.
pub fn leading_coefficient(
    formula: FormulaId,
    arg: &ComplexArgument,
    ctx: &PrecisionContext,
) -> Result<(Float, Float)> {
    validate(formula, arg)?;
    let prec = ctx.working_precision_bits() + 32;
    let exact = |c: CoefficientResult| (coefficient_value(&c, prec), Float::new(BOUND_PREC));
    match formula {
        FormulaId::EulerProduct | FormulaId::RatioIdentity => {
            Ok((Float::with_val(prec, 1u32), Float::new(BOUND_PREC)))
        }
        FormulaId::IntegerSqrt | FormulaId::IntegerRationalized => {
            let k = arg.integer_sigma().expect("validated");
            Ok(exact(rational::main_coefficient(k)?))
        }
        FormulaId::AltProduct => {
            let k = arg.integer_sigma().expect("validated");
            Ok(exact(rational::alt_coefficient(k)?))
        }
        FormulaId::HalfIntegerMain => Ok(exact(rational::half_integer_coefficient())),
        FormulaId::HalfIntegerAlt => Ok(exact(rational::half_integer_alt_coefficient())),
        FormulaId::MagnitudeMain | FormulaId::MagnitudeCosh => {
            if let Some(k) = arg.integer_sigma() {
                return Ok(exact(rational::main_coefficient(k)?));
            }
            let oracle_digits = (f64::from(prec) * std::f64::consts::LOG10_2).floor() as u32 - 12;
            let octx = PrecisionContext::for_digits(oracle_digits);
            let two_sigma = Rational::from(&arg.sigma * 2u32);
            let four_sigma = Rational::from(&arg.sigma * 4u32);
            let (num, num_err) = zeta_real(&four_sigma, prec, &octx)?;
            let (den, den_err) = zeta_real(&two_sigma, prec, &octx)?;
            let ratio = Float::with_val(prec, &num / &den);
            // relative error of a ratio ≤ sum of relative errors (first order), halved by the root
            let rel = Float::with_val(BOUND_PREC, &num_err / &num)
                + Float::with_val(BOUND_PREC, &den_err / &den);
            let rel = Float::with_val(BOUND_PREC, &rel * 0.75f64);
            Ok((ratio.sqrt(), rel))
        }
    }
}

/// `ζ(x)` for real rational `x > 1`: exact for even integers, oracle otherwise.
fn zeta_real(x: &Rational, prec: u32, octx: &PrecisionContext) -> Result<(Float, Float)> {
    if *x.denom() == 1 && x.numer().is_even() {
        let k = (x.numer().to_u32().expect("small order")) / 2;
        let pi = Float::with_val(prec, Constant::Pi).pow(2 * k);
        let r = Float::with_val(prec, &rational::zeta_even_rational(k));
        return Ok((pi * r, Float::new(BOUND_PREC)));
    }
    let r = oracle::reference_zeta(&ComplexArgument::real(x.clone()), octx)?;
    Ok((
        Float::with_val(prec, &r.re),
        Float::with_val(BOUND_PREC, &r.error_bound),
    ))
}

/// `(weight, σ multiple, a)` triples such that for every prime `p > P`
/// `|ln F(p)|·e ≤ Σ weight · a u/(1 − a u)` with `u = p^{−multiple·σ}`.
fn log_factor_terms(formula: FormulaId) -> &'static [(f64, u32, u32)] {
    // multiples are in halves of sigma: 2 means σ, 4 means 2σ
    match formula {
        FormulaId::EulerProduct | FormulaId::AltProduct => &[(1.0, 2, 1)],
        FormulaId::RatioIdentity => &[(1.0, 2, 1)],
        FormulaId::MagnitudeMain | FormulaId::MagnitudeCosh => &[(0.5, 2, 2)],
        FormulaId::IntegerSqrt | FormulaId::IntegerRationalized => &[(0.5, 2, 2)],
        FormulaId::HalfIntegerMain => &[(0.5, 2, 2), (0.25, 4, 2)],
        FormulaId::HalfIntegerAlt => &[(1.0, 2, 1), (0.5, 4, 1)],
    }
}

/// Upper bound on `|value_truncated / value_full − 1|` when the product stops
/// at `last_prime`.
///
/// Each omitted factor satisfies `|ln F(p)| ≤ a u/(1 − a u)` with
/// `u = p^{−σ'}`. Summing `u` over every integer `n > P` instead of only the
/// primes and comparing with `∫_P^∞ x^{−σ'} dx` gives
/// `B = Σ weight · a/(1 − a P^{−σ'}) · P^{1−σ'}/(σ' − 1)`, and
/// `|e^{±B} − 1| ≤ B e^B`. Returns `+∞` if `B e^B ≥ 1`.
pub fn tail_bound(formula: FormulaId, arg: &ComplexArgument, last_prime: u64) -> Result<Float> {
    validate(formula, arg)?;
    if last_prime < 2 {
        return Err(Error::domain("the tail bound needs last_prime >= 2"));
    }
    let prec = BOUND_PREC;
    let big_p = Float::with_val(prec, last_prime);
    let ln_p = Float::with_val(prec, big_p.ln_ref());
    let mut total = Float::new(prec);
    for &(weight, halves, a) in log_factor_terms(formula) {
        let exponent = Float::with_val(prec, arg.sigma_float(prec) * halves) / 2u32;
        let excess = Float::with_val(prec, &exponent - 1u32);
        let p_pow = Float::with_val(prec, -Float::with_val(prec, &exponent * &ln_p)).exp();
        let a_u = Float::with_val(prec, &p_pow * a);
        let shrink = Float::with_val(prec, 1u32 - &a_u);
        if shrink <= 0u32 {
            return Ok(Float::with_val(prec, rug::float::Special::Infinity));
        }
        let integral =
            Float::with_val(prec, -Float::with_val(prec, &excess * &ln_p)).exp() / &excess;
        total += Float::with_val(prec, weight * a as f64) * integral / shrink;
    }
    let bound = Float::with_val(prec, &total * Float::with_val(prec, total.exp_ref()));
    // covers the few roundings above
    let bound = bound * Float::with_val(prec, 1.0 + 2f64.powi(-60));
    if bound >= 1u32 {
        return Ok(Float::with_val(prec, rug::float::Special::Infinity));
    }
    Ok(bound)
}

/// Relative rounding budget: 2 ulps per factor (one for the block product, one
/// for combining blocks, the factor's own error being below an ulp thanks to
/// the guard bits) plus 2 for the coefficient and final combination, times a
/// safety factor of 4.
fn rounding_budget(n_primes: u64, ctx: &PrecisionContext) -> Float {
    let ulp = Float::with_val(
        BOUND_PREC,
        Float::i_exp(1, 1 - ctx.working_precision_bits() as i32),
    );
    ulp * Float::with_val(BOUND_PREC, 4 * (n_primes + 2))
}

fn thread_pool(threads: Option<usize>) -> Option<rayon::ThreadPool> {
    threads.map(|n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
    })
}

/// Running ordered product over prime blocks.
struct BlockReducer<'a, F> {
    factor_fn: F,
    prec: u32,
    pool: Option<&'a rayon::ThreadPool>,
    acc: Float,
    primes_used: u64,
    last_prime: u64,
    next_start: u64,
}

impl<'a, F> BlockReducer<'a, F>
where
    F: Fn(u64) -> Result<Float> + Sync,
{
    fn new(factor_fn: F, prec: u32, pool: Option<&'a rayon::ThreadPool>) -> Self {
        BlockReducer {
            factor_fn,
            prec,
            pool,
            acc: Float::with_val(prec, 1u32),
            primes_used: 0,
            last_prime: 0,
            next_start: 1,
        }
    }

    fn threads(&self) -> usize {
        self.pool
            .map(|p| p.current_num_threads())
            .unwrap_or_else(rayon::current_num_threads)
    }

    fn block_product(&self, block: &PrimeBlock) -> Result<Float> {
        let mut acc = Float::with_val(self.prec, 1u32);
        for &p in &block.primes {
            acc *= (self.factor_fn)(p)?;
        }
        Ok(acc)
    }

    /// Multiplies a batch of consecutive blocks into the running product. Block
    /// products may be computed on any thread; they are combined strictly in
    /// ascending block order.
    fn fold_batch(&mut self, batch: &[PrimeBlock]) -> Result<()> {
        use rayon::prelude::*;
        for block in batch {
            assert_eq!(
                block.start_index, self.next_start,
                "blocks must be consecutive"
            );
            self.next_start += block.len() as u64;
        }
        let compute =
            || -> Vec<Result<Float>> { batch.par_iter().map(|b| self.block_product(b)).collect() };
        let partials = match self.pool {
            Some(pool) => pool.install(compute),
            None => compute(),
        };
        for (block, partial) in batch.iter().zip(partials) {
            self.acc *= partial?;
            self.primes_used += block.len() as u64;
            if let Some(p) = block.last() {
                self.last_prime = p;
            }
        }
        Ok(())
    }
}

/// Deterministic chunked product `Π factor_fn(p)` over all primes in `blocks`.
///
/// Per-block partial products run on a worker pool (`threads = None` uses
/// rayon's global pool), then are combined in ascending block order at the
/// working precision. For fixed blocks and precision the result is
/// bit-identical for any thread count.
pub fn parallel_reduce<I, F>(
    blocks: I,
    factor_fn: F,
    ctx: &PrecisionContext,
    threads: Option<usize>,
) -> Result<Float>
where
    I: IntoIterator<Item = PrimeBlock>,
    F: Fn(u64) -> Result<Float> + Sync,
{
    let pool = thread_pool(threads);
    let mut reducer = BlockReducer::new(factor_fn, ctx.working_precision_bits(), pool.as_ref());
    let batch_len = 4 * reducer.threads();
    let mut blocks = blocks.into_iter().peekable();
    while blocks.peek().is_some() {
        let batch: Vec<PrimeBlock> = blocks.by_ref().take(batch_len).collect();
        reducer.fold_batch(&batch)?;
    }
    Ok(reducer.acc)
}

/// Evaluates `formula` over the first `n_primes` primes with default options.
pub fn evaluate(
    formula: FormulaId,
    arg: &ComplexArgument,
    n_primes: u64,
    ctx: &PrecisionContext,
) -> Result<ProductEvaluation> {
    evaluate_with(
        formula,
        arg,
        PrimeCount::Fixed(n_primes),
        ctx,
        &ReduceOptions::default(),
    )
}

/// Evaluates `formula` with an explicit prime count policy and reduction
/// options.
///
/// Fails with [`Error::Precision`] (carrying the evaluation) when fewer than one
/// digit can be certified. In auto mode the count grows in whole batches of
/// blocks, so the result equals a fixed-count evaluation with the same
/// `primes_used` and block size.
pub fn evaluate_with(
    formula: FormulaId,
    arg: &ComplexArgument,
    count: PrimeCount,
    ctx: &PrecisionContext,
    options: &ReduceOptions,
) -> Result<ProductEvaluation> {
    let started = Instant::now();
    validate(formula, arg)?;
    let max_primes = match count {
        PrimeCount::Fixed(n) => n,
        PrimeCount::Auto { max_primes } => max_primes,
    };
    let blocks = primes::prime_blocks(max_primes, options.block_size)?;
    let max_prime = primes::nth_prime_upper_bound(max_primes);
    check_angle(arg, max_prime)?;

    let wp = ctx.working_precision_bits();
    let factor_prec = wp + factor_guard_bits(arg, max_prime);
    let kernel = FactorKernel::new(formula, arg, factor_prec);
    let (coefficient, coefficient_err) = leading_coefficient(formula, arg, ctx)?;

    let stop_below =
        Float::with_val(BOUND_PREC, 10u32).pow(-(ctx.target_decimal_digits() as i32 + 1));
    let pool = thread_pool(options.threads);
    let mut reducer = BlockReducer::new(|p| Ok(kernel.factor(p)), wp, pool.as_ref());
    let batch_len = 4 * reducer.threads();
    let mut blocks = blocks.peekable();
    while blocks.peek().is_some() {
        let batch: Vec<PrimeBlock> = blocks.by_ref().take(batch_len).collect();
        reducer.fold_batch(&batch)?;
        if matches!(count, PrimeCount::Auto { .. })
            && tail_bound(formula, arg, reducer.last_prime)? < stop_below
        {
            break;
        }
    }

    let product = reducer.acc;
    let value = if outer_exponent_is_half(formula) {
        Float::with_val(
            wp,
            &coefficient * Float::with_val(wp + 32, product.sqrt_ref()),
        )
    } else {
        Float::with_val(wp, &coefficient * &product)
    };
    let truncation_bound = tail_bound(formula, arg, reducer.last_prime)?;
    let rounding_bound = rounding_budget(reducer.primes_used, ctx) + coefficient_err;
    let total = Float::with_val(BOUND_PREC, &truncation_bound + &rounding_bound);
    let evaluation = ProductEvaluation {
        formula,
        argument: arg.clone(),
        primes_used: reducer.primes_used,
        last_prime: reducer.last_prime,
        product,
        coefficient: Float::with_val(wp, &coefficient),
        value,
        truncation_bound,
        rounding_bound,
        certified_digits: certified_digits(&total),
        working_precision_bits: wp,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    if evaluation.certified_digits < 1 {
        return Err(Error::Precision {
            message: format!(
                "{} primes certify no digits of {formula} at s = {arg}; raise the prime count",
                evaluation.primes_used
            ),
            evaluation: Some(Box::new(evaluation)),
        });
    }
    Ok(evaluation)
}

/// Like [`evaluate_with`], but hands back the evaluation even when it
/// certifies no digits.
pub fn evaluate_uncertified(
    formula: FormulaId,
    arg: &ComplexArgument,
    count: PrimeCount,
    ctx: &PrecisionContext,
    options: &ReduceOptions,
) -> Result<ProductEvaluation> {
    match evaluate_with(formula, arg, count, ctx, options) {
        Err(Error::Precision {
            evaluation: Some(eval),
            ..
        }) => Ok(*eval),
        other => other,
    }
}

/// `|ζ(2σ)/ζ(σ) − Π_{p ≤ P} (1 + p^{−σ})^{−1}|` with the left side from the
/// reference oracle.
pub fn ratio_identity_residual(
    sigma: &Rational,
    n_primes: u64,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let arg = ComplexArgument::real(sigma.clone());
    let eval = evaluate(FormulaId::RatioIdentity, &arg, n_primes, ctx)?;
    let wp = ctx.working_precision_bits();
    let num = oracle::reference_zeta(&ComplexArgument::real(Rational::from(sigma * 2u32)), ctx)?;
    let den = oracle::reference_zeta(&arg, ctx)?;
    let lhs = Float::with_val(wp, &num.re / &den.re);
    Ok(Float::with_val(wp, lhs - &eval.value).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx15() -> PrecisionContext {
        PrecisionContext::for_digits(15)
    }

    #[test]
    fn euler_single_factor_is_four_thirds() {
        let ctx = ctx15();
        let arg = ComplexArgument::real(2);
        let err = evaluate(FormulaId::EulerProduct, &arg, 1, &ctx).unwrap_err();
        let Error::Precision {
            evaluation: Some(eval),
            ..
        } = err
        else {
            panic!("a single prime certifies nothing");
        };
        let expected = Float::with_val(ctx.working_precision_bits(), 4u32) / 3u32;
        assert_eq!(eval.value, expected);
        assert!(eval.truncation_bound.is_infinite());
        assert_eq!(eval.certified_digits, 0);
    }

    #[test]
    fn integer_sqrt_factor_at_two() {
        let ctx = ctx15();
        let f =
            per_prime_factor(FormulaId::IntegerSqrt, &ComplexArgument::real(2), 2, &ctx).unwrap();
        // 1 − 2/(4 + 1/4) = 9/17
        let expected = Float::with_val(200, Rational::from((17, 9))).sqrt();
        let diff = Float::with_val(200, &f - &expected).abs();
        assert!(diff < 1e-35);
    }

    #[test]
    fn alt_factor_at_two() {
        let ctx = ctx15();
        let f =
            per_prime_factor(FormulaId::AltProduct, &ComplexArgument::real(3), 2, &ctx).unwrap();
        let expected = Float::with_val(200, Rational::from((9, 7))).sqrt();
        assert!(Float::with_val(200, &f - &expected).abs() < 1e-35);
    }

    #[test]
    fn magnitude_factor_at_t_zero_squares_integer_factor() {
        let ctx = ctx15();
        for sigma in [2u32, 3, 5] {
            let arg = ComplexArgument::real(sigma);
            for p in [2u64, 3, 7919] {
                let m = per_prime_factor(FormulaId::MagnitudeMain, &arg, p, &ctx).unwrap();
                let i = per_prime_factor(FormulaId::IntegerSqrt, &arg, p, &ctx).unwrap();
                let sq = Float::with_val(200, i.square_ref());
                assert!(Float::with_val(200, &m - &sq).abs() < 1e-35);
            }
        }
    }

    #[test]
    fn domain_errors() {
        let ctx = ctx15();
        let one = ComplexArgument::real(1);
        assert!(matches!(
            evaluate(FormulaId::EulerProduct, &one, 10, &ctx),
            Err(Error::Domain(_))
        ));
        let half = ComplexArgument::real(Rational::from((3, 2)));
        assert!(matches!(
            evaluate(FormulaId::IntegerSqrt, &half, 10, &ctx),
            Err(Error::Domain(_))
        ));
        let complex = ComplexArgument::parse("3", "1").unwrap();
        assert!(matches!(
            evaluate(FormulaId::IntegerSqrt, &complex, 10, &ctx),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            evaluate(
                FormulaId::HalfIntegerMain,
                &ComplexArgument::real(2),
                10,
                &ctx
            ),
            Err(Error::Domain(_))
        ));
        let huge_t = ComplexArgument::parse("2", "1e9").unwrap();
        assert!(matches!(
            evaluate(FormulaId::MagnitudeMain, &huge_t, 10, &ctx),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tail_bound_decreases_with_last_prime() {
        let arg = ComplexArgument::real(2);
        let a = tail_bound(FormulaId::IntegerSqrt, &arg, 101).unwrap();
        let b = tail_bound(FormulaId::IntegerSqrt, &arg, 7919).unwrap();
        assert!(b < a);
    }

    #[test]
    fn tail_bound_infinite_when_useless() {
        let arg = ComplexArgument::real(Rational::from((11, 10)));
        assert!(tail_bound(FormulaId::EulerProduct, &arg, 2)
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn certified_digit_floor() {
        assert_eq!(certified_digits(&Float::with_val(64, 2e-9)), 8);
        assert_eq!(certified_digits(&Float::with_val(64, 1e-3)), 2);
        assert_eq!(certified_digits(&Float::with_val(64, 0.5)), 0);
        assert_eq!(
            certified_digits(&Float::with_val(64, rug::float::Special::Infinity)),
            0
        );
    }
}
