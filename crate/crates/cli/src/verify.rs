//! `primezeta verify`: properties that tie the formulas to each other, to the
//! exact coefficients and to the reference oracle.

use std::io::Write;

use primezeta::product::{evaluate_uncertified, PrimeCount, ReduceOptions};
use primezeta::rug::float::Constant;
use primezeta::rug::ops::Pow;
use primezeta::rug::{Float, Integer, Rational};
use primezeta::{
    bernoulli, reference_magnitude, reference_zeta, zeta_even_rational, ComplexArgument, FormulaId,
    PrecisionContext, ProductEvaluation,
};

use crate::format::bound;
use crate::report::absolute_bound;
use crate::{exit, Level};

/// Outcome of one property.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Prime counts that differ between the two levels.
#[derive(Debug, Clone, Copy)]
pub struct Sizes {
    pub cross_family_primes: u64,
    pub determinism_primes: u64,
    pub ratio_primes: u64,
    pub oracle_primes: u64,
}

impl Sizes {
    pub fn for_level(level: Level) -> Self {
        match level {
            Level::Quick => Sizes {
                cross_family_primes: 10_000,
                determinism_primes: 20_000,
                ratio_primes: 1_000,
                oracle_primes: 5_000,
            },
            Level::Full => Sizes {
                cross_family_primes: 100_000,
                determinism_primes: 200_000,
                ratio_primes: 100_000,
                oracle_primes: 100_000,
            },
        }
    }
}

fn ctx() -> PrecisionContext {
    PrecisionContext::for_digits(15)
}

type CheckResult = primezeta::Result<Check>;

fn eval_n(
    formula: FormulaId,
    arg: &ComplexArgument,
    n: u64,
) -> primezeta::Result<ProductEvaluation> {
    evaluate_uncertified(
        formula,
        arg,
        PrimeCount::Fixed(n),
        &ctx(),
        &ReduceOptions::default(),
    )
}

fn eval_threads(
    formula: FormulaId,
    arg: &ComplexArgument,
    n: u64,
    threads: usize,
) -> primezeta::Result<ProductEvaluation> {
    let options = ReduceOptions {
        block_size: 512,
        threads: Some(threads),
    };
    evaluate_uncertified(formula, arg, PrimeCount::Fixed(n), &ctx(), &options)
}

fn abs_diff(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec().max(b.prec()), a - b).abs()
}

/// `|a − b|` within the sum of the rounding bounds, for two evaluations of the
/// same partial product.
fn same_partial_product(a: &ProductEvaluation, b: &ProductEvaluation) -> (bool, Float) {
    let diff = abs_diff(&a.value, &b.value);
    let rel = Float::with_val(128, &a.rounding_bound + &b.rounding_bound);
    let tol = rel * Float::with_val(128, a.value.clone().max(&b.value));
    (diff <= tol, diff)
}

pub fn integer_forms_agree() -> CheckResult {
    let mut worst = Float::new(64);
    for k in 2..=11u32 {
        let arg = ComplexArgument::real(k);
        for n in [10, 1000] {
            let a = eval_n(FormulaId::IntegerSqrt, &arg, n)?;
            let b = eval_n(FormulaId::IntegerRationalized, &arg, n)?;
            let (ok, diff) = same_partial_product(&a, &b);
            if !ok {
                return Ok(Check::new(
                    "integer-sqrt ≡ integer-rationalized, k=2..11",
                    false,
                    format!("k={k} n={n} differ by {}", bound(&diff)),
                ));
            }
            worst = worst.max(&diff);
        }
    }
    Ok(Check::new(
        "integer-sqrt ≡ integer-rationalized, k=2..11",
        true,
        format!("n ∈ {{10, 1000}}, largest difference {}", bound(&worst)),
    ))
}

pub fn magnitude_at_real_axis() -> CheckResult {
    let name = "magnitude at t=0 squares to the integer formula squared";
    for sigma in [2u32, 3, 4] {
        let arg = ComplexArgument::real(sigma);
        for n in [10, 100] {
            let reference = eval_n(FormulaId::IntegerSqrt, &arg, n)?;
            let r2 = Float::with_val(256, reference.value.square_ref());
            for formula in [FormulaId::MagnitudeMain, FormulaId::MagnitudeCosh] {
                let m = eval_n(formula, &arg, n)?;
                let m2 = Float::with_val(256, m.value.square_ref());
                let rel =
                    Float::with_val(128, &m.rounding_bound + &reference.rounding_bound) * 3u32;
                let tol = rel * &r2;
                let diff = abs_diff(&m2, &r2);
                if diff > tol {
                    return Ok(Check::new(
                        name,
                        false,
                        format!("{formula} sigma={sigma} n={n} differs by {}", bound(&diff)),
                    ));
                }
            }
        }
    }
    Ok(Check::new(name, true, "sigma ∈ {2, 3, 4}, n ∈ {10, 100}"))
}

pub fn cross_family(n: u64) -> CheckResult {
    let name = format!("integer-sqrt vs alt-product at {n} primes, k=2..11");
    for k in 2..=11u32 {
        let arg = ComplexArgument::real(k);
        let a = eval_n(FormulaId::IntegerSqrt, &arg, n)?;
        let b = eval_n(FormulaId::AltProduct, &arg, n)?;
        let diff = abs_diff(&a.value, &b.value);
        let tol = Float::with_val(128, absolute_bound(&a) + absolute_bound(&b));
        if diff > tol {
            return Ok(Check::new(
                name,
                false,
                format!("k={k}: difference {} exceeds {}", bound(&diff), bound(&tol)),
            ));
        }
    }
    Ok(Check::new(name, true, "within the combined bounds"))
}

/// `|ζ(2σ)/ζ(σ) − Π (1 + p^{−σ})^{−1}|` against the product's own bound. The
/// oracle values carry relative error below `10^{−(d+2)}` each, so three such
/// terms are added for the quotient.
pub fn ratio_identity(n: u64) -> CheckResult {
    let name = format!("ratio identity residual below its bound, {n} primes");
    let c = ctx();
    let mut details = Vec::new();
    for sigma in [Rational::from((3, 2)), Rational::from(2), Rational::from(3)] {
        let arg = ComplexArgument::real(sigma.clone());
        let eval = eval_n(FormulaId::RatioIdentity, &arg, n)?;
        let num = reference_zeta(&ComplexArgument::real(Rational::from(&sigma * 2u32)), &c)?;
        let den = reference_zeta(&arg, &c)?;
        let lhs = Float::with_val(256, &num.re / &den.re);
        let residual = abs_diff(&lhs, &eval.value);
        let oracle_part =
            Float::with_val(128, 10u32).pow(-(c.target_decimal_digits() as i32 + 2)) * 3u32 * &lhs;
        let tol = Float::with_val(128, absolute_bound(&eval) + oracle_part);
        details.push(format!(
            "sigma={}: {} ≤ {}",
            primezeta::fraction_string(&sigma),
            bound(&residual),
            bound(&tol)
        ));
        if residual > tol {
            return Ok(Check::new(name, false, details.join(", ")));
        }
    }
    Ok(Check::new(name, true, details.join(", ")))
}

/// `B_{2n} + Σ_{(p−1) | 2n} 1/p` is an integer.
pub fn von_staudt_clausen(max_index: u32) -> Check {
    let name = format!("von Staudt–Clausen for 2n ≤ {max_index}");
    for two_n in (2..=max_index).step_by(2) {
        let mut sum = bernoulli(two_n);
        for d in 1..=two_n {
            let p = d + 1;
            if two_n % d == 0
                && Integer::from(p).is_probably_prime(30) != primezeta::rug::integer::IsPrime::No
            {
                sum += Rational::from((1, p));
            }
        }
        if *sum.denom() != 1 {
            return Check::new(name, false, format!("fails at 2n = {two_n}"));
        }
    }
    Check::new(name, true, "")
}

pub fn oracle_even_zeta(max_order: u32) -> CheckResult {
    let name = format!("oracle agrees with exact even zeta for 2k ≤ {max_order}");
    let c = ctx();
    let prec = c.working_precision_bits() + 32;
    for k in 1..=max_order / 2 {
        let exact = Float::with_val(prec, Constant::Pi).pow(2 * k)
            * Float::with_val(prec, &zeta_even_rational(k));
        let o = reference_zeta(&ComplexArgument::real(2 * k), &c)?;
        let diff = abs_diff(&o.re, &exact);
        let ulps = Float::with_val(128, &exact) >> (prec as i32 - 8);
        let tol = Float::with_val(128, &o.error_bound + &ulps);
        if diff > tol || !o.im.is_zero() {
            return Ok(Check::new(
                name,
                false,
                format!(
                    "2k={}: difference {} exceeds {}",
                    2 * k,
                    bound(&diff),
                    bound(&tol)
                ),
            ));
        }
    }
    Ok(Check::new(name, true, ""))
}

pub fn determinism(n: u64) -> CheckResult {
    let name = format!("bit-identical reduction on 1, 2 and 8 threads, {n} primes");
    let arg = ComplexArgument::parse("2", "1")?;
    let base = eval_threads(FormulaId::MagnitudeCosh, &arg, n, 1)?;
    let key = |e: &ProductEvaluation| {
        (
            e.product.to_string_radix(16, None),
            e.value.to_string_radix(16, None),
        )
    };
    for threads in [2, 8] {
        let other = eval_threads(FormulaId::MagnitudeCosh, &arg, n, threads)?;
        if key(&other) != key(&base) {
            return Ok(Check::new(
                name,
                false,
                format!("{threads} threads differ from 1 thread"),
            ));
        }
    }
    Ok(Check::new(name, true, ""))
}

/// Every formula against the oracle at an argument where it applies.
pub fn oracle_agreement(n: u64) -> CheckResult {
    let name = format!("every formula within its bound of the oracle, {n} primes");
    let c = ctx();
    let cases: [(FormulaId, &str, &str); 10] = [
        (FormulaId::EulerProduct, "2", "0"),
        (FormulaId::EulerProduct, "2", "1"),
        (FormulaId::MagnitudeMain, "2", "1"),
        (FormulaId::MagnitudeMain, "5/2", "-3"),
        (FormulaId::MagnitudeCosh, "3", "1"),
        (FormulaId::IntegerSqrt, "3", "0"),
        (FormulaId::IntegerRationalized, "4", "0"),
        (FormulaId::AltProduct, "5", "0"),
        (FormulaId::HalfIntegerMain, "3/2", "0"),
        (FormulaId::HalfIntegerAlt, "3/2", "0"),
    ];
    let mut worst_margin = f64::INFINITY;
    for (formula, sigma, t) in cases {
        let arg = ComplexArgument::parse(sigma, t)?;
        let eval = eval_n(formula, &arg, n)?;
        let o = reference_magnitude(&arg, &c)?;
        let diff = abs_diff(&eval.value, &o.re);
        let tol = Float::with_val(128, absolute_bound(&eval) + &o.error_bound);
        if diff > tol {
            return Ok(Check::new(
                name,
                false,
                format!(
                    "{formula} at {arg}: error {} exceeds bound {}",
                    bound(&diff),
                    bound(&tol)
                ),
            ));
        }
        if !diff.is_zero() {
            worst_margin = worst_margin.min((tol / diff).to_f64());
        }
    }
    Ok(Check::new(
        name,
        true,
        format!("smallest bound/error ratio {worst_margin:.1}"),
    ))
}

/// Every factor of the Euler, integer and alternate products exceeds 1 and
/// every ratio-identity factor is below 1, so partial products are monotone.
pub fn monotone_partial_products() -> CheckResult {
    let name = "partial products are monotone in the prime count";
    let cases = [
        (FormulaId::EulerProduct, true),
        (FormulaId::IntegerSqrt, true),
        (FormulaId::AltProduct, true),
        (FormulaId::RatioIdentity, false),
    ];
    let arg = ComplexArgument::real(2);
    for (formula, increasing) in cases {
        let mut prev: Option<Float> = None;
        for n in 1..=60 {
            let v = eval_n(formula, &arg, n)?.value;
            if let Some(p) = &prev {
                let ok = if increasing { v > *p } else { v < *p };
                if !ok {
                    return Ok(Check::new(
                        name,
                        false,
                        format!("{formula} breaks at n = {n}"),
                    ));
                }
            }
            prev = Some(v);
        }
    }
    Ok(Check::new(name, true, "n = 1..60"))
}

pub fn conjugate_symmetry() -> CheckResult {
    let name = "conjugate symmetry of the magnitude formulas and the oracle";
    let c = ctx();
    for formula in [
        FormulaId::MagnitudeMain,
        FormulaId::MagnitudeCosh,
        FormulaId::EulerProduct,
    ] {
        let up = eval_n(formula, &ComplexArgument::parse("2", "7/3")?, 500)?;
        let down = eval_n(formula, &ComplexArgument::parse("2", "-7/3")?, 500)?;
        if up.value != down.value {
            return Ok(Check::new(
                name,
                false,
                format!("{formula} differs under t → −t"),
            ));
        }
    }
    let a = reference_zeta(&ComplexArgument::parse("3/2", "5")?, &c)?;
    let b = reference_zeta(&ComplexArgument::parse("3/2", "-5")?, &c)?;
    let tol = Float::with_val(128, &a.error_bound + &b.error_bound);
    let im_sum = Float::with_val(256, &a.im + &b.im).abs();
    if abs_diff(&a.re, &b.re) > tol || im_sum > tol {
        return Ok(Check::new(name, false, "oracle ζ(conj s) ≠ conj ζ(s)"));
    }
    Ok(Check::new(name, true, ""))
}

/// The two families give the same `ζ(3/2)` to within their bounds.
pub fn half_integer_families(n: u64) -> CheckResult {
    let name = format!("half-integer main and alternate families agree, {n} primes");
    let arg = ComplexArgument::real(Rational::from((3, 2)));
    let a = eval_n(FormulaId::HalfIntegerMain, &arg, n)?;
    let b = eval_n(FormulaId::HalfIntegerAlt, &arg, n)?;
    let diff = abs_diff(&a.value, &b.value);
    let tol = Float::with_val(128, absolute_bound(&a) + absolute_bound(&b));
    Ok(Check::new(
        name,
        diff <= tol,
        format!("difference {} within {}", bound(&diff), bound(&tol)),
    ))
}

/// Runs every property at the given level.
pub fn checks(level: Level) -> Vec<Check> {
    let sizes = Sizes::for_level(level);
    let lift = |name: &str, r: CheckResult| {
        r.unwrap_or_else(|e| Check::new(name, false, format!("error: {e}")))
    };
    vec![
        lift("integer forms", integer_forms_agree()),
        lift("magnitude at t=0", magnitude_at_real_axis()),
        lift("cross family", cross_family(sizes.cross_family_primes)),
        lift("ratio identity", ratio_identity(sizes.ratio_primes)),
        von_staudt_clausen(80),
        lift("oracle even zeta", oracle_even_zeta(20)),
        lift("determinism", determinism(sizes.determinism_primes)),
        lift("oracle agreement", oracle_agreement(sizes.oracle_primes)),
        lift("monotone", monotone_partial_products()),
        lift("conjugate symmetry", conjugate_symmetry()),
        lift(
            "half-integer families",
            half_integer_families(sizes.oracle_primes),
        ),
    ]
}

pub fn run(level: Level, out: &mut dyn Write, _err: &mut dyn Write) -> i32 {
    let results = checks(level);
    let mut failed = 0;
    for c in &results {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!c.passed);
        if c.detail.is_empty() {
            let _ = writeln!(out, "{tag}  {}", c.name);
        } else {
            let _ = writeln!(out, "{tag}  {}  ({})", c.name, c.detail);
        }
    }
    let _ = writeln!(
        out,
        "{} of {} properties passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        exit::OK
    } else {
        exit::VERIFY_FAILED
    }
}
