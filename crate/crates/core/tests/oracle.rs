use primezeta::rug::Float;
use primezeta::{reference_magnitude, reference_zeta, ComplexArgument, PrecisionContext};

fn lit(s: &str) -> Float {
    Float::with_val(256, Float::parse(s).unwrap())
}

fn close(got: &Float, want: &str, bound: &Float) -> bool {
    // the frozen values carry 30 significant digits
    let slack = Float::with_val(256, bound + 1e-29);
    Float::with_val(256, got - &lit(want)).abs() <= slack
}

#[test]
fn frozen_complex_values() {
    let ctx = PrecisionContext::for_digits(28);
    let cases = [
        (
            "2",
            "1",
            "1.15035570325490267174284993474",
            "-0.437530865919607881117527898593",
        ),
        (
            "3/2",
            "5",
            "0.809619168406919816641032139953",
            "0.134473577363148797183203703935",
        ),
        (
            "3",
            "-2",
            "0.973041960418942448564081890643",
            "0.147695593000453794629899986002",
        ),
        (
            "5/2",
            "10",
            "1.14050124365959180031734391833",
            "-0.0632048663228368591736948975237",
        ),
    ];
    for (s, t, re, im) in cases {
        let z = reference_zeta(&ComplexArgument::parse(s, t).unwrap(), &ctx).unwrap();
        assert!(close(&z.re, re, &z.error_bound), "re at {s}+{t}i");
        assert!(close(&z.im, im, &z.error_bound), "im at {s}+{t}i");
    }
}

#[test]
fn conjugate_symmetry() {
    let ctx = PrecisionContext::for_digits(20);
    for (s, t) in [("2", "3"), ("3/2", "11/2"), ("7/4", "20")] {
        let up = reference_zeta(&ComplexArgument::parse(s, t).unwrap(), &ctx).unwrap();
        let down =
            reference_zeta(&ComplexArgument::parse(s, &format!("-{t}")).unwrap(), &ctx).unwrap();
        let tol = Float::with_val(256, &up.error_bound + &down.error_bound);
        assert!(Float::with_val(256, &up.re - &down.re).abs() <= tol);
        assert!(Float::with_val(256, &up.im + &down.im).abs() <= tol);
    }
}

#[test]
fn higher_precision_agrees_within_bounds() {
    let arg = ComplexArgument::parse("9/4", "13/3").unwrap();
    let low = reference_zeta(&arg, &PrecisionContext::for_digits(15)).unwrap();
    let high = reference_zeta(&arg, &PrecisionContext::for_digits(40)).unwrap();
    let tol = Float::with_val(256, &low.error_bound + &high.error_bound);
    assert!(Float::with_val(256, &low.re - &high.re).abs() <= tol);
    assert!(Float::with_val(256, &low.im - &high.im).abs() <= tol);
    assert!(high.terms > low.terms);
}

#[test]
fn magnitude_is_the_modulus() {
    let ctx = PrecisionContext::for_digits(20);
    let arg = ComplexArgument::parse("2", "1").unwrap();
    let m = reference_magnitude(&arg, &ctx).unwrap();
    assert!(close(
        &m.re,
        "1.23075241321861464899433380286",
        &m.error_bound
    ));
    assert!(m.im.is_zero());
}
