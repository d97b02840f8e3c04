//! Machine-readable run reports for `primezeta eval`.

use std::io::Write;

use primezeta::rug::Float;
use primezeta::{fraction_string, ProductEvaluation};
use serde::{Deserialize, Serialize};

use crate::format::{bound, significant, DigitConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Inputs,
    pub result: ResultFields,
    pub timing: Timing,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub formula: String,
    pub sigma: String,
    pub t: String,
    /// A count, or `auto`.
    pub n_primes: String,
    pub digits: u32,
    pub precision_bits: u32,
    pub block_size: usize,
    /// A count, or `auto`.
    pub threads: String,
}

/// Flag values echoed back in a report that the evaluation itself does not
/// carry.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub n_primes: String,
    pub digits: u32,
    pub block_size: usize,
    pub threads: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFields {
    /// The limit value to `certified_digits` significant decimals; empty when
    /// nothing is certified.
    pub value: String,
    /// Absolute bound on `|value − limit|`.
    pub plus_minus: String,
    /// The finite product itself to the requested digits. Only rounding
    /// separates it from the exact partial product.
    pub partial_value: String,
    pub certified_digits: u32,
    pub truncation_bound: String,
    pub rounding_bound: String,
    pub prime_count: u64,
    pub last_prime: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub formula: String,
    pub eq_ref: String,
}

/// Bound on `|value − limit|`. The relative bounds are taken against the limit,
/// so `|v − L| ≤ εL` turns into `ε v/(1 − ε)` in terms of the computed value.
pub fn absolute_bound(eval: &ProductEvaluation) -> Float {
    let total = eval.total_bound();
    if total >= 1 {
        return Float::with_val(total.prec(), primezeta::rug::float::Special::Infinity);
    }
    let prec = total.prec();
    let scaled = Float::with_val(prec, &total * &eval.value);
    scaled / (Float::with_val(prec, 1) - total)
}

impl RunReport {
    pub fn from_evaluation(
        command: String,
        eval: &ProductEvaluation,
        settings: &RunSettings,
    ) -> Self {
        let digits = settings.digits;
        let shown = eval.certified_digits.min(digits);
        let value = if shown == 0 {
            String::new()
        } else {
            significant(&eval.value, shown, DigitConvention::RoundHalfEven)
        };
        let absolute = absolute_bound(eval);
        RunReport {
            command,
            inputs: Inputs {
                formula: eval.formula.name().to_string(),
                sigma: fraction_string(&eval.argument.sigma),
                t: fraction_string(&eval.argument.t),
                n_primes: settings.n_primes.clone(),
                digits,
                precision_bits: eval.working_precision_bits,
                block_size: settings.block_size,
                threads: settings.threads.clone(),
            },
            result: ResultFields {
                value,
                plus_minus: bound(&absolute),
                partial_value: significant(&eval.value, digits, DigitConvention::RoundHalfEven),
                certified_digits: eval.certified_digits,
                truncation_bound: bound(&eval.truncation_bound),
                rounding_bound: bound(&eval.rounding_bound),
                prime_count: eval.primes_used,
                last_prime: eval.last_prime,
            },
            timing: Timing {
                elapsed_ms: eval.elapsed_ms,
            },
            provenance: Provenance {
                formula: eval.formula.name().to_string(),
                eq_ref: eval.formula.eq_ref().to_string(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    const CSV_HEADER: [&'static str; 19] = [
        "command",
        "formula",
        "sigma",
        "t",
        "n_primes",
        "digits",
        "precision_bits",
        "block_size",
        "threads",
        "value",
        "plus_minus",
        "partial_value",
        "certified_digits",
        "truncation_bound",
        "rounding_bound",
        "prime_count",
        "last_prime",
        "elapsed_ms",
        "eq_ref",
    ];

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::CSV_HEADER)?;
        w.write_record([
            self.command.clone(),
            self.inputs.formula.clone(),
            self.inputs.sigma.clone(),
            self.inputs.t.clone(),
            self.inputs.n_primes.clone(),
            self.inputs.digits.to_string(),
            self.inputs.precision_bits.to_string(),
            self.inputs.block_size.to_string(),
            self.inputs.threads.clone(),
            self.result.value.clone(),
            self.result.plus_minus.clone(),
            self.result.partial_value.clone(),
            self.result.certified_digits.to_string(),
            self.result.truncation_bound.clone(),
            self.result.rounding_bound.clone(),
            self.result.prime_count.to_string(),
            self.result.last_prime.to_string(),
            self.timing.elapsed_ms.to_string(),
            self.provenance.eq_ref.clone(),
        ])?;
        w.flush()?;
        Ok(())
    }

    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let r = &self.result;
        let value = if r.value.is_empty() {
            "(no digits certified)".to_string()
        } else {
            r.value.clone()
        };
        writeln!(
            out,
            "formula          {} {}",
            self.inputs.formula, self.provenance.eq_ref
        )?;
        writeln!(
            out,
            "argument         sigma = {}, t = {}",
            self.inputs.sigma, self.inputs.t
        )?;
        writeln!(
            out,
            "primes           {} (last {})",
            r.prime_count, r.last_prime
        )?;
        writeln!(out, "value            {} ± {}", value, r.plus_minus)?;
        writeln!(out, "partial product  {}", r.partial_value)?;
        writeln!(out, "certified digits {}", r.certified_digits)?;
        writeln!(out, "truncation bound {}", r.truncation_bound)?;
        writeln!(out, "rounding bound   {}", r.rounding_bound)?;
        writeln!(out, "precision        {} bits", self.inputs.precision_bits)?;
        writeln!(out, "elapsed          {} ms", self.timing.elapsed_ms)?;
        Ok(())
    }
}
