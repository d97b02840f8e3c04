//! `eval`, `appendix-a` and `table1`.

use std::io::Write;

use primezeta::product::{evaluate_uncertified, evaluate_with, PrimeCount, ReduceOptions};
use primezeta::rug::{Float, Integer, Rational};
use primezeta::{
    appendix_a_table, fraction_string, parse_exact, reference_zeta, ComplexArgument, Error,
    FormulaId, PrecisionContext,
};
use serde::{Deserialize, Serialize};

use crate::format::{significant, DigitConvention};
use crate::golden::{golden, GoldenTable};
use crate::report::{OutputFormat, RunReport, RunSettings};
use crate::{exit, EvalArgs, Table1Args};

/// Exit code for a library error, with the message written to `err`.
pub fn fail(e: &Error, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "primezeta: {e}");
    match e {
        Error::Domain(_) => exit::DOMAIN,
        Error::Precision { .. } => exit::PRECISION,
        Error::ResourceLimit { .. } | Error::Parse(_) => exit::USAGE,
    }
}

fn usage(msg: &str, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "primezeta: {msg}");
    exit::USAGE
}

pub fn parse_threads(s: &str) -> Result<Option<usize>, String> {
    if s == "auto" {
        return Ok(None);
    }
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Some(n)),
        _ => Err(format!(
            "--threads expects a positive count or `auto`, got `{s}`"
        )),
    }
}

fn context(digits: u32, bits: Option<u32>) -> primezeta::Result<PrecisionContext> {
    if digits == 0 {
        return Err(Error::Parse("--digits must be at least 1".into()));
    }
    match bits {
        Some(b) => PrecisionContext::new(digits, b),
        None => Ok(PrecisionContext::for_digits(digits)),
    }
}

pub fn eval(args: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let formula: FormulaId = match args.formula.parse() {
        Ok(f) => f,
        Err(e) => return fail(&e, err),
    };
    let arg = match ComplexArgument::parse(&args.sigma, &args.t) {
        Ok(a) => a,
        Err(e) => return fail(&e, err),
    };
    let count = if args.primes == "auto" {
        PrimeCount::Auto {
            max_primes: args.max_primes,
        }
    } else {
        match args.primes.parse::<u64>() {
            Ok(n) => PrimeCount::Fixed(n),
            Err(_) => {
                return usage(
                    &format!("--primes expects a count or `auto`, got `{}`", args.primes),
                    err,
                )
            }
        }
    };
    let threads = match parse_threads(&args.threads) {
        Ok(t) => t,
        Err(m) => return usage(&m, err),
    };
    let ctx = match context(args.digits, args.precision_bits) {
        Ok(c) => c,
        Err(e) => return fail(&e, err),
    };
    let options = ReduceOptions {
        block_size: args.block_size,
        threads,
    };
    let (evaluation, code) = match evaluate_with(formula, &arg, count, &ctx, &options) {
        Ok(e) => (e, exit::OK),
        Err(Error::Precision {
            message,
            evaluation: Some(e),
        }) => {
            let _ = writeln!(err, "primezeta: precision error: {message}");
            (*e, exit::PRECISION)
        }
        Err(e) => return fail(&e, err),
    };
    let settings = RunSettings {
        n_primes: args.primes.clone(),
        digits: args.digits,
        block_size: args.block_size,
        threads: args.threads.clone(),
    };
    let report = RunReport::from_evaluation("eval".into(), &evaluation, &settings);
    let written = match args.format {
        OutputFormat::Text => report.write_text(&mut *out),
        OutputFormat::Json => writeln!(out, "{}", report.to_json()),
        OutputFormat::Csv => report.write_csv(&mut *out).map_err(std::io::Error::other),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "primezeta: {e}");
    }
    code
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixRow {
    pub k: u32,
    pub pi_power: String,
    pub radicand: RadicandParts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicandParts {
    pub numerator: String,
    pub denominator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub command: String,
    pub rows: Vec<AppendixRow>,
}

pub fn appendix_a_rows() -> Vec<AppendixRow> {
    appendix_a_table()
        .into_iter()
        .map(|c| AppendixRow {
            k: c.k.numer().to_u32().expect("small order"),
            pi_power: fraction_string(&c.pi_power),
            radicand: RadicandParts {
                numerator: c.radicand.numer().to_string(),
                denominator: c.radicand.denom().to_string(),
            },
        })
        .collect()
}

pub fn appendix_a(format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let rows = appendix_a_rows();
    let written = match format {
        OutputFormat::Text => (|| {
            writeln!(out, "{:>3}  {:>8}  radicand", "k", "pi^")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>3}  {:>8}  {}/{}",
                    r.k, r.pi_power, r.radicand.numerator, r.radicand.denominator
                )?;
            }
            Ok(())
        })(),
        OutputFormat::Json => {
            let report = AppendixReport {
                command: "appendix-a".into(),
                rows,
            };
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).expect("serializes")
            )
        }
        OutputFormat::Csv => (|| {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["k", "pi_power", "numerator", "denominator", "radicand"])?;
            for r in &rows {
                w.write_record([
                    r.k.to_string(),
                    r.pi_power.clone(),
                    r.radicand.numerator.clone(),
                    r.radicand.denominator.clone(),
                    format!("{}/{}", r.radicand.numerator, r.radicand.denominator),
                ])?;
            }
            w.flush()?;
            Ok::<(), csv::Error>(())
        })()
        .map_err(std::io::Error::other),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "primezeta: {e}");
    }
    exit::OK
}

/// One row of the table: `ζ(k)` and the product value, unrounded.
pub struct Table1Values {
    pub k: Rational,
    pub k_label: String,
    pub formula: FormulaId,
    pub reference: Float,
    pub product: Float,
}

/// Formula used for the product column at order `k`.
pub fn table1_formula(k: &Rational) -> FormulaId {
    if *k.denom() == 1 {
        FormulaId::IntegerSqrt
    } else {
        FormulaId::HalfIntegerMain
    }
}

/// Computes every row of `table` at `n_primes`.
pub fn table1_values(
    table: &GoldenTable,
    n_primes: u64,
    digits: u32,
) -> primezeta::Result<Vec<Table1Values>> {
    let ctx = PrecisionContext::for_digits(digits);
    table
        .rows
        .iter()
        .map(|row| {
            let k = parse_exact(&row.k)?;
            let arg = ComplexArgument::real(k.clone());
            let formula = table1_formula(&k);
            let reference = reference_zeta(&arg, &ctx)?.re;
            let eval = evaluate_uncertified(
                formula,
                &arg,
                PrimeCount::Fixed(n_primes),
                &ctx,
                &ReduceOptions::default(),
            )?;
            Ok(Table1Values {
                k_label: row.k.clone(),
                k,
                formula,
                reference,
                product: eval.value,
            })
        })
        .collect()
}

/// `|rendered − published| ≤ 1` unit in the last published place.
pub fn within_one_unit(rendered: &str, published: &str) -> bool {
    let (Ok(a), Ok(b)) = (parse_exact(rendered), parse_exact(published)) else {
        return false;
    };
    let places = published
        .split_once('.')
        .map(|(_, frac)| frac.len() as u32)
        .unwrap_or(0);
    let unit = Rational::from((
        Integer::from(1),
        Integer::from(Integer::u_pow_u(10, places)),
    ));
    (a - b).abs() <= unit
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub k: String,
    pub formula: String,
    pub reference: String,
    pub product: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Report {
    pub command: String,
    pub primes: u64,
    pub digits: u32,
    /// Digit convention under which every published cell matched, or `none`
    /// when the golden comparison was skipped or failed.
    pub convention: String,
    pub compared: bool,
    pub matched: bool,
    pub rows: Vec<Table1Row>,
}

/// A published cell that disagrees with the computed one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMismatch {
    pub k: String,
    pub column: &'static str,
    pub published: String,
    pub rounded: String,
    pub truncated: String,
}

fn render_rows(values: &[Table1Values], digits: u32, conv: DigitConvention) -> Vec<Table1Row> {
    values
        .iter()
        .map(|v| Table1Row {
            k: v.k_label.clone(),
            formula: v.formula.name().into(),
            reference: significant(&v.reference, digits, conv),
            product: significant(&v.product, digits, conv),
        })
        .collect()
}

fn mismatches(rows: &[Table1Row], table: &GoldenTable) -> Vec<(usize, &'static str)> {
    let mut bad = Vec::new();
    for (i, (row, gold)) in rows.iter().zip(&table.rows).enumerate() {
        if !within_one_unit(&row.reference, &gold.reference) {
            bad.push((i, "reference"));
        }
        if !within_one_unit(&row.product, &gold.product) {
            bad.push((i, "product"));
        }
    }
    bad
}

/// Renders the table and, at the published prime count and digits, compares
/// against the published cells: round-half-even first, then truncation.
pub fn table1_report(
    n_primes: u64,
    digits: u32,
) -> primezeta::Result<(Table1Report, Vec<CellMismatch>)> {
    table1_report_against(&golden().table1, n_primes, digits)
}

/// [`table1_report`] against an arbitrary published table.
pub fn table1_report_against(
    g: &GoldenTable,
    n_primes: u64,
    digits: u32,
) -> primezeta::Result<(Table1Report, Vec<CellMismatch>)> {
    let values = table1_values(g, n_primes, digits)?;
    let compared = n_primes == g.primes && digits == g.digits;
    let rounded = render_rows(&values, digits, DigitConvention::RoundHalfEven);
    let mut report = Table1Report {
        command: "table1".into(),
        primes: n_primes,
        digits,
        convention: "none".into(),
        compared,
        matched: false,
        rows: rounded.clone(),
    };
    if !compared {
        return Ok((report, Vec::new()));
    }
    for conv in [DigitConvention::RoundHalfEven, DigitConvention::Truncate] {
        let rows = render_rows(&values, digits, conv);
        if mismatches(&rows, g).is_empty() {
            report.convention = conv.name().into();
            report.matched = true;
            report.rows = rows;
            return Ok((report, Vec::new()));
        }
    }
    let truncated = render_rows(&values, digits, DigitConvention::Truncate);
    let diffs = mismatches(&rounded, g)
        .into_iter()
        .map(|(i, column)| {
            let pick = |r: &Table1Row| match column {
                "reference" => r.reference.clone(),
                _ => r.product.clone(),
            };
            let gold = &g.rows[i];
            CellMismatch {
                k: gold.k.clone(),
                column,
                published: if column == "reference" {
                    gold.reference.clone()
                } else {
                    gold.product.clone()
                },
                rounded: pick(&rounded[i]),
                truncated: pick(&truncated[i]),
            }
        })
        .collect();
    Ok((report, diffs))
}

pub fn table1(args: &Table1Args, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if args.digits == 0 {
        return usage("--digits must be at least 1", err);
    }
    let (report, diffs) = match table1_report(args.primes, args.digits) {
        Ok(r) => r,
        Err(e) => return fail(&e, err),
    };
    let written = match args.format {
        OutputFormat::Text => (|| {
            writeln!(
                out,
                "{:>5}  {:<22} {:<22} formula",
                "k", "zeta(k)", "product"
            )?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{:>5}  {:<22} {:<22} {}",
                    r.k, r.reference, r.product, r.formula
                )?;
            }
            if report.compared {
                if report.matched {
                    writeln!(
                        out,
                        "all cells match the published table ({})",
                        report.convention
                    )?;
                } else {
                    writeln!(out, "published table NOT reproduced")?;
                }
            }
            Ok(())
        })(),
        OutputFormat::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).expect("serializes")
            )
        }
        OutputFormat::Csv => (|| {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["k", "formula", "reference", "product", "convention"])?;
            for r in &report.rows {
                w.write_record([
                    &r.k,
                    &r.formula,
                    &r.reference,
                    &r.product,
                    &report.convention,
                ])?;
            }
            w.flush()?;
            Ok::<(), csv::Error>(())
        })()
        .map_err(std::io::Error::other),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "primezeta: {e}");
    }
    if diffs.is_empty() {
        return exit::OK;
    }
    let _ = writeln!(
        err,
        "primezeta: {} cell(s) differ from the published table:",
        diffs.len()
    );
    for d in &diffs {
        let _ = writeln!(
            err,
            "  k = {:<4} {:<9} published {}  rounded {}  truncated {}",
            d.k, d.column, d.published, d.rounded, d.truncated
        );
    }
    exit::TABLE_MISMATCH
}
