//! Published reference values, loaded from `data/golden.toml`.

use std::sync::OnceLock;

use serde::Deserialize;

const GOLDEN_TOML: &str = include_str!("../data/golden.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Golden {
    pub coefficients: Vec<GoldenCoefficient>,
    pub half_integer: GoldenHalfInteger,
    pub table1: GoldenTable,
    pub magnitudes: Vec<GoldenMagnitude>,
    pub product_constants: GoldenConstants,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenCoefficient {
    pub k: u32,
    pub radicand: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenHalfInteger {
    pub radicand: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenTable {
    pub primes: u64,
    pub digits: u32,
    pub rows: Vec<GoldenRow>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenRow {
    pub k: String,
    pub reference: String,
    pub product: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenMagnitude {
    pub sigma: String,
    pub t: String,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenConstants {
    pub k2: String,
    pub k3: String,
}

pub fn golden() -> &'static Golden {
    static GOLDEN: OnceLock<Golden> = OnceLock::new();
    GOLDEN.get_or_init(|| toml::from_str(GOLDEN_TOML).expect("embedded golden data parses"))
}
