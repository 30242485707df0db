//! JSON configuration documents.
//!
//! ```json
//! { "name": "rauzy", "dimension": 2,
//!   "generators": [[[1,1,1],[0,1,0],[0,0,1]], ...],
//!   "holes": [[["0","2^(-1/3)","2^(-1/3)"], ...]] }
//! ```
//!
//! Hole entries are JSON numbers or strings built from rationals: `"3/4"`,
//! `"2^(-1/3)"`, `"3*2^(1/2)"`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Expr(String),
}

impl Entry {
    pub fn value(&self) -> Result<f64> {
        match self {
            Entry::Number(x) => Ok(*x),
            Entry::Expr(s) => parse_expression(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<Vec<Vec<i64>>>,
    pub holes: Vec<Vec<Vec<Entry>>>,
}

impl SystemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn hole_rows(&self) -> Result<Vec<Vec<Vec<f64>>>> {
        self.holes
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(Entry::value).collect()).collect())
            .collect()
    }

    pub fn rauzy() -> Self {
        let a = || Entry::Expr("2^(-1/3)".into());
        let z = || Entry::Number(0.0);
        Self {
            name: "rauzy".into(),
            dimension: 2,
            generators: crate::words::rauzy_rows(),
            holes: vec![vec![vec![z(), a(), a()], vec![a(), z(), a()], vec![a(), a(), z()]]],
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "rauzy" => Some(Self::rauzy()),
            _ => None,
        }
    }
}

pub const PRESETS: &[&str] = &["rauzy"];

fn parse_rational(s: &str) -> Result<f64> {
    let bad = || Error::Config(format!("cannot parse number {s:?}"));
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s).trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            Ok(p / q)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// Evaluates a product of factors `r` or `r^(r)` with rational `r`.
pub fn parse_expression(s: &str) -> Result<f64> {
    let mut value = 1.0;
    for factor in s.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Config(format!("empty factor in {s:?}")));
        }
        value *= match factor.split_once('^') {
            Some((base, exp)) => {
                let b = parse_rational(base)?;
                let e = parse_rational(exp)?;
                if b < 0.0 {
                    return Err(Error::Config(format!("negative base in {s:?}")));
                }
                b.powf(e)
            }
            None => parse_rational(factor)?,
        };
    }
    if !value.is_finite() {
        return Err(Error::Config(format!("{s:?} is not finite")));
    }
    Ok(value)
}
