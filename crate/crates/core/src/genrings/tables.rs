//! Tabulated Fano 3-folds of index 2 in codimension at most 4, and the
//! consistency checks run against each entry.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{corrected_inference, pfaffian_numerator};
use crate::basket::Basket;
use crate::exactnum::{degree_from_form, expand, numerator_wrt_weights, palindromy, Poly, Rational, RationalForm};
use crate::rr::{acz12_from_basket, hilbert_series};

pub const EMBEDDED_TABLES: &str = include_str!("../../data/tables.json");
pub const EMBEDDED_TABLES_SHA256: &str = include_str!("../../data/tables.json.sha256");

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("cannot read fixture: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed fixture: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{name}: {reason}")]
    Entry { name: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub table: u8,
    pub name: String,
    pub weights: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_degrees: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pfaffian_degrees: Option<[u32; 5]>,
    #[serde(with = "basket_text")]
    pub basket: Basket,
    /// Basket as it appears in print, when that is not in normal form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basket_as_printed: Option<String>,
    #[serde(rename = "A3")]
    pub a3: Rational,
    /// Degree as it appears in print, when that is a misprint.
    #[serde(rename = "A3_as_printed", default, skip_serializing_if = "Option::is_none")]
    pub a3_as_printed: Option<Rational>,
    #[serde(rename = "Ac2_over_12")]
    pub acz12: Rational,
    /// Leading numerator coefficients, for entries given only by weights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator_prefix: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator_top_degree: Option<usize>,
}

mod basket_text {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::basket::Basket;

    pub fn serialize<S: Serializer>(b: &Basket, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(b)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Basket, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

impl TableEntry {
    pub fn genus(&self) -> i64 {
        self.weights.iter().filter(|&&w| w == 1).count() as i64 - 2
    }

    pub fn codim(&self) -> i64 {
        self.weights.len() as i64 - 4
    }

    /// Top degree of a Gorenstein numerator over these weights.
    pub fn top_degree(&self) -> usize {
        (self.weights.iter().sum::<u32>() as usize).saturating_sub(2)
    }

    /// Smallest cutoff that determines the numerator over these weights.
    pub fn required_cutoff(&self) -> usize {
        let sum: u32 = self.weights.iter().sum();
        let max = self.weights.iter().copied().max().unwrap_or(0);
        (sum + max) as usize
    }

    /// The numerator implied by the tabulated equations, when there are any.
    pub fn equation_numerator(&self) -> Option<Poly> {
        match (&self.relation_degrees, &self.pfaffian_degrees) {
            (Some(rel), _) => Some(Poly::denominator(rel)),
            (None, Some(e)) => pfaffian_numerator(e),
            (None, None) => None,
        }
    }

    fn validate(&self) -> Result<(), FixtureError> {
        let fail = |reason: &str| {
            Err(FixtureError::Entry {
                name: self.name.clone(),
                reason: reason.into(),
            })
        };
        if !(1..=4).contains(&self.table) {
            return fail("table must be 1..4");
        }
        if self.weights.len() < 5 || self.weights.contains(&0) {
            return fail("need at least five positive weights");
        }
        if self.table <= 3 && self.equation_numerator().is_none() {
            return fail("equations missing or malformed");
        }
        Ok(())
    }
}

pub fn load_tables(json: &str) -> Result<Vec<TableEntry>, FixtureError> {
    let entries: Vec<TableEntry> = serde_json::from_str(json)?;
    for e in &entries {
        e.validate()?;
    }
    Ok(entries)
}

pub fn load_tables_from_path(path: &Path) -> Result<Vec<TableEntry>, FixtureError> {
    load_tables(&std::fs::read_to_string(path)?)
}

pub fn embedded_tables() -> Vec<TableEntry> {
    load_tables(EMBEDDED_TABLES).expect("embedded fixture is valid")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn embedded_checksum_ok() -> bool {
    sha256_hex(EMBEDDED_TABLES.as_bytes()) == EMBEDDED_TABLES_SHA256.trim()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Riemann-Roch series equals the series of the tabulated model.
    Series,
    /// Degree read off the model equals the tabulated `A^3`.
    Degree,
    /// `A.c_2/12` computed from the basket equals the tabulated value.
    Acz12,
    /// Generator inference on the series recovers the tabulated weights.
    Weights,
    /// The numerator is (anti)palindromic with sign `(-1)^codim`.
    Symmetry,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Series => "series",
            Check::Degree => "degree",
            Check::Acz12 => "Ac2/12",
            Check::Weights => "weights",
            Check::Symmetry => "symmetry",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub name: String,
    pub weights: Vec<u32>,
    pub basket: String,
    pub cutoff: usize,
    pub checks: Vec<CheckOutcome>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<Check> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.check).collect()
    }
}

fn outcome(check: Check, result: Result<String, String>) -> CheckOutcome {
    match result {
        Ok(detail) => CheckOutcome {
            check,
            passed: true,
            detail,
        },
        Err(detail) => CheckOutcome {
            check,
            passed: false,
            detail,
        },
    }
}

fn prefix_matches(numerator: &Poly, prefix: &[i64]) -> bool {
    prefix.iter().enumerate().all(|(k, &c)| numerator.coeff(k) == c.into())
}

/// Runs every check on `entry`. The cutoff is raised to
/// [`TableEntry::required_cutoff`] when `cutoff` is smaller.
pub fn verify_table_entry(entry: &TableEntry, cutoff: usize) -> TableReport {
    let cutoff = cutoff.max(entry.required_cutoff());
    let series = hilbert_series(&entry.basket, entry.genus(), cutoff).map_err(|e| e.to_string());

    // The model numerator: from equations when tabulated, else read off the series.
    let numerator: Result<Poly, String> = match entry.equation_numerator() {
        Some(p) => Ok(p),
        None => series
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|s| numerator_wrt_weights(s, &entry.weights).map_err(|e| e.to_string())),
    };
    let form = numerator.clone().map(|p| RationalForm::new(p, entry.weights.clone()));

    let series_check = (|| {
        let series = series.as_ref().map_err(Clone::clone)?;
        let form = form.as_ref().map_err(Clone::clone)?;
        if entry.equation_numerator().is_some() && expand(form, cutoff) != *series {
            return Err(format!("series differs from model through degree {cutoff}"));
        }
        if let Some(prefix) = &entry.numerator_prefix {
            if !prefix_matches(&form.numerator, prefix) {
                return Err(format!("numerator {} does not start with {:?}", form.numerator, prefix));
            }
        }
        let top = form.numerator.degree().unwrap_or(0);
        if let Some(expected) = entry.numerator_top_degree {
            if top != expected {
                return Err(format!("numerator top degree {top}, expected {expected}"));
            }
        }
        Ok(format!("agrees through degree {cutoff}"))
    })();

    let degree_check = form
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|f| degree_from_form(f).map_err(|e| e.to_string()))
        .and_then(|d| {
            if d == entry.a3 {
                Ok(format!("A^3 = {d}"))
            } else {
                Err(format!("model degree {d}, tabulated {}", entry.a3))
            }
        });

    let acz12_check = acz12_from_basket(&entry.basket)
        .map_err(|e| e.to_string())
        .and_then(|v| {
            if v == entry.acz12 {
                Ok(format!("Ac2/12 = {v}"))
            } else {
                Err(format!("basket gives {v}, tabulated {}", entry.acz12))
            }
        });

    let weights_check = series.as_ref().map_err(Clone::clone).and_then(|s| {
        let model = corrected_inference(s, &entry.basket).map_err(|e| e.to_string())?;
        if model.weights == entry.weights {
            Ok(format!("inferred {:?}", model.weights))
        } else {
            Err(format!("inferred {:?}, tabulated {:?}", model.weights, entry.weights))
        }
    });

    let symmetry_check = numerator.as_ref().map_err(Clone::clone).and_then(|p| {
        let expected = if entry.codim() % 2 == 0 { 1 } else { -1 };
        let found = palindromy(p, entry.top_degree());
        if found.sign() == Some(expected) {
            Ok(format!("{found:?} about degree {}", entry.top_degree()))
        } else {
            Err(format!(
                "{found:?} about degree {}, expected sign {expected}",
                entry.top_degree()
            ))
        }
    });

    TableReport {
        table: entry.table,
        name: entry.name.clone(),
        weights: entry.weights.clone(),
        basket: entry.basket.to_string(),
        cutoff,
        checks: vec![
            outcome(Check::Series, series_check),
            outcome(Check::Degree, degree_check),
            outcome(Check::Acz12, acz12_check),
            outcome(Check::Weights, weights_check),
            outcome(Check::Symmetry, symmetry_check),
        ],
    }
}
