//! Full enumeration of candidate Hilbert series over all baskets and genera,
//! and the statistics computed from it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::basket::{enumerate_baskets, Basket};
use crate::exactnum::{Rational, TruncatedSeries};
use crate::rr::{kawamata_ok, RrContext, RrError, Stability};

/// A K3 surface has Picard rank at most 20, and one of its classes must be
/// ample, so at most 19 pairwise orthogonal exceptional curves fit.
pub const K3_RANK_LIMIT: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CandidateRecord", try_from = "CandidateRecord")]
pub struct Candidate {
    pub basket: Basket,
    pub genus: i64,
    pub a3: Rational,
    pub acz12: Rational,
    pub stability: Stability,
    pub series: TruncatedSeries,
    pub k3_obstructed: bool,
}

impl Candidate {
    fn from_context(ctx: &RrContext, genus: i64, a3: Rational, stability: Stability, cutoff: usize) -> Self {
        let series = ctx.series(&a3, cutoff);
        Candidate {
            basket: ctx.basket.clone(),
            genus,
            acz12: ctx.acz12.clone(),
            stability,
            series,
            k3_obstructed: ctx.basket.singular_rank() >= K3_RANK_LIMIT,
            a3,
        }
    }

    /// Builds the candidate for `(basket, genus)`, applying every filter the
    /// enumeration applies.
    pub fn build(basket: &Basket, genus: i64, cutoff: usize) -> Result<Self, CandidateError> {
        let ctx = RrContext::new(basket.clone())?;
        let a3 = ctx.degree(genus)?;
        match kawamata_ok(&a3, &ctx.acz12) {
            Stability::Rejected => Err(CandidateError::DegreeTooLarge { a3, acz12: ctx.acz12 }),
            stability => Ok(Candidate::from_context(&ctx, genus, a3, stability, cutoff)),
        }
    }

    pub fn is_stable(&self) -> bool {
        self.stability == Stability::Stable
    }

    /// `h^0(nA)`
    pub fn plurigenus(&self, n: usize) -> i64 {
        self.series
            .coeff(n)
            .to_i64()
            .expect("Hilbert series coefficients are integers")
    }

    pub fn cutoff(&self) -> usize {
        self.series.cutoff()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CandidateError {
    #[error(transparent)]
    Rr(#[from] RrError),
    #[error("A^3 = {a3} exceeds the Kawamata bound (48/5) * {acz12}")]
    DegreeTooLarge { a3: Rational, acz12: Rational },
    #[error("inconsistent record: {0}")]
    Record(String),
}

/// `h^0(-K_X) = h^0(2A)`, the coefficient of `t^2`.
pub fn anticanonical_sections(c: &Candidate) -> i64 {
    c.plurigenus(2)
}

pub fn k3_obstruction(c: &Candidate) -> bool {
    c.basket.singular_rank() >= K3_RANK_LIMIT
}

/// Result of a full enumeration, including baskets dropped by the
/// polarisation condition.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub candidates: Vec<Candidate>,
    pub baskets_considered: usize,
    pub discarded: Vec<(Basket, RrError)>,
}

/// All `(basket, genus)` pairs with `0 < A^3 <= (48/5) Ac2/12`, ordered by
/// basket and then genus.
pub fn enumerate(cutoff: usize) -> Enumeration {
    let baskets = enumerate_baskets();
    let baskets_considered = baskets.len();
    let mut candidates = Vec::new();
    let mut discarded = Vec::new();
    for basket in baskets {
        let ctx = match RrContext::new(basket.clone()) {
            Ok(ctx) => ctx,
            Err(e) => {
                discarded.push((basket, e));
                continue;
            }
        };
        // N = g + 2 = h^0(A)
        for n in 0i64.. {
            let a3 = &ctx.base_degree + Rational::from(n);
            let stability = kawamata_ok(&a3, &ctx.acz12);
            if stability == Stability::Rejected {
                break;
            }
            if a3.is_positive() {
                candidates.push(Candidate::from_context(&ctx, n - 2, a3, stability, cutoff));
            }
        }
    }
    Enumeration {
        candidates,
        baskets_considered,
        discarded,
    }
}

pub fn enumerate_candidates(cutoff: usize) -> Vec<Candidate> {
    enumerate(cutoff).candidates
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusRow {
    pub genus: i64,
    pub total: usize,
    pub unstable: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub genus: i64,
    pub min: Rational,
    pub max: Rational,
}

pub fn genus_histogram(candidates: &[Candidate]) -> Vec<GenusRow> {
    let mut rows: BTreeMap<i64, GenusRow> = BTreeMap::new();
    for c in candidates {
        let row = rows.entry(c.genus).or_insert(GenusRow {
            genus: c.genus,
            total: 0,
            unstable: 0,
        });
        row.total += 1;
        if !c.is_stable() {
            row.unstable += 1;
        }
    }
    rows.into_values().collect()
}

pub fn degree_extremes(candidates: &[Candidate]) -> Vec<DegreeRow> {
    let mut rows: BTreeMap<i64, DegreeRow> = BTreeMap::new();
    for c in candidates {
        rows.entry(c.genus)
            .and_modify(|row| {
                if c.a3 < row.min {
                    row.min = c.a3.clone();
                }
                if c.a3 > row.max {
                    row.max = c.a3.clone();
                }
            })
            .or_insert_with(|| DegreeRow {
                genus: c.genus,
                min: c.a3.clone(),
                max: c.a3.clone(),
            });
    }
    rows.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub stable: usize,
    pub k3_obstructed: usize,
    pub k3_obstructed_unstable: usize,
    /// Number of distinct truncated series; equals `total` unless two
    /// `(basket, genus)` pairs share a Hilbert series.
    pub distinct_series: usize,
}

pub fn summarize(candidates: &[Candidate]) -> Summary {
    let distinct: BTreeSet<Vec<Rational>> = candidates.iter().map(|c| c.series.coeffs().to_vec()).collect();
    Summary {
        total: candidates.len(),
        stable: candidates.iter().filter(|c| c.is_stable()).count(),
        k3_obstructed: candidates.iter().filter(|c| c.k3_obstructed).count(),
        k3_obstructed_unstable: candidates.iter().filter(|c| c.k3_obstructed && !c.is_stable()).count(),
        distinct_series: distinct.len(),
    }
}

/// Flat export record; field order is the column order of every export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub basket: Basket,
    pub genus: i64,
    #[serde(rename = "A3")]
    pub a3: Rational,
    #[serde(rename = "Ac2_over_12")]
    pub acz12: Rational,
    pub stable: bool,
    #[serde(rename = "h0_A")]
    pub h0_a: i64,
    #[serde(rename = "h0_2A")]
    pub h0_2a: i64,
    pub k3_obstructed: bool,
    pub series: Vec<i64>,
}

impl CandidateRecord {
    pub const COLUMNS: [&'static str; 9] = [
        "basket",
        "genus",
        "A3",
        "Ac2_over_12",
        "stable",
        "h0_A",
        "h0_2A",
        "k3_obstructed",
        "series",
    ];

    /// CSV fields: basket in `r/a` text syntax, series space-separated.
    pub fn csv_fields(&self) -> [String; 9] {
        let series: Vec<String> = self.series.iter().map(i64::to_string).collect();
        [
            self.basket.to_string(),
            self.genus.to_string(),
            self.a3.to_string(),
            self.acz12.to_string(),
            self.stable.to_string(),
            self.h0_a.to_string(),
            self.h0_2a.to_string(),
            self.k3_obstructed.to_string(),
            series.join(" "),
        ]
    }
}

impl From<Candidate> for CandidateRecord {
    fn from(c: Candidate) -> Self {
        CandidateRecord::from(&c)
    }
}

impl From<&Candidate> for CandidateRecord {
    fn from(c: &Candidate) -> Self {
        let series = c
            .series
            .integer_coeffs_i64()
            .expect("Hilbert series coefficients are integers");
        CandidateRecord {
            basket: c.basket.clone(),
            genus: c.genus,
            a3: c.a3.clone(),
            acz12: c.acz12.clone(),
            stable: c.is_stable(),
            h0_a: series.get(1).copied().unwrap_or(0),
            h0_2a: series.get(2).copied().unwrap_or(0),
            k3_obstructed: c.k3_obstructed,
            series,
        }
    }
}

impl TryFrom<CandidateRecord> for Candidate {
    type Error = CandidateError;

    fn try_from(r: CandidateRecord) -> Result<Self, Self::Error> {
        let bad = |what: &str| Err(CandidateError::Record(what.to_string()));
        if r.series.len() < 3 {
            return bad("series shorter than degree 2");
        }
        if r.series[1] != r.h0_a || r.series[2] != r.h0_2a {
            return bad("h0 columns disagree with series");
        }
        if r.k3_obstructed != (r.basket.singular_rank() >= K3_RANK_LIMIT) {
            return bad("k3_obstructed disagrees with basket");
        }
        let stability = kawamata_ok(&r.a3, &r.acz12);
        if stability == Stability::Rejected || (stability == Stability::Stable) != r.stable {
            return bad("stable flag disagrees with A3 and Ac2/12");
        }
        Ok(Candidate {
            basket: r.basket,
            genus: r.genus,
            a3: r.a3,
            acz12: r.acz12,
            stability,
            series: TruncatedSeries::from_integers(r.series),
            k3_obstructed: r.k3_obstructed,
        })
    }
}
