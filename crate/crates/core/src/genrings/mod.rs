//! Graded-ring models of a Hilbert series: generator inference, polarisation
//! requirements at basket points, and shape recognition in low codimension.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::basket::Basket;
use crate::classifier::{Candidate, K3_RANK_LIMIT};
use crate::exactnum::{numerator_wrt_weights, ExactError, Poly, TruncatedSeries};
use crate::rr::{hilbert_series, RrError};

mod tables;

pub use tables::{
    embedded_checksum_ok, embedded_tables, load_tables, load_tables_from_path, sha256_hex, verify_table_entry, Check,
    CheckOutcome, FixtureError, TableEntry, TableReport, EMBEDDED_TABLES, EMBEDDED_TABLES_SHA256,
};

/// Largest cutoff [`analyse`] will grow to.
pub const MAX_ANALYSIS_CUTOFF: usize = 480;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenringsError {
    #[error("cutoff-exhausted: no relation found up to degree {cutoff}")]
    CutoffExhausted { cutoff: usize },
    #[error("series must start with 1, found {0}")]
    NotAHilbertSeries(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Rr(#[from] RrError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", content = "degrees", rename_all = "snake_case")]
pub enum Shape {
    Hypersurface(u32),
    #[serde(rename = "codim2_ci")]
    Codim2Ci([u32; 2]),
    #[serde(rename = "codim3_pfaffian")]
    Codim3Pfaffian([u32; 5]),
    CodimGe4,
    Unknown,
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Hypersurface(_) => "hypersurface",
            Shape::Codim2Ci(_) => "codim2_ci",
            Shape::Codim3Pfaffian(_) => "codim3_pfaffian",
            Shape::CodimGe4 => "codim_ge4",
            Shape::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |d: &[u32]| d.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            Shape::Hypersurface(d) => write!(f, "hypersurface X_{d}"),
            Shape::Codim2Ci(d) => write!(f, "codim 2 complete intersection X_{{{}}}", join(d)),
            Shape::Codim3Pfaffian(d) => write!(f, "codim 3 Pfaffian X_{{{}}}", join(d)),
            Shape::CodimGe4 => write!(f, "codim >= 4"),
            Shape::Unknown => write!(f, "unknown"),
        }
    }
}

/// Ambient weights and Hilbert numerator of a (proposed) graded ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedModel {
    pub weights: Vec<u32>,
    pub numerator: Poly,
    pub codim: i64,
    pub shape: Shape,
    /// Generators added to polarise basket points.
    pub seeded: Vec<u32>,
}

impl GradedModel {
    /// Whether `codim` is only a lower bound, i.e. polarisation forced extra
    /// generators beyond what the series itself shows.
    pub fn codim_is_lower_bound(&self) -> bool {
        !self.seeded.is_empty()
    }
}

fn integer_series(series: &TruncatedSeries) -> Result<Vec<BigInt>, GenringsError> {
    let coeffs = series.integer_coeffs()?;
    if !coeffs[0].is_one() {
        return Err(GenringsError::NotAHilbertSeries(series.coeff(0).to_string()));
    }
    Ok(coeffs)
}

fn mul_one_minus_t_pow(q: &mut [BigInt], w: u32) {
    let w = w as usize;
    for k in (w..q.len()).rev() {
        let prev = q[k - w].clone();
        q[k] -= prev;
    }
}

/// Greedy generator search starting from `seeds`: while the lowest nonzero
/// coefficient of `Q - 1` is positive, add that many generators in its
/// degree; stop at the first negative coefficient, the first relation.
fn greedy(coeffs: &[BigInt], seeds: &[u32]) -> Result<(Vec<u32>, Vec<BigInt>), GenringsError> {
    let cutoff = coeffs.len() - 1;
    let mut weights = seeds.to_vec();
    let mut q = coeffs.to_vec();
    for &w in seeds {
        mul_one_minus_t_pow(&mut q, w);
    }
    let mut from = 1;
    loop {
        let Some(d) = (from..=cutoff).find(|&k| !q[k].is_zero()) else {
            return Err(GenringsError::CutoffExhausted { cutoff });
        };
        if q[d].is_negative() {
            weights.sort_unstable();
            return Ok((weights, q));
        }
        let count = q[d].clone();
        let mut added = BigInt::zero();
        while added < count {
            weights.push(d as u32);
            mul_one_minus_t_pow(&mut q, d as u32);
            added += 1;
        }
        from = d + 1;
    }
}

/// Minimal generator degrees visible in `series`, with `series * prod (1 - t^w)`
/// truncated at the cutoff.
pub fn infer_generators(series: &TruncatedSeries) -> Result<(Vec<u32>, Poly), GenringsError> {
    let coeffs = integer_series(series)?;
    let (weights, q) = greedy(&coeffs, &[])?;
    Ok((weights, Poly::new(q)))
}

/// Degrees of generators that must be added so every basket point
/// `1/r(a, -a, 2)` is polarised.
///
/// Requirements for each index `r` present in the basket:
/// - a weight `= a`, one `= -a` and one `= 2` mod `r` for every type, counted
///   with multiplicity where residues coincide (for `1/3(1,2,2)` two weights
///   `= 2 mod 3`);
/// - a weight divisible by `r` for the vertex, two of them when the basket
///   has more than one point of index `r`.
///
/// Each shortfall is met by the least positive integer in the residue class.
pub fn polarization_gaps(weights: &[u32], basket: &Basket) -> Vec<u32> {
    let mut by_index: BTreeMap<u32, Vec<(u32, usize)>> = BTreeMap::new();
    for (s, m) in basket.grouped() {
        by_index.entry(s.r()).or_default().push((s.a(), m));
    }
    let mut gaps = Vec::new();
    for (r, types) in by_index {
        let points: usize = types.iter().map(|(_, m)| m).sum();
        let mut required: BTreeMap<u32, usize> = BTreeMap::new();
        required.insert(0, points.min(2));
        for (a, _) in types {
            let mut local: BTreeMap<u32, usize> = BTreeMap::new();
            for residue in [a, r - a, 2 % r] {
                *local.entry(residue).or_default() += 1;
            }
            for (residue, n) in local {
                let slot = required.entry(residue).or_default();
                *slot = (*slot).max(n);
            }
        }
        for (residue, need) in required {
            let have = weights.iter().filter(|&&w| w % r == residue).count();
            let fill = if residue == 0 { r } else { residue };
            gaps.extend(std::iter::repeat_n(fill, need.saturating_sub(have)));
        }
    }
    gaps.sort_unstable();
    gaps
}

/// Generator inference followed by polarisation: any missing generators are
/// added to the inferred ones (each paired with a relation in its own
/// degree, so the series cannot see them) and the greedy search resumes.
pub fn corrected_inference(series: &TruncatedSeries, basket: &Basket) -> Result<GradedModel, GenringsError> {
    let coeffs = integer_series(series)?;
    let (inferred, _) = greedy(&coeffs, &[])?;
    let seeded = polarization_gaps(&inferred, basket);
    let weights = if seeded.is_empty() {
        inferred
    } else {
        let seeds: Vec<u32> = inferred.iter().chain(&seeded).copied().collect();
        greedy(&coeffs, &seeds)?.0
    };
    let numerator = numerator_wrt_weights(series, &weights)?;
    let shape = classify_shape(&weights, &numerator);
    Ok(GradedModel {
        codim: weights.len() as i64 - 4,
        weights,
        numerator,
        shape,
        seeded,
    })
}

/// Runs [`corrected_inference`] on the Riemann-Roch series of
/// `(basket, genus)`, doubling the cutoff from `cutoff` until the numerator
/// is complete.
pub fn analyse(basket: &Basket, genus: i64, cutoff: usize) -> Result<GradedModel, GenringsError> {
    let mut cutoff = cutoff.max(1);
    loop {
        let series = hilbert_series(basket, genus, cutoff)?;
        match corrected_inference(&series, basket) {
            Err(GenringsError::CutoffExhausted { .. })
            | Err(GenringsError::Exact(ExactError::CutoffTooSmall { .. }))
                if cutoff < MAX_ANALYSIS_CUTOFF =>
            {
                cutoff = (cutoff * 2).min(MAX_ANALYSIS_CUTOFF);
            }
            other => return other,
        }
    }
}

/// Recognises hypersurfaces, codimension 2 complete intersections and
/// codimension 3 Pfaffian formats from the numerator alone.
pub fn classify_shape(weights: &[u32], numerator: &Poly) -> Shape {
    match weights.len() {
        5 => hypersurface_degree(numerator).map_or(Shape::Unknown, Shape::Hypersurface),
        6 => ci_degrees(numerator).map_or(Shape::Unknown, Shape::Codim2Ci),
        7 => pfaffian_degrees(numerator).map_or(Shape::Unknown, Shape::Codim3Pfaffian),
        n if n >= 8 => Shape::CodimGe4,
        _ => Shape::Unknown,
    }
}

fn hypersurface_degree(numerator: &Poly) -> Option<u32> {
    let d = numerator.degree()?;
    (d > 0 && *numerator == Poly::one_minus_t_pow(d as u32)).then_some(d as u32)
}

fn ci_degrees(numerator: &Poly) -> Option<[u32; 2]> {
    let top = numerator.degree()?;
    let (low, _) = numerator.terms().find(|(k, _)| *k > 0)?;
    let (d1, d2) = (low as u32, (top - low) as u32);
    (d2 >= d1 && d1 > 0 && *numerator == Poly::denominator(&[d1, d2])).then_some([d1, d2])
}

/// `1 - sum t^{e_i} + sum t^{k - e_i} - t^k` with `k = (sum e_i)/2`.
pub fn pfaffian_numerator(degrees: &[u32; 5]) -> Option<Poly> {
    let total: u32 = degrees.iter().sum();
    if !total.is_multiple_of(2) {
        return None;
    }
    let k = total / 2;
    if degrees.iter().any(|&e| e == 0 || e >= k) {
        return None;
    }
    let mut p = &Poly::one() - &Poly::monomial(1, k as usize);
    for &e in degrees {
        p = &p - &Poly::monomial(1, e as usize);
        p = &p + &Poly::monomial(1, (k - e) as usize);
    }
    Some(p)
}

fn pfaffian_degrees(numerator: &Poly) -> Option<[u32; 5]> {
    let k = numerator.degree()? as u32;
    if k < 2 || numerator.coeff(k as usize) != -BigInt::one() || !numerator.coeff(0).is_one() {
        return None;
    }
    // e_1 <= ... <= e_5 in [1, k-1] with sum 2k
    let mut found = None;
    let mut current = [0u32; 5];
    search_pfaffian(numerator, k, 0, 1, 2 * k, &mut current, &mut found);
    found
}

fn search_pfaffian(
    target: &Poly,
    k: u32,
    slot: usize,
    min: u32,
    remaining: u32,
    current: &mut [u32; 5],
    found: &mut Option<[u32; 5]>,
) {
    if found.is_some() {
        return;
    }
    let left = (5 - slot) as u32;
    if left == 1 {
        if remaining >= min && remaining < k {
            current[4] = remaining;
            if pfaffian_numerator(current).as_ref() == Some(target) {
                *found = Some(*current);
            }
        }
        return;
    }
    let mut e = min;
    while e < k && e * left <= remaining {
        current[slot] = e;
        search_pfaffian(target, k, slot + 1, e, remaining - e, current, found);
        e += 1;
    }
}

/// Series counts per codimension estimated by comparison with K3 surfaces,
/// over candidates of singular rank at most 19: `(codim, total, unstable)`.
pub const K3_COMPARISON_CODIM_COUNTS: [(i64, usize, usize); 18] = [
    (1, 8, 0),
    (2, 26, 0),
    (3, 2, 0),
    (4, 35, 0),
    (5, 13, 0),
    (6, 59, 0),
    (7, 25, 0),
    (8, 99, 0),
    (9, 51, 1),
    (10, 163, 2),
    (11, 93, 4),
    (12, 227, 6),
    (13, 126, 8),
    (14, 255, 30),
    (15, 48, 6),
    (16, 78, 11),
    (17, 8, 0),
    (18, 3, 0),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodimRow {
    pub codim: i64,
    pub total: usize,
    pub unstable: usize,
}

#[derive(Debug, Clone, Default)]
pub struct CodimHistogram {
    pub rows: Vec<CodimRow>,
    /// Candidates whose ring could not be modelled within [`MAX_ANALYSIS_CUTOFF`].
    pub failures: Vec<(Basket, i64, GenringsError)>,
}

/// Codimension of the corrected model of every candidate not obstructed by
/// the K3 rank bound.
pub fn codim_histogram(candidates: &[Candidate], cutoff: usize) -> CodimHistogram {
    let mut counts: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    let mut failures = Vec::new();
    for c in candidates.iter().filter(|c| c.basket.singular_rank() < K3_RANK_LIMIT) {
        match analyse(&c.basket, c.genus, cutoff) {
            Ok(model) => {
                let slot = counts.entry(model.codim).or_default();
                slot.0 += 1;
                slot.1 += usize::from(!c.is_stable());
            }
            Err(e) => failures.push((c.basket.clone(), c.genus, e)),
        }
    }
    let rows = counts
        .into_iter()
        .map(|(codim, (total, unstable))| CodimRow { codim, total, unstable })
        .collect();
    CodimHistogram { rows, failures }
}
