//! Exact arithmetic: rationals, integer polynomials, truncated power series
//! and closed forms `N(t) / prod (1 - t^w)`.

mod poly;
mod rational;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use poly::Poly;
pub use rational::{ParseRationalError, Rational};

/// Default truncation degree for Hilbert series.
pub const DEFAULT_CUTOFF: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error(
        "cutoff-too-small: numerator has nonzero coefficient in degree {degree} within {window} of cutoff {cutoff}"
    )]
    CutoffTooSmall {
        cutoff: usize,
        window: usize,
        degree: usize,
    },
    #[error("wrong-pole-order: expected a pole of order 4 at t = 1, found {found}")]
    WrongPoleOrder { found: PoleOrder },
    #[error("non-integral coefficient {value} in degree {degree}")]
    NonIntegral { degree: usize, value: Rational },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleOrder {
    Exactly(usize),
    AtLeast(usize),
}

impl fmt::Display for PoleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoleOrder::Exactly(n) => write!(f, "{n}"),
            PoleOrder::AtLeast(n) => write!(f, "more than {n}"),
        }
    }
}

/// Power series known exactly in degrees `0..=cutoff`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least degree 0");
        TruncatedSeries { coeffs }
    }

    pub fn zero(cutoff: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Rational::zero(); cutoff + 1],
        }
    }

    pub fn from_integers<I>(coeffs: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        TruncatedSeries::new(coeffs.into_iter().map(Rational::from_integer).collect())
    }

    /// The polynomial `p` read as a power series.
    pub fn from_poly(p: &Poly, cutoff: usize) -> Self {
        TruncatedSeries::from_integers((0..=cutoff).map(|k| p.coeff(k)))
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn truncate(&self, cutoff: usize) -> Self {
        assert!(cutoff <= self.cutoff(), "cannot extend a truncated series");
        TruncatedSeries::new(self.coeffs[..=cutoff].to_vec())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Self {
        let n = self.cutoff().min(other.cutoff());
        TruncatedSeries::new((0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Self {
        let n = self.cutoff().min(other.cutoff());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries::new(out)
    }

    pub fn mul_one_minus_t_pow(&self, w: u32) -> Self {
        let w = w as usize;
        let mut out = self.coeffs.clone();
        for k in (w..out.len()).rev() {
            let prev = out[k - w].clone();
            out[k] -= prev;
        }
        TruncatedSeries::new(out)
    }

    /// Divides by the unit `1 - t^w` of the power-series ring.
    pub fn div_one_minus_t_pow(&self, w: u32) -> Self {
        let w = w as usize;
        assert!(w > 0, "weight must be positive");
        let mut out = self.coeffs.clone();
        for k in w..out.len() {
            let prev = out[k - w].clone();
            out[k] += prev;
        }
        TruncatedSeries::new(out)
    }

    /// All coefficients as integers, or the first degree where that fails.
    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>, ExactError> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(degree, c)| {
                c.to_integer().ok_or_else(|| ExactError::NonIntegral {
                    degree,
                    value: c.clone(),
                })
            })
            .collect()
    }

    pub fn integer_coeffs_i64(&self) -> Result<Vec<i64>, ExactError> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(degree, c)| {
                c.to_i64().ok_or_else(|| ExactError::NonIntegral {
                    degree,
                    value: c.clone(),
                })
            })
            .collect()
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()?;
        write!(f, " + O(t^{})", self.coeffs.len())
    }
}

/// Closed form `numerator / prod_{w in denom_weights} (1 - t^w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalForm {
    pub numerator: Poly,
    pub denom_weights: Vec<u32>,
}

impl RationalForm {
    pub fn new(numerator: Poly, mut denom_weights: Vec<u32>) -> Self {
        assert!(denom_weights.iter().all(|&w| w > 0), "weights must be positive");
        denom_weights.sort_unstable();
        RationalForm {
            numerator,
            denom_weights,
        }
    }

    /// `prod (1 - t^d) / prod (1 - t^w)`, the form of a complete intersection.
    pub fn complete_intersection(relation_degrees: &[u32], weights: Vec<u32>) -> Self {
        RationalForm::new(Poly::denominator(relation_degrees), weights)
    }

    pub fn expand(&self, cutoff: usize) -> TruncatedSeries {
        expand(self, cutoff)
    }
}

impl fmt::Display for RationalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ", self.numerator)?;
        for w in &self.denom_weights {
            if *w == 1 {
                write!(f, "(1-t)")?;
            } else {
                write!(f, "(1-t^{w})")?;
            }
        }
        Ok(())
    }
}

/// Taylor coefficients of `form` in degrees `0..=cutoff`.
pub fn expand(form: &RationalForm, cutoff: usize) -> TruncatedSeries {
    form.denom_weights
        .iter()
        .fold(TruncatedSeries::from_poly(&form.numerator, cutoff), |s, &w| {
            s.div_one_minus_t_pow(w)
        })
}

/// Rewrites `series` over the denominator `prod (1 - t^w)`, returning the
/// numerator.
///
/// The product is exact through the cutoff; the result is only accepted as
/// the whole numerator when every coefficient in the last `max(weights)`
/// degrees vanishes.
pub fn numerator_wrt_weights(series: &TruncatedSeries, weights: &[u32]) -> Result<Poly, ExactError> {
    let product = weights.iter().fold(series.clone(), |s, &w| s.mul_one_minus_t_pow(w));
    let coeffs = product.integer_coeffs()?;
    let cutoff = series.cutoff();
    let window = weights.iter().copied().max().unwrap_or(1).max(1) as usize;
    let first_checked = (cutoff + 1).saturating_sub(window);
    if let Some(degree) = (first_checked..=cutoff).rev().find(|&k| !coeffs[k].is_zero()) {
        return Err(ExactError::CutoffTooSmall { cutoff, window, degree });
    }
    Ok(Poly::new(coeffs))
}

/// The leading coefficient `lim_{t -> 1} (1 - t)^4 * form`, i.e. the degree
/// of a polarised 3-fold with this Hilbert series.
pub fn degree_from_form(form: &RationalForm) -> Result<Rational, ExactError> {
    let factors = form.denom_weights.len();
    if form.numerator.is_zero() {
        return Err(ExactError::WrongPoleOrder {
            found: PoleOrder::Exactly(0),
        });
    }
    let mut num = form.numerator.clone();
    let mut cancelled = 0;
    while let Some(q) = num.div_one_minus_t() {
        num = q;
        cancelled += 1;
        if cancelled > factors {
            break;
        }
    }
    let order = factors.checked_sub(cancelled);
    if order != Some(4) {
        let found = match order {
            Some(n) => PoleOrder::Exactly(n),
            None => PoleOrder::Exactly(0),
        };
        return Err(ExactError::WrongPoleOrder { found });
    }
    let value_at_one = num.eval_at_one();
    let weight_product: BigInt = form.denom_weights.iter().map(|&w| BigInt::from(w)).product();
    Ok(Rational::from_big(value_at_one, weight_product))
}

/// Signed symmetry of a numerator about `top_degree / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Palindromy {
    /// `c_k = c_{top-k}` for all `k`
    Palindromic,
    /// `c_k = -c_{top-k}` for all `k`
    AntiPalindromic,
    Neither,
}

impl Palindromy {
    pub fn sign(self) -> Option<i32> {
        match self {
            Palindromy::Palindromic => Some(1),
            Palindromy::AntiPalindromic => Some(-1),
            Palindromy::Neither => None,
        }
    }
}

pub fn palindromy(poly: &Poly, top_degree: usize) -> Palindromy {
    if poly.degree().is_some_and(|d| d > top_degree) {
        return Palindromy::Neither;
    }
    let mirrored = |k: usize| (poly.coeff(k), poly.coeff(top_degree - k));
    if (0..=top_degree).all(|k| {
        let (a, b) = mirrored(k);
        a == b
    }) {
        Palindromy::Palindromic
    } else if (0..=top_degree).all(|k| {
        let (a, b) = mirrored(k);
        a == -b
    }) {
        Palindromy::AntiPalindromic
    } else {
        Palindromy::Neither
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.integer_coeffs_i64().unwrap()
    }

    /// Counts solutions of `sum_i n_i w_i = k` with `n_i >= 0`, one slot per
    /// listed weight, by direct enumeration.
    fn count_partitions(weights: &[u32], k: i64) -> i64 {
        match weights.split_first() {
            None => (k == 0) as i64,
            Some((&w, rest)) => (0..=k / w as i64)
                .map(|n| count_partitions(rest, k - n * w as i64))
                .sum(),
        }
    }

    #[test]
    fn expand_x38_matches_partition_count() {
        let weights = [2, 3, 5, 11, 19];
        let oracle: Vec<i64> = (0..=60)
            .map(|k| count_partitions(&weights, k) - if k >= 38 { count_partitions(&weights, k - 38) } else { 0 })
            .collect();
        assert_eq!(&oracle[..7], &[1, 0, 1, 1, 1, 2, 2]);
        let form = RationalForm::complete_intersection(&[38], weights.to_vec());
        assert_eq!(ints(&expand(&form, 60)), oracle);
    }

    #[test]
    fn expand_geometric() {
        let form = RationalForm::new(Poly::one(), vec![1]);
        assert_eq!(ints(&expand(&form, 3)), vec![1, 1, 1, 1]);
    }

    #[test]
    fn expand_cascade_genus_one() {
        let form = RationalForm::complete_intersection(&[4, 4], vec![1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(ints(&expand(&form, 1)), vec![1, 3]);
        let x44 = RationalForm::complete_intersection(&[4, 4], vec![1, 1, 1, 2, 2, 3]);
        assert_eq!(ints(&expand(&x44, 1)), vec![1, 3]);
        assert_eq!(degree_from_form(&x44).unwrap(), Rational::new(4, 3));
    }

    #[test]
    fn numerator_of_x38() {
        let form = RationalForm::complete_intersection(&[38], vec![2, 3, 5, 11, 19]);
        let s = expand(&form, 60);
        let n = numerator_wrt_weights(&s, &[2, 3, 5, 11, 19]).unwrap();
        assert_eq!(n, Poly::one_minus_t_pow(38));
    }

    #[test]
    fn numerator_of_geometric() {
        let s = TruncatedSeries::from_integers([1, 1, 1, 1]);
        assert_eq!(numerator_wrt_weights(&s, &[1]).unwrap(), Poly::one());
    }

    #[test]
    fn numerator_cutoff_too_small() {
        let form = RationalForm::complete_intersection(&[38], vec![2, 3, 5, 11, 19]);
        let s = expand(&form, 45);
        let err = numerator_wrt_weights(&s, &[2, 3, 5, 11, 19]).unwrap_err();
        assert!(matches!(err, ExactError::CutoffTooSmall { degree: 38, .. }));
    }

    #[test]
    fn numerator_rejects_fractions() {
        let s = TruncatedSeries::new(vec![Rational::one(), Rational::new(1, 2), Rational::zero()]);
        assert!(matches!(
            numerator_wrt_weights(&s, &[1]),
            Err(ExactError::NonIntegral { degree: 1, .. })
        ));
    }

    #[test]
    fn degree_of_table_forms() {
        let x26 = RationalForm::complete_intersection(&[26], vec![1, 2, 5, 7, 13]);
        assert_eq!(degree_from_form(&x26).unwrap(), Rational::new(1, 35));
        let x18_22 = RationalForm::complete_intersection(&[18, 22], vec![2, 2, 5, 9, 11, 13]);
        assert_eq!(degree_from_form(&x18_22).unwrap(), Rational::new(1, 65));
        let p3 = RationalForm::new(Poly::one(), vec![1, 1, 1, 1]);
        assert_eq!(degree_from_form(&p3).unwrap(), Rational::one());
    }

    #[test]
    fn degree_rejects_wrong_pole() {
        let curve = RationalForm::new(Poly::one(), vec![1, 1]);
        assert!(matches!(
            degree_from_form(&curve),
            Err(ExactError::WrongPoleOrder {
                found: PoleOrder::Exactly(2)
            })
        ));
        let fivefold = RationalForm::new(Poly::one(), vec![1; 5]);
        assert!(degree_from_form(&fivefold).is_err());
    }

    #[test]
    fn palindromy_signs() {
        let cascade = Poly::from_i64s(&[1, 0, 0, -2, -3, 3, 2, 0, 0, -1]);
        assert_eq!(palindromy(&cascade, 9), Palindromy::AntiPalindromic);
        assert_eq!(palindromy(&Poly::one_minus_t_pow(38), 38), Palindromy::AntiPalindromic);
        let ci = Poly::denominator(&[4, 6]);
        assert_eq!(palindromy(&ci, 10), Palindromy::Palindromic);
        assert_eq!(palindromy(&ci, 11), Palindromy::Neither);
        assert_eq!(palindromy(&ci, 9), Palindromy::Neither);
    }

    #[test]
    fn series_product_truncates_to_shorter() {
        let a = TruncatedSeries::from_integers([1, 1, 1, 1]);
        let b = TruncatedSeries::from_integers([1, -1, 0]);
        assert_eq!(ints(&a.mul(&b)), vec![1, 0, 0]);
    }
}
