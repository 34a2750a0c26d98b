//! Orbifold Riemann-Roch for Fano 3-folds `X` with `-K_X = 2A`.
//!
//! Two independent evaluations of `h^0(nA)` live here. [`hilbert_series`]
//! sums rational functions in `t` and expands them, with each singular
//! point contributing one period of correction terms over `1 - t^r`.
//! [`plurigenus`] evaluates the closed formula for a single `n`. The two
//! routes share only [`periodic_term`].

use serde::{Deserialize, Serialize};

use crate::basket::{Basket, SingularityType};
use crate::exactnum::{Poly, Rational, TruncatedSeries};

/// Lowest possible genus (`h^0(A) = g + 2 >= 0`).
pub const MIN_GENUS: i64 = -2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RrError {
    #[error("bound-violated: Ac2/12 = {acz12} is not positive")]
    BoundViolated { acz12: Rational },
    #[error("polarisation condition fails: residual {residual}")]
    Polarisation { residual: Rational },
    #[error("nonpositive-degree: A^3 = {a3}")]
    NonpositiveDegree { a3: Rational },
    #[error("genus below -2: {genus}")]
    GenusBelowMinimum { genus: i64 },
}

/// `Ac_2(X)/12 = (24 - sum (r^2-1)/r) / 24`.
pub fn acz12_from_basket(basket: &Basket) -> Result<Rational, RrError> {
    let acz12 = acz12_unchecked(basket);
    if acz12.is_positive() {
        Ok(acz12)
    } else {
        Err(RrError::BoundViolated { acz12 })
    }
}

fn acz12_unchecked(basket: &Basket) -> Rational {
    (Rational::from(24) - basket.bound_sum()) / Rational::from(24)
}

/// Contribution of one basket point to `chi(nA)`:
///
/// `-i (r^2-1)/(12r) + sum_{j=1}^{i-1} bj(r - bj)/(2r)`
///
/// with `i` the local index of `nA`, `ab = 2 mod r` and `bj` reduced mod `r`.
pub fn periodic_term(s: &SingularityType, n: i64) -> Rational {
    let r = s.r() as i64;
    let i = s.local_index(n) as i64;
    let b = s.b() as i64;
    let mut total = Rational::new(-i * (r * r - 1), 12 * r);
    for j in 1..i {
        let bj = (b * j).rem_euclid(r);
        total += Rational::new(bj * (r - bj), 2 * r);
    }
    total
}

/// `(1 + sum periodic_term(s, -1)) - Ac2/12`; zero for an admissible basket.
pub fn polarisation_residual(basket: &Basket) -> Rational {
    let lhs = Rational::one() + basket.entries().iter().map(|s| periodic_term(s, -1)).sum::<Rational>();
    lhs - acz12_unchecked(basket)
}

/// `A^3` at `N = 0`: `-1 - Ac2/12 - sum periodic_term(s, 1)`. Candidate
/// degrees are this plus `N = g + 2`.
pub fn base_degree(basket: &Basket) -> Rational {
    let periodic: Rational = basket.entries().iter().map(|s| periodic_term(s, 1)).sum();
    Rational::from(-1) - acz12_unchecked(basket) - periodic
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Rejected,
    Unstable,
    Stable,
}

/// Kawamata's bounds: `A^3 <= (4/5) Ac2` always, `A^3 <= (3/4) Ac2` when
/// stable. In terms of `Ac2/12` these are `48/5` and `9`.
pub fn kawamata_ok(a3: &Rational, acz12: &Rational) -> Stability {
    if a3 <= &(acz12 * &Rational::from(9)) {
        Stability::Stable
    } else if a3 <= &(acz12 * &Rational::new(48, 5)) {
        Stability::Unstable
    } else {
        Stability::Rejected
    }
}

/// Checked Riemann-Roch data of one basket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrContext {
    pub basket: Basket,
    pub acz12: Rational,
    pub base_degree: Rational,
}

impl RrContext {
    pub fn new(basket: Basket) -> Result<Self, RrError> {
        let acz12 = acz12_from_basket(&basket)?;
        let residual = polarisation_residual(&basket);
        if !residual.is_zero() {
            return Err(RrError::Polarisation { residual });
        }
        let base_degree = base_degree(&basket);
        Ok(RrContext {
            basket,
            acz12,
            base_degree,
        })
    }

    pub fn degree(&self, genus: i64) -> Result<Rational, RrError> {
        if genus < MIN_GENUS {
            return Err(RrError::GenusBelowMinimum { genus });
        }
        let a3 = &self.base_degree + Rational::from(genus + 2);
        if a3.is_positive() {
            Ok(a3)
        } else {
            Err(RrError::NonpositiveDegree { a3 })
        }
    }

    /// `P(t) = 1/(1-t) + A^3 t/(1-t)^4 + (Ac2/12) t/(1-t)^2 + sum c_P(t)`
    pub fn series(&self, a3: &Rational, cutoff: usize) -> TruncatedSeries {
        let one = TruncatedSeries::from_poly(&Poly::one(), cutoff).div_one_minus_t_pow(1);
        let t = TruncatedSeries::from_poly(&Poly::monomial(1, 1), cutoff);
        let t_over_1mt2 = t.div_one_minus_t_pow(1).div_one_minus_t_pow(1);
        let t_over_1mt4 = t_over_1mt2.div_one_minus_t_pow(1).div_one_minus_t_pow(1);
        let mut total = one.add(&t_over_1mt4.scale(a3)).add(&t_over_1mt2.scale(&self.acz12));
        for s in self.basket.entries() {
            total = total.add(&point_series(s, cutoff));
        }
        total
    }
}

/// `c_P(t) = (sum_{k=1}^{r-1} periodic_term(s, k) t^k) / (1 - t^r)`
fn point_series(s: &SingularityType, cutoff: usize) -> TruncatedSeries {
    let mut coeffs = vec![Rational::zero(); cutoff + 1];
    for (k, c) in coeffs.iter_mut().enumerate().take(s.r() as usize).skip(1) {
        *c = periodic_term(s, k as i64);
    }
    TruncatedSeries::new(coeffs).div_one_minus_t_pow(s.r())
}

/// Hilbert series of `(X, A)` with the given basket and genus, to `cutoff`.
pub fn hilbert_series(basket: &Basket, genus: i64, cutoff: usize) -> Result<TruncatedSeries, RrError> {
    let ctx = RrContext::new(basket.clone())?;
    let a3 = ctx.degree(genus)?;
    Ok(ctx.series(&a3, cutoff))
}

/// `chi(O_X(nA)) = 1 + n(n+2)(2n+2)/12 A^3 + n Ac2/12 + sum periodic_term(s, n)`,
/// which equals `h^0(nA)` for `n >= -1`.
pub fn plurigenus(basket: &Basket, a3: &Rational, n: i64) -> Rational {
    let cubic = Rational::new(n * (n + 2) * (2 * n + 2), 12);
    let periodic: Rational = basket.entries().iter().map(|s| periodic_term(s, n)).sum();
    Rational::one() + cubic * a3 + Rational::from(n) * acz12_unchecked(basket) + periodic
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{expand, RationalForm};

    fn basket(text: &str) -> Basket {
        text.parse().unwrap()
    }

    fn t(r: i64, a: i64) -> SingularityType {
        SingularityType::normalize(r, a).unwrap()
    }

    #[test]
    fn acz12_examples() {
        assert_eq!(acz12_from_basket(&Basket::empty()).unwrap(), Rational::one());
        assert_eq!(acz12_from_basket(&basket("3/1")).unwrap(), Rational::new(8, 9));
        assert_eq!(
            acz12_from_basket(&basket("3/1,5/1,11/3")).unwrap(),
            Rational::new(116, 495)
        );
        assert!(matches!(
            acz12_from_basket(&basket("9x3/1")),
            Err(RrError::BoundViolated { .. })
        ));
    }

    #[test]
    fn periodic_term_examples() {
        assert_eq!(periodic_term(&t(3, 1), -1), Rational::new(-1, 9));
        assert_eq!(periodic_term(&t(11, 3), -1), Rational::new(-5, 11));
        assert_eq!(periodic_term(&t(13, 4), 0), Rational::zero());
    }

    #[test]
    fn periodic_term_is_periodic() {
        for s in crate::basket::all_types() {
            let r = s.r() as i64;
            assert!(periodic_term(s, r).is_zero());
            for n in -3..=3 {
                assert_eq!(periodic_term(s, n), periodic_term(s, n + r));
            }
        }
    }

    #[test]
    fn polarisation_examples() {
        assert!(polarisation_residual(&basket("3/1")).is_zero());
        assert!(polarisation_residual(&basket("5/2,7/1")).is_zero());
        assert!(polarisation_residual(&Basket::empty()).is_zero());
        let lhs = Rational::one() + periodic_term(&t(5, 2), -1) + periodic_term(&t(7, 1), -1);
        assert_eq!(lhs, Rational::new(18, 35));
    }

    #[test]
    fn base_degree_examples() {
        assert_eq!(base_degree(&Basket::empty()), Rational::from(-2));
        assert_eq!(base_degree(&basket("3/1,5/1,11/3")), Rational::new(1, 165));
        assert_eq!(base_degree(&basket("21/10")), Rational::new(-23, 21));
    }

    #[test]
    fn kawamata_examples() {
        assert_eq!(kawamata_ok(&Rational::from(9), &Rational::one()), Stability::Stable);
        assert_eq!(
            kawamata_ok(&Rational::new(25, 3), &Rational::new(8, 9)),
            Stability::Unstable
        );
        assert_eq!(kawamata_ok(&Rational::from(10), &Rational::one()), Stability::Rejected);
        assert_eq!(
            kawamata_ok(&Rational::new(48, 5), &Rational::one()),
            Stability::Unstable
        );
    }

    #[test]
    fn series_of_x38() {
        let s = hilbert_series(&basket("3/1,5/1,11/3"), -2, 60).unwrap();
        let form = RationalForm::complete_intersection(&[38], vec![2, 3, 5, 11, 19]);
        assert_eq!(s, expand(&form, 60));
    }

    #[test]
    fn series_of_x10() {
        let s = hilbert_series(&basket("3/1"), 0, 60).unwrap();
        let form = RationalForm::complete_intersection(&[10], vec![1, 1, 2, 3, 5]);
        assert_eq!(s, expand(&form, 60));
    }

    #[test]
    fn series_of_cubic() {
        // C(n+4,4) - C(n+1,4)
        fn binom(n: i64, k: i64) -> i64 {
            if n < k {
                return 0;
            }
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        let s = hilbert_series(&Basket::empty(), 3, 30).unwrap();
        let expected: Vec<i64> = (0..=30).map(|n| binom(n + 4, 4) - binom(n + 1, 4)).collect();
        assert_eq!(&expected[..4], &[1, 5, 15, 34]);
        assert_eq!(s.integer_coeffs_i64().unwrap(), expected);
    }

    #[test]
    fn series_errors() {
        assert!(matches!(
            hilbert_series(&basket("3/1"), -5, 10),
            Err(RrError::GenusBelowMinimum { .. })
        ));
        assert!(matches!(
            hilbert_series(&Basket::empty(), -2, 10),
            Err(RrError::NonpositiveDegree { .. })
        ));
    }

    #[test]
    fn plurigenus_examples() {
        let x38 = basket("3/1,5/1,11/3");
        assert!(plurigenus(&x38, &Rational::new(1, 165), 1).is_zero());
        for b in ["", "3/1", "5/2,7/1", "21/10"] {
            assert!(plurigenus(&basket(b), &Rational::new(7, 3), -1).is_zero());
        }
        assert_eq!(
            plurigenus(&basket("5/2,7/1"), &Rational::new(1, 35), 2),
            Rational::from(2)
        );
    }

    #[test]
    fn raw_and_folded_inputs_agree() {
        // periodic data at n = +-1 from the raw (r, a) and (r, r - a) agree
        fn raw_term(r: i64, a: i64, n: i64) -> Rational {
            let b = (0..r).find(|b| (a * b - 2).rem_euclid(r) == 0).unwrap();
            let i = (-n * (r + 1) / 2).rem_euclid(r);
            let mut total = Rational::new(-i * (r * r - 1), 12 * r);
            for j in 1..i {
                let bj = (b * j).rem_euclid(r);
                total += Rational::new(bj * (r - bj), 2 * r);
            }
            total
        }
        for s in crate::basket::all_types() {
            let (r, a) = (s.r() as i64, s.a() as i64);
            for n in [-1, 1] {
                assert_eq!(raw_term(r, a, n), raw_term(r, r - a, n));
                assert_eq!(raw_term(r, a, n), periodic_term(s, n));
            }
        }
    }
}
