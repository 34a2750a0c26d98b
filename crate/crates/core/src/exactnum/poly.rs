use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Univariate polynomial in `t` with arbitrary-precision integer coefficients.
///
/// Coefficients are stored low degree first with no trailing zeros, so the
/// zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<Coeff>", try_from = "Vec<Coeff>")]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// `c * t^k`
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Poly::new(coeffs)
    }

    /// `1 - t^w`
    pub fn one_minus_t_pow(w: u32) -> Self {
        assert!(w > 0, "weight must be positive");
        &Poly::one() - &Poly::monomial(1, w as usize)
    }

    /// `prod (1 - t^w)` over the given weights.
    pub fn denominator(weights: &[u32]) -> Self {
        weights.iter().fold(Poly::one(), |acc, &w| acc.mul_one_minus_t_pow(w))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies by `1 - t^w` without building the factor.
    pub fn mul_one_minus_t_pow(&self, w: u32) -> Poly {
        let w = w as usize;
        let mut out = vec![BigInt::zero(); self.coeffs.len() + w];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] += c;
            out[k + w] -= c;
        }
        Poly::new(out)
    }

    /// Exact division by `1 - t`, or `None` if `t = 1` is not a root.
    pub fn div_one_minus_t(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if !self.eval_at_one().is_zero() {
            return None;
        }
        // p(t) = (1 - t) q(t)  =>  q_k = sum_{i <= k} p_i
        let n = self.coeffs.len();
        let mut q = Vec::with_capacity(n - 1);
        let mut acc = BigInt::zero();
        for c in &self.coeffs[..n - 1] {
            acc += c;
            q.push(acc.clone());
        }
        Some(Poly::new(q))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Indices and values of the nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

impl From<Poly> for Vec<BigInt> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl From<Vec<BigInt>> for Poly {
    fn from(v: Vec<BigInt>) -> Self {
        Poly::new(v)
    }
}

/// Serialized coefficient: a JSON integer when it fits in `i64`, otherwise
/// a decimal string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Small(i64),
    Big(String),
}

impl From<Poly> for Vec<Coeff> {
    fn from(p: Poly) -> Self {
        p.coeffs
            .into_iter()
            .map(|c| i64::try_from(&c).map_or_else(|_| Coeff::Big(c.to_string()), Coeff::Small))
            .collect()
    }
}

impl TryFrom<Vec<Coeff>> for Poly {
    type Error = num_bigint::ParseBigIntError;

    fn try_from(v: Vec<Coeff>) -> Result<Self, Self::Error> {
        v.into_iter()
            .map(|c| match c {
                Coeff::Small(n) => Ok(BigInt::from(n)),
                Coeff::Big(s) => s.parse(),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Poly::new)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    /// Renders as e.g. `1 - 2t^3 - 3t^4 + 3t^5 + 2t^6 - t^9`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_signs_and_powers() {
        let p = Poly::from_i64s(&[1, 0, 0, -2, -3, 3, 2, 0, 0, -1]);
        assert_eq!(p.to_string(), "1 - 2t^3 - 3t^4 + 3t^5 + 2t^6 - t^9");
        assert_eq!(Poly::from_i64s(&[0, -1]).to_string(), "-t");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = Poly::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly::from_i64s(&[0, 0]).degree(), None);
    }

    #[test]
    fn denominator_product() {
        // (1-t)(1-t^2) = 1 - t - t^2 + t^3
        assert_eq!(Poly::denominator(&[1, 2]), Poly::from_i64s(&[1, -1, -1, 1]));
    }

    #[test]
    fn divide_by_one_minus_t() {
        let p = Poly::one_minus_t_pow(5);
        let q = p.div_one_minus_t().unwrap();
        assert_eq!(q, Poly::from_i64s(&[1, 1, 1, 1, 1]));
        assert!(q.div_one_minus_t().is_none());
    }

    #[test]
    fn product_matches_repeated_factor() {
        let a = Poly::one_minus_t_pow(4);
        assert_eq!(&a * &a, Poly::one().mul_one_minus_t_pow(4).mul_one_minus_t_pow(4));
    }
}
