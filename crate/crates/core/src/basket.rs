//! Terminal quotient singularities `1/r(a, r-a, 2)` and baskets of them.
//!
//! A basket is a multiset of singularity types. Each type is kept in the
//! normal form `1 <= a <= (r-1)/2`, and baskets are stored sorted by `(r, a)`
//! so that equal multisets compare equal.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exactnum::Rational;

/// Largest index that fits under the basket bound: `(r^2-1)/r < 24`.
pub const MAX_INDEX: u32 = 23;

/// Upper bound (exclusive) on `sum (r^2-1)/r` over a basket.
pub const BASKET_BOUND: i64 = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BasketError {
    #[error("even-index: index {r} is even; index-2 baskets only contain odd r")]
    EvenIndex { r: i64 },
    #[error("index {r} is too small; need r >= 3")]
    IndexTooSmall { r: i64 },
    #[error("zero-weight: {a} is 0 mod {r}")]
    ZeroWeight { r: i64, a: i64 },
    #[error("not-coprime: gcd({a}, {r}) != 1")]
    NotCoprime { r: i64, a: i64 },
    #[error("{text:?} is not normalized; write {hint}")]
    NotNormalized { text: String, hint: String },
    #[error("cannot parse basket item {0:?}: expected [<m>x]<r>/<a>")]
    Syntax(String),
    #[error("bound-violated: sum (r^2-1)/r = {0} is not below 24")]
    BoundViolated(Rational),
}

/// The quotient singularity `1/r(a, -a, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", try_from = "[u32; 2]")]
pub struct SingularityType {
    r: u32,
    a: u32,
}

impl SingularityType {
    /// Canonical type for `1/r(a_raw, -a_raw, 2)`: reduces `a_raw` mod `r` and
    /// folds it into `[1, (r-1)/2]`.
    pub fn normalize(r: i64, a_raw: i64) -> Result<Self, BasketError> {
        if r < 3 {
            return Err(BasketError::IndexTooSmall { r });
        }
        if r.is_even() {
            return Err(BasketError::EvenIndex { r });
        }
        let a = a_raw.rem_euclid(r);
        if a == 0 {
            return Err(BasketError::ZeroWeight { r, a: a_raw });
        }
        if a.gcd(&r) != 1 {
            return Err(BasketError::NotCoprime { r, a: a_raw });
        }
        let a = a.min(r - a);
        Ok(SingularityType {
            r: r as u32,
            a: a as u32,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// The unique `b` in `[0, r-1]` with `a * b = 2 mod r`.
    pub fn b(&self) -> u32 {
        let inv_a = mod_inverse(self.a as i64, self.r as i64);
        ((2 * inv_a).rem_euclid(self.r as i64)) as u32
    }

    /// Local index `i_n` of `nA`: the residue of `-n / 2` mod `r`, since
    /// `K_X = -2A` near the point.
    pub fn local_index(&self, n: i64) -> u32 {
        let r = self.r as i64;
        let half = (r + 1) / 2; // inverse of 2 mod r
        ((-n).rem_euclid(r) * half).rem_euclid(r) as u32
    }

    /// `(r^2 - 1)/r`, this point's share of the basket bound.
    pub fn bound_contribution(&self) -> Rational {
        let r = self.r as i64;
        Rational::new(r * r - 1, r)
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.r, self.a)
    }
}

impl From<SingularityType> for [u32; 2] {
    fn from(s: SingularityType) -> Self {
        [s.r, s.a]
    }
}

impl TryFrom<[u32; 2]> for SingularityType {
    type Error = BasketError;
    fn try_from([r, a]: [u32; 2]) -> Result<Self, Self::Error> {
        let s = SingularityType::normalize(r as i64, a as i64)?;
        if s.a != a {
            return Err(BasketError::NotNormalized {
                text: format!("[{r},{a}]"),
                hint: format!("[{r},{}]", s.a),
            });
        }
        Ok(s)
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// Every singularity type with `3 <= r <= 23`, sorted by `(r, a)`.
pub fn all_types() -> &'static [SingularityType] {
    static TYPES: OnceLock<Vec<SingularityType>> = OnceLock::new();
    TYPES.get_or_init(|| {
        (3..=MAX_INDEX as i64)
            .step_by(2)
            .flat_map(|r| (1..=(r - 1) / 2).filter(move |a| a.gcd(&r) == 1).map(move |a| (r, a)))
            .map(|(r, a)| SingularityType::normalize(r, a).expect("valid by construction"))
            .collect()
    })
}

/// A multiset of singularity types, kept sorted by `(r, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "Vec<SingularityType>", from = "Vec<SingularityType>")]
pub struct Basket {
    entries: Vec<SingularityType>,
}

impl Basket {
    pub fn new(mut entries: Vec<SingularityType>) -> Self {
        entries.sort_unstable();
        Basket { entries }
    }

    pub fn empty() -> Self {
        Basket::default()
    }

    pub fn entries(&self) -> &[SingularityType] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `sum (r^2-1)/r`
    pub fn bound_sum(&self) -> Rational {
        self.entries.iter().map(SingularityType::bound_contribution).sum()
    }

    pub fn satisfies_bound(&self) -> bool {
        self.bound_sum() < BASKET_BOUND
    }

    /// Number of exceptional curves on the surface resolution, `sum (r - 1)`.
    pub fn singular_rank(&self) -> u32 {
        self.entries.iter().map(|s| s.r - 1).sum()
    }

    /// Distinct types with their multiplicities, in canonical order.
    pub fn grouped(&self) -> Vec<(SingularityType, usize)> {
        let mut out: Vec<(SingularityType, usize)> = Vec::new();
        for s in &self.entries {
            match out.last_mut() {
                Some((t, m)) if t == s => *m += 1,
                _ => out.push((*s, 1)),
            }
        }
        out
    }
}

impl From<Basket> for Vec<SingularityType> {
    fn from(b: Basket) -> Self {
        b.entries
    }
}

impl From<Vec<SingularityType>> for Basket {
    fn from(entries: Vec<SingularityType>) -> Self {
        Basket::new(entries)
    }
}

pub fn singular_rank(basket: &Basket) -> u32 {
    basket.singular_rank()
}

impl fmt::Display for Basket {
    /// Text syntax, e.g. `2x3/1,5/2`; the empty basket is the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, m)) in self.grouped().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if m > 1 {
                write!(f, "{m}x")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Basket {
    type Err = BasketError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut entries = Vec::new();
        if compact.is_empty() {
            return Ok(Basket::empty());
        }
        for item in compact.split(',') {
            let syntax = || BasketError::Syntax(item.to_string());
            let (mult, body) = match item.split_once(['x', 'X']) {
                Some((m, body)) => (m.parse::<usize>().map_err(|_| syntax())?, body),
                None => (1, item),
            };
            let (r, a) = body.split_once('/').ok_or_else(syntax)?;
            let r: i64 = r.parse().map_err(|_| syntax())?;
            let a: i64 = a.parse().map_err(|_| syntax())?;
            if mult == 0 {
                return Err(syntax());
            }
            let s = SingularityType::normalize(r, a)?;
            if s.a as i64 != a {
                let hint = if mult > 1 { format!("{mult}x{s}") } else { s.to_string() };
                return Err(BasketError::NotNormalized {
                    text: item.to_string(),
                    hint,
                });
            }
            entries.extend(std::iter::repeat_n(s, mult));
        }
        Ok(Basket::new(entries))
    }
}

/// Every basket with `sum (r^2-1)/r < 24`, including the empty one, in
/// lexicographic order of their sorted type sequences.
pub fn enumerate_baskets() -> Vec<Basket> {
    let types = all_types();
    let costs: Vec<Rational> = types.iter().map(SingularityType::bound_contribution).collect();
    let bound = Rational::from(BASKET_BOUND);
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(types, &costs, &bound, 0, &Rational::zero(), &mut current, &mut out);
    out
}

fn descend(
    types: &[SingularityType],
    costs: &[Rational],
    bound: &Rational,
    start: usize,
    spent: &Rational,
    current: &mut Vec<SingularityType>,
    out: &mut Vec<Basket>,
) {
    out.push(Basket {
        entries: current.clone(),
    });
    for i in start..types.len() {
        let next = spent + &costs[i];
        if &next >= bound {
            // costs only grow along the sorted type list
            break;
        }
        current.push(types[i]);
        descend(types, costs, bound, i, &next, current, out);
        current.pop();
    }
}
