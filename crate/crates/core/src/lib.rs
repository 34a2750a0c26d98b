//! Hilbert series of Fano 3-folds of Fano index 2 with terminal quotient
//! singularities: exact arithmetic, baskets, orbifold Riemann-Roch, the
//! enumeration of candidates, and graded-ring models.

// errors carry exact rationals, which are not small
#![allow(clippy::result_large_err)]

pub mod basket;
pub mod classifier;
pub mod exactnum;
pub mod genrings;
pub mod rr;

pub use basket::{Basket, BasketError, SingularityType};
pub use classifier::{Candidate, CandidateError};
pub use exactnum::{Poly, Rational, RationalForm, TruncatedSeries};
pub use genrings::{GradedModel, Shape};
pub use rr::{RrContext, RrError, Stability};
