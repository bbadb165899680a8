use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

use crate::instance::DomainDist;

/// Arithmetic used by the analysis routines: exact rationals or `f64`.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// The weight of value `index` of `domain` in this representation.
    fn from_weight(domain: &DomainDist, index: usize) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    /// Whether this representation is exact.
    fn is_exact() -> bool;
}

impl Scalar for f64 {
    fn from_weight(domain: &DomainDist, index: usize) -> Self {
        domain.float_weight(index)
    }

    fn from_rational(r: &BigRational) -> Self {
        num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for BigRational {
    fn from_weight(domain: &DomainDist, index: usize) -> Self {
        domain.exact_weight(index).clone()
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }
}
