//! Exact rational helpers and the `"num/den"` wire form used in reports.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn ratio_big(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // to_f64 gives up on huge operands; fall back to scaled division
        let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
        let num = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let den = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        if den.is_zero() {
            f64::NAN
        } else {
            num / den
        }
    })
}

/// `"num/den"` (always with a denominator, reduced).
pub fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A rational as it appears in JSON reports: lossless fraction plus a float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub fraction: String,
    pub value: f64,
}

impl From<&BigRational> for RationalRepr {
    fn from(r: &BigRational) -> Self {
        RationalRepr {
            fraction: fraction_string(r),
            value: to_f64(r),
        }
    }
}
