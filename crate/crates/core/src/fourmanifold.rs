//! Four-manifold data and the quantities derived from it.
//!
//! Only the `b1 = 0` moduli dimension `k = 2d - b⁺ - 1` is implemented. The
//! general dimension count for `b1 > 0` is not exposed.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisibility::{sw_divisibility_lower_bound, DivisibilityError, DivisibilityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("c² - signature = {0} is not divisible by 8")]
    NotDivisibleBy8(i64),
    #[error("-c² - b2 = {0} is not divisible by 8")]
    DonaldsonNotDivisibleBy8(i64),
    #[error("b_plus={0} must be odd and at least 3")]
    InvalidBPlus(i64),
    #[error("b1={0}; the divisibility constraint needs b1 = 0")]
    NonzeroB1(u32),
    #[error("Dirac index d={0} is below 2")]
    DTooSmall(i64),
    #[error("expected dimension k={0} is negative")]
    NegativeK(i64),
    #[error("b2 must be positive")]
    NonPositiveB2,
    #[error(transparent)]
    Divisibility(#[from] DivisibilityError),
}

/// Betti numbers and the square of the determinant class of a spin^c structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourManifoldData {
    pub b1: u32,
    pub b_plus: u32,
    pub b_minus: u32,
    pub c_squared: i64,
}

impl FourManifoldData {
    pub fn signature(&self) -> i64 {
        self.b_plus as i64 - self.b_minus as i64
    }

    /// `c² ≡ σ mod 8`, required of a characteristic class.
    pub fn is_consistent(&self) -> bool {
        (self.c_squared - self.signature()).rem_euclid(8) == 0
    }

    pub fn dirac_index(&self) -> Result<i64, ManifoldError> {
        dirac_index_d(self.c_squared, self.signature())
    }
}

/// `d = (c² - σ) / 8`; may be zero or negative.
pub fn dirac_index_d(c_squared: i64, signature: i64) -> Result<i64, ManifoldError> {
    let num = c_squared - signature;
    if num.rem_euclid(8) != 0 {
        return Err(ManifoldError::NotDivisibleBy8(num));
    }
    Ok(num / 8)
}

/// `k = 2d - b⁺ - 1` for odd `b⁺ >= 3`; negative values are returned as is.
pub fn expected_moduli_dimension(d: i64, b_plus: i64) -> Result<i64, ManifoldError> {
    if b_plus < 3 || b_plus % 2 == 0 {
        return Err(ManifoldError::InvalidBPlus(b_plus));
    }
    Ok(2 * d - b_plus - 1)
}

/// The divisibility bound that applies to the integer invariant of `m`.
pub fn divisibility_constraint(m: &FourManifoldData) -> Result<DivisibilityReport, ManifoldError> {
    if m.b1 != 0 {
        return Err(ManifoldError::NonzeroB1(m.b1));
    }
    let d = m.dirac_index()?;
    let k = expected_moduli_dimension(d, m.b_plus as i64)?;
    if d < 2 {
        return Err(ManifoldError::DTooSmall(d));
    }
    if k < 0 {
        return Err(ManifoldError::NegativeK(k));
    }
    let d = u32::try_from(d).map_err(|_| ManifoldError::DTooSmall(d))?;
    Ok(sw_divisibility_lower_bound(d, k as u32)?)
}

/// `k = (-c² - b2) / 8` with the verdict `k >= 0`, i.e. `-c² >= b2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DonaldsonK {
    pub k: i64,
    pub admissible: bool,
}

pub fn donaldson_k(c_squared: i64, b2: i64) -> Result<DonaldsonK, ManifoldError> {
    if b2 <= 0 {
        return Err(ManifoldError::NonPositiveB2);
    }
    let num = -c_squared - b2;
    if num.rem_euclid(8) != 0 {
        return Err(ManifoldError::DonaldsonNotDivisibleBy8(num));
    }
    let k = num / 8;
    Ok(DonaldsonK { k, admissible: k >= 0 })
}
