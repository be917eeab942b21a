//! Working-precision contract shared by every numerical routine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Guard bits carried on top of the requested decimal digits.
const GUARD_BITS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    working_digits: u32,
    target_rel_tol: f64,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 15;

    pub fn new(working_digits: u32, target_rel_tol: f64) -> Result<Self> {
        if working_digits < Self::MIN_DIGITS {
            return Err(Error::InvalidPrecision(format!(
                "working_digits = {working_digits} < {}",
                Self::MIN_DIGITS
            )));
        }
        let floor = 10f64.powi(2 - working_digits as i32);
        if !(target_rel_tol.is_finite() && target_rel_tol > 0.0) || target_rel_tol < floor {
            return Err(Error::InvalidPrecision(format!(
                "target_rel_tol = {target_rel_tol:e} must be >= {floor:e} at {working_digits} digits"
            )));
        }
        Ok(Precision { working_digits, target_rel_tol })
    }

    /// `digits` of working precision with a tolerance three digits looser.
    pub fn with_digits(working_digits: u32) -> Result<Self> {
        Self::new(working_digits, 10f64.powi(3 - working_digits.max(Self::MIN_DIGITS) as i32))
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn target_rel_tol(&self) -> f64 {
        self.target_rel_tol
    }

    /// Binary precision for MPFR values, including guard bits.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.working_digits) + GUARD_BITS
    }

    /// Same tolerance, `extra_bits` more mantissa; for routines that know
    /// they will cancel that many bits.
    pub fn bits_with_extra(&self, extra_bits: u32) -> u32 {
        self.bits() + extra_bits
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { working_digits: 30, target_rel_tol: 1e-27 }
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_too_few_digits() {
        assert!(Precision::new(14, 1e-10).is_err());
        assert!(Precision::new(15, 1e-13).is_ok());
    }

    #[test]
    fn rejects_tolerance_below_floor() {
        // floor is 10^(2 - digits)
        assert!(Precision::new(20, 1e-19).is_err());
        assert!(Precision::new(20, 1e-18).is_ok());
        assert!(Precision::new(20, 0.0).is_err());
        assert!(Precision::new(20, f64::NAN).is_err());
    }

    #[test]
    fn bits_cover_digits() {
        let p = Precision::with_digits(30).unwrap();
        assert!(p.bits() >= 100 + GUARD_BITS);
        assert_eq!(p.target_rel_tol(), 1e-27);
    }
}
