//! Elements of cyclic groups `Z/m`, used for `H^1` classes, component
//! group characters, and the `xi` coordinate of triple labels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicElt {
    pub value: u64,
    pub modulus: u64,
}

impl CyclicElt {
    pub fn new(value: u64, modulus: u64) -> CoreResult<Self> {
        if modulus == 0 {
            return Err(CoreError::InvalidParams("cyclic modulus 0".into()));
        }
        Ok(CyclicElt {
            value: value % modulus,
            modulus,
        })
    }

    pub fn zero(modulus: u64) -> Self {
        CyclicElt { value: 0, modulus }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &CyclicElt) -> CoreResult<CyclicElt> {
        if self.modulus != other.modulus {
            return Err(CoreError::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        CyclicElt::new(self.value + other.value, self.modulus)
    }

    /// Reduce to a divisor modulus.
    pub fn reduce(&self, new_modulus: u64) -> CoreResult<CyclicElt> {
        if new_modulus == 0 || !self.modulus.is_multiple_of(new_modulus) {
            return Err(CoreError::ModulusMismatch {
                expected: self.modulus,
                found: new_modulus,
            });
        }
        CyclicElt::new(self.value % new_modulus, new_modulus)
    }

    /// Multiply by a (signed) integer.
    pub fn scale(&self, m: i64) -> CyclicElt {
        let m = m.rem_euclid(self.modulus as i64) as u64;
        CyclicElt {
            value: (self.value as u128 * m as u128 % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for CyclicElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}
