//! The 2-torsion subgroup X[2] of the elliptic curve.
//!
//! The four half-periods ω₀ (the origin), ω₁, ω₂, ω₃ form a Klein four-group.
//! Labels are identified with bit pairs once and for all: ωᵢ ↔ i read in
//! binary, so the group law is XOR and ω₁ + ω₂ = ω₃.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A half-period ωᵢ, serialized as its index `0..=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct HalfPeriod(u8);

impl HalfPeriod {
    pub const ORIGIN: HalfPeriod = HalfPeriod(0);
    pub const ALL: [HalfPeriod; 4] = [HalfPeriod(0), HalfPeriod(1), HalfPeriod(2), HalfPeriod(3)];

    pub fn new(index: usize) -> Result<Self> {
        if index < 4 {
            Ok(HalfPeriod(index as u8))
        } else {
            Err(Error::InvalidArgument(format!(
                "half-period index {index} not in 0..=3"
            )))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_origin(self) -> bool {
        self.0 == 0
    }
}

impl Add for HalfPeriod {
    type Output = HalfPeriod;

    // (ℤ/2)² addition on the index bits
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: HalfPeriod) -> HalfPeriod {
        HalfPeriod(self.0 ^ rhs.0)
    }
}

impl TryFrom<u8> for HalfPeriod {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        HalfPeriod::new(value as usize)
    }
}

impl From<HalfPeriod> for u8 {
    fn from(value: HalfPeriod) -> u8 {
        value.0
    }
}

impl fmt::Display for HalfPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ω{}", self.0)
    }
}

/// Group-sum of a fiber divisor supported over the half-periods.
///
/// Two such divisors of equal degree are linearly equivalent on X exactly
/// when their labels agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorsionLabel(pub HalfPeriod);

impl TorsionLabel {
    pub const IDENTITY: TorsionLabel = TorsionLabel(HalfPeriod::ORIGIN);
}

impl Add for TorsionLabel {
    type Output = TorsionLabel;

    fn add(self, rhs: TorsionLabel) -> TorsionLabel {
        TorsionLabel(self.0 + rhs.0)
    }
}

impl fmt::Display for TorsionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Σ (mᵢ mod 2)·ωᵢ. Negative multiplicities are allowed.
pub fn torsion_of_fibers(m: &[i64; 4]) -> TorsionLabel {
    let sum = HalfPeriod::ALL
        .iter()
        .zip(m)
        .filter(|(_, mult)| mult.rem_euclid(2) == 1)
        .fold(HalfPeriod::ORIGIN, |acc, (w, _)| acc + *w);
    TorsionLabel(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(i: usize) -> HalfPeriod {
        HalfPeriod::new(i).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(w(0) + w(2), w(2));
        assert_eq!(w(1) + w(1), w(0));
        assert_eq!(w(1) + w(2), w(3));
    }

    #[test]
    fn klein_group_axioms_exhaustive() {
        for a in HalfPeriod::ALL {
            assert_eq!(a + HalfPeriod::ORIGIN, a);
            assert_eq!(a + a, HalfPeriod::ORIGIN);
            for b in HalfPeriod::ALL {
                assert_eq!(a + b, b + a);
                for c in HalfPeriod::ALL {
                    assert_eq!((a + b) + c, a + (b + c));
                }
            }
        }
        assert_eq!(w(1) + w(2) + w(3), HalfPeriod::ORIGIN);
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(torsion_of_fibers(&[3, 0, 0, 0]), TorsionLabel::IDENTITY);
        assert_eq!(torsion_of_fibers(&[0, 2, 0, 0]), TorsionLabel::IDENTITY);
        assert_eq!(torsion_of_fibers(&[1, 1, 0, 0]), TorsionLabel(w(1)));
        assert_eq!(torsion_of_fibers(&[0, -1, 0, 0]), TorsionLabel(w(1)));
    }

    #[test]
    fn rejects_bad_index() {
        assert!(HalfPeriod::new(4).is_err());
        assert!(serde_json::from_str::<HalfPeriod>("7").is_err());
        assert_eq!(serde_json::from_str::<HalfPeriod>("2").unwrap(), w(2));
        assert_eq!(serde_json::to_string(&w(3)).unwrap(), "3");
    }

    proptest! {
        #[test]
        fn torsion_is_additive(a in prop::array::uniform4(-50i64..50), b in prop::array::uniform4(-50i64..50)) {
            let sum = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]];
            prop_assert_eq!(torsion_of_fibers(&sum), torsion_of_fibers(&a) + torsion_of_fibers(&b));
            let doubled = a.map(|x| 2 * x);
            prop_assert_eq!(torsion_of_fibers(&doubled), TorsionLabel::IDENTITY);
        }
    }
}
