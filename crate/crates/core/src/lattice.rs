//! Picard lattice of the blown-up ruled surface S⊥.
//!
//! Basis: the pullback e*C₀ of the zero-section, the pullbacks of the four
//! fibers over the half-periods, and the exceptional curves s₀⊥..s₃⊥ (over
//! the points of C₀) and r₀⊥..r₃⊥. All fibers are numerically equal; they are
//! distinguished only up to the 2-torsion label of their sum.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfperiod::{torsion_of_fibers, HalfPeriod, TorsionLabel};

/// A divisor class on S⊥. Fiber degree and torsion are derived, never stored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicClass {
    pub c: i64,
    pub fibers: [i64; 4],
    pub s: [i64; 4],
    pub r: [i64; 4],
}

fn checked_zip(
    a: &[i64; 4],
    b: &[i64; 4],
    f: impl Fn(i64, i64) -> Option<i64>,
) -> Result<[i64; 4]> {
    let mut out = [0; 4];
    for i in 0..4 {
        out[i] = f(a[i], b[i]).ok_or(Error::Overflow("class coefficients"))?;
    }
    Ok(out)
}

fn sum4(v: &[i64; 4]) -> i128 {
    v.iter().map(|&x| x as i128).sum()
}

impl PicClass {
    pub const ZERO: PicClass = PicClass {
        c: 0,
        fibers: [0; 4],
        s: [0; 4],
        r: [0; 4],
    };

    /// e*C₀.
    pub fn section() -> Self {
        PicClass { c: 1, ..Self::ZERO }
    }

    /// Pullback of the fiber over `w`.
    pub fn fiber(w: HalfPeriod) -> Self {
        let mut fibers = [0; 4];
        fibers[w.index()] = 1;
        PicClass {
            fibers,
            ..Self::ZERO
        }
    }

    pub fn s_exceptional(i: HalfPeriod) -> Self {
        let mut s = [0; 4];
        s[i.index()] = 1;
        PicClass { s, ..Self::ZERO }
    }

    pub fn r_exceptional(i: HalfPeriod) -> Self {
        let mut r = [0; 4];
        r[i.index()] = 1;
        PicClass { r, ..Self::ZERO }
    }

    /// Strict transform of C₀, which passes through all four sᵢ.
    pub fn c0_strict() -> Self {
        PicClass {
            c: 1,
            s: [-1; 4],
            ..Self::ZERO
        }
    }

    /// e*(c·C₀ + f·S_w) − Σ sᵢ·sᵢ⊥ − Σ rᵢ·rᵢ⊥ with every fiber placed over `w`.
    pub fn pulled_back(
        c: i64,
        fiber_count: i64,
        w: HalfPeriod,
        s_minus: [i64; 4],
        r_minus: [i64; 4],
    ) -> Self {
        let mut fibers = [0; 4];
        fibers[w.index()] = fiber_count;
        PicClass {
            c,
            fibers,
            s: s_minus.map(|x| -x),
            r: r_minus.map(|x| -x),
        }
    }

    /// Numerical fiber degree Σmᵢ.
    pub fn fiber_degree(&self) -> Result<i64> {
        i64::try_from(sum4(&self.fibers)).map_err(|_| Error::Overflow("fiber degree"))
    }

    pub fn torsion(&self) -> TorsionLabel {
        torsion_of_fibers(&self.fibers)
    }

    pub fn checked_add(&self, other: &PicClass) -> Result<PicClass> {
        Ok(PicClass {
            c: self
                .c
                .checked_add(other.c)
                .ok_or(Error::Overflow("class coefficients"))?,
            fibers: checked_zip(&self.fibers, &other.fibers, i64::checked_add)?,
            s: checked_zip(&self.s, &other.s, i64::checked_add)?,
            r: checked_zip(&self.r, &other.r, i64::checked_add)?,
        })
    }

    pub fn checked_sub(&self, other: &PicClass) -> Result<PicClass> {
        Ok(PicClass {
            c: self
                .c
                .checked_sub(other.c)
                .ok_or(Error::Overflow("class coefficients"))?,
            fibers: checked_zip(&self.fibers, &other.fibers, i64::checked_sub)?,
            s: checked_zip(&self.s, &other.s, i64::checked_sub)?,
            r: checked_zip(&self.r, &other.r, i64::checked_sub)?,
        })
    }

    pub fn checked_scale(&self, k: i64) -> Result<PicClass> {
        let kk = [k; 4];
        Ok(PicClass {
            c: self
                .c
                .checked_mul(k)
                .ok_or(Error::Overflow("class coefficients"))?,
            fibers: checked_zip(&self.fibers, &kk, i64::checked_mul)?,
            s: checked_zip(&self.s, &kk, i64::checked_mul)?,
            r: checked_zip(&self.r, &kk, i64::checked_mul)?,
        })
    }

    /// Σ kᵢ·Dᵢ with overflow detection.
    pub fn combination(terms: &[(i64, &PicClass)]) -> Result<PicClass> {
        terms.iter().try_fold(PicClass::ZERO, |acc, (k, d)| {
            acc.checked_add(&d.checked_scale(*k)?)
        })
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if self.c != 0 {
            terms.push(format!("{}·C0", self.c));
        }
        for (prefix, v) in [("F", &self.fibers), ("s", &self.s), ("r", &self.r)] {
            for (i, &x) in v.iter().enumerate() {
                if x != 0 {
                    terms.push(format!("{x}·{prefix}{i}"));
                }
            }
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// The intersection pairing.
///
/// (e*C₀)² = 0, e*C₀·F = 1, F·F′ = 0, (sᵢ⊥)² = (rᵢ⊥)² = −1, all other
/// distinct basis pairs 0.
pub fn intersect(a: &PicClass, b: &PicClass) -> Result<i64> {
    let mut total = a.c as i128 * sum4(&b.fibers) + sum4(&a.fibers) * b.c as i128;
    for i in 0..4 {
        total -= a.s[i] as i128 * b.s[i] as i128;
        total -= a.r[i] as i128 * b.r[i] as i128;
    }
    i64::try_from(total).map_err(|_| Error::Overflow("intersection number"))
}

/// K = −2·e*C₀ + Σ sᵢ⊥ + Σ rᵢ⊥.
///
/// K_S ≡ −2C₀ on the ruled surface (C₀² = 0 over an elliptic base), and each
/// blow-up adds its exceptional curve.
pub fn canonical_class() -> PicClass {
    PicClass {
        c: -2,
        fibers: [0; 4],
        s: [1; 4],
        r: [1; 4],
    }
}

/// Arithmetic genus 1 + ½·D·(D + K).
pub fn adjunction_genus(d: &PicClass) -> Result<i64> {
    let dk = d.checked_add(&canonical_class())?;
    let twice = intersect(d, &dk)?;
    if twice.rem_euclid(2) != 0 {
        return Err(Error::Internal(format!(
            "D·(D+K) = {twice} is odd for {d}; the Gram data is corrupted"
        )));
    }
    Ok(1 + twice / 2)
}

/// Linear equivalence: equal c, s, r, fiber degree and fiber torsion.
pub fn lin_equiv(a: &PicClass, b: &PicClass) -> bool {
    a.c == b.c
        && a.s == b.s
        && a.r == b.r
        && sum4(&a.fibers) == sum4(&b.fibers)
        && a.torsion() == b.torsion()
}
