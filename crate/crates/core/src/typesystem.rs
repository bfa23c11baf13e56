//! Type vectors, the osculating-order rule and the necessary conditions on
//! the numerical invariants (d, n, ρ, g, γ) of a hyperelliptic d-osculating
//! cover.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// γ ∈ ℕ⁴: intersection multiplicities of the cover's image with r₀⊥..r₃⊥.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct TypeVector([i64; 4]);

impl TypeVector {
    pub fn new(gamma: [i64; 4]) -> Result<Self> {
        if gamma.iter().any(|&x| x < 0) {
            return Err(Error::NegativeType(gamma));
        }
        for x in gamma {
            check_range("type entry", x)?;
        }
        Ok(TypeVector(gamma))
    }

    pub fn entries(&self) -> [i64; 4] {
        self.0
    }

    /// γ^(1) = Σγᵢ.
    pub fn gamma1(&self) -> i64 {
        self.0.iter().sum()
    }

    /// γ^(2) = Σγᵢ².
    pub fn gamma2(&self) -> i64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

impl TryFrom<[i64; 4]> for TypeVector {
    type Error = Error;

    fn try_from(value: [i64; 4]) -> Result<Self> {
        TypeVector::new(value)
    }
}

impl From<TypeVector> for [i64; 4] {
    fn from(value: TypeVector) -> [i64; 4] {
        value.0
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// Numerical data (d, n, ρ, g, γ) of a hyperelliptic d-osculating cover.
///
/// Construction only enforces ranges; the admissibility conditions, including
/// the constraint on ρ, are reported by [`check_cover`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    d: i64,
    n: i64,
    rho: i64,
    g: i64,
    #[serde(rename = "type")]
    gamma: TypeVector,
}

impl CoverSpec {
    pub fn new(d: i64, n: i64, rho: i64, g: i64, gamma: TypeVector) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidArgument(format!(
                "osculating order d = {d} must be positive"
            )));
        }
        if n < 1 {
            return Err(Error::InvalidArgument(format!(
                "degree n = {n} must be positive"
            )));
        }
        if g < 0 {
            return Err(Error::InvalidArgument(format!(
                "genus g = {g} must be non-negative"
            )));
        }
        Ok(CoverSpec {
            d: check_range("d", d)?,
            n: check_range("n", n)?,
            rho: check_range("rho", rho)?,
            g: check_range("g", g)?,
            gamma,
        })
    }

    /// Same as [`CoverSpec::new`] with ρ = 1, the ramification of the
    /// constructed families.
    pub fn unramified_default(d: i64, n: i64, g: i64, gamma: TypeVector) -> Result<Self> {
        Self::new(d, n, 1, g, gamma)
    }

    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn n(&self) -> i64 {
        self.n
    }
    pub fn rho(&self) -> i64 {
        self.rho
    }
    pub fn g(&self) -> i64 {
        self.g
    }
    pub fn gamma(&self) -> TypeVector {
        self.gamma
    }
}

/// j = 2d − 1: the pole order at a Weierstrass point whose coboundary image is
/// the d-th osculating space. Requires 2d − 1 < 2g.
pub fn osculating_gap_order(d: i64, g: i64) -> Result<i64> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!(
            "osculating order d = {d} must be positive"
        )));
    }
    let order = 2 * check_range("d", d)? - 1;
    let twice_genus = 2 * check_range("g", g)?;
    if order < twice_genus {
        Ok(order)
    } else {
        Err(Error::OrderExceedsGapRange { order, twice_genus })
    }
}

/// (2d−1)(2n−2) + 4 − ρ², the upper bound on γ^(2).
pub fn quadratic_bound(d: i64, n: i64, rho: i64) -> i64 {
    (2 * d - 1) * (2 * n - 2) + 4 - rho * rho
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// γ₀ + 1 ≡ γ₁ ≡ γ₂ ≡ γ₃ ≡ n (mod 2)
    ParityChain,
    /// 2g + 1 ≤ γ^(1)
    GenusBound,
    /// γ^(2) ≤ (2d−1)(2n−2) + 4 − ρ²
    QuadraticBound,
    /// ρ odd, 1 ≤ ρ ≤ 2d − 1
    RamificationIndex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionStatus {
    pub condition: Condition,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub passed: bool,
    pub conditions: Vec<ConditionStatus>,
}

impl CoverReport {
    pub fn violated(&self) -> impl Iterator<Item = Condition> + '_ {
        self.conditions
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.condition)
    }

    pub fn holds(&self, condition: Condition) -> bool {
        self.conditions
            .iter()
            .find(|c| c.condition == condition)
            .is_some_and(|c| c.holds)
    }
}

/// Evaluates every necessary condition independently; never short-circuits.
pub fn check_cover(spec: &CoverSpec) -> CoverReport {
    let [g0, g1, g2, g3] = spec.gamma.entries();
    let n = spec.n;
    let parity = [g0 + 1, g1, g2, g3]
        .iter()
        .all(|x| (x - n).rem_euclid(2) == 0);
    let gamma1 = spec.gamma.gamma1();
    let gamma2 = spec.gamma.gamma2();
    let bound = quadratic_bound(spec.d, n, spec.rho);
    let rho_ok = spec.rho >= 1 && spec.rho % 2 == 1 && spec.rho < 2 * spec.d;

    let conditions = vec![
        ConditionStatus {
            condition: Condition::ParityChain,
            holds: parity,
            detail: format!(
                "residues mod 2 of (γ0+1, γ1, γ2, γ3, n) = ({}, {}, {}, {}, {})",
                (g0 + 1).rem_euclid(2),
                g1.rem_euclid(2),
                g2.rem_euclid(2),
                g3.rem_euclid(2),
                n.rem_euclid(2)
            ),
        },
        ConditionStatus {
            condition: Condition::GenusBound,
            holds: 2 * spec.g < gamma1,
            detail: format!("2g+1 = {} vs γ^(1) = {gamma1}", 2 * spec.g + 1),
        },
        ConditionStatus {
            condition: Condition::QuadraticBound,
            holds: gamma2 <= bound,
            detail: format!("γ^(2) = {gamma2} vs (2d-1)(2n-2)+4-ρ² = {bound}"),
        },
        ConditionStatus {
            condition: Condition::RamificationIndex,
            holds: rho_ok,
            detail: format!("ρ = {} vs 2d-1 = {}", spec.rho, 2 * spec.d - 1),
        },
    ];
    CoverReport {
        passed: conditions.iter().all(|c| c.holds),
        conditions,
    }
}
