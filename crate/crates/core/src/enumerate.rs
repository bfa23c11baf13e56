//! Sweeps over admissible types and constructed families, and an
//! independent brute-force oracle for the admissibility conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builder::{
    build_family, degree_genus_of, gamma_of, EpsilonChoice, EpsilonFamily, MuVector,
};
use crate::error::{Error, Result};
use crate::typesystem::{check_cover, quadratic_bound, Condition, CoverSpec, TypeVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub d_max: i64,
    /// componentwise bound on μ
    pub mu_max: i64,
    pub genus_max: i64,
    pub format: OutputFormat,
}

impl SweepConfig {
    pub fn new(d_max: i64, mu_max: i64, genus_max: i64) -> Result<Self> {
        if d_max < 1 || mu_max < 0 || genus_max < 0 {
            return Err(Error::InvalidArgument(format!(
                "sweep bounds must satisfy d_max >= 1, mu_max >= 0, genus_max >= 0 (got {d_max}, {mu_max}, {genus_max})"
            )));
        }
        if d_max > 64 || mu_max > 64 {
            return Err(Error::InvalidArgument(
                "sweep bounds above 64 are not supported".into(),
            ));
        }
        Ok(SweepConfig {
            d_max,
            mu_max,
            genus_max,
            format: OutputFormat::Csv,
        })
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AdmissibleType {
    pub gamma: TypeVector,
    /// ⌊(γ^(1) − 1)/2⌋
    pub max_genus: i64,
}

/// Every γ passing the necessary conditions for some g ≥ 0, with its largest
/// admissible genus.
pub fn enumerate_admissible(d: i64, n: i64, rho: i64) -> Vec<AdmissibleType> {
    enumerate_admissible_with(d, n, rho, |spec| check_cover(spec).passed)
}

/// [`enumerate_admissible`] with a caller-supplied admissibility predicate.
pub fn enumerate_admissible_with(
    d: i64,
    n: i64,
    rho: i64,
    admissible: impl Fn(&CoverSpec) -> bool,
) -> Vec<AdmissibleType> {
    if d < 1 || n < 1 || d > 1 << 20 || n > 1 << 20 || rho.abs() > 1 << 20 {
        return Vec::new();
    }
    let bound = quadratic_bound(d, n, rho);
    if bound < 0 {
        return Vec::new();
    }
    let cap = bound.isqrt();
    let mut out = Vec::new();
    for a in 0..=cap {
        for b in 0..=cap {
            for c in 0..=cap {
                for e in 0..=cap {
                    let gamma = TypeVector::new([a, b, c, e]).expect("cube entries are small");
                    let g1 = gamma.gamma1();
                    if g1 < 1 {
                        continue;
                    }
                    let max_genus = (g1 - 1) / 2;
                    let spec =
                        CoverSpec::new(d, n, rho, max_genus, gamma).expect("validated ranges");
                    if admissible(&spec) {
                        out.push(AdmissibleType { gamma, max_genus });
                    }
                }
            }
        }
    }
    out
}

/// A single-condition fault for exercising the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// negate the parity test on γᵢ
    FlipParity(usize),
    /// use 2g + 1 < γ^(1)
    StrictGenusBound,
    /// allow γ^(2) up to bound + 4. Under the parity chain γ^(2) and the
    /// bound agree mod 4, so a slack below 4 would change nothing.
    LooseQuadraticBound,
    /// ignore the constraint on ρ
    SkipRamification,
}

/// `check_cover` with one condition deliberately broken.
pub fn faulty_check(spec: &CoverSpec, fault: Fault) -> bool {
    let report = check_cover(spec);
    let gamma = spec.gamma().entries();
    let n = spec.n();
    let mut parity = report.holds(Condition::ParityChain);
    let mut genus = report.holds(Condition::GenusBound);
    let mut quad = report.holds(Condition::QuadraticBound);
    let mut ram = report.holds(Condition::RamificationIndex);
    match fault {
        Fault::FlipParity(i) => {
            let shifted = [gamma[0] + 1, gamma[1], gamma[2], gamma[3]];
            parity = (0..4).all(|j| {
                let ok = (shifted[j] - n).rem_euclid(2) == 0;
                if j == i % 4 {
                    !ok
                } else {
                    ok
                }
            });
        }
        Fault::StrictGenusBound => genus = 2 * spec.g() + 1 < spec.gamma().gamma1(),
        Fault::LooseQuadraticBound => {
            quad = spec.gamma().gamma2() <= quadratic_bound(spec.d(), n, spec.rho()) + 4
        }
        Fault::SkipRamification => ram = true,
    }
    parity && genus && quad && ram
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDiff {
    pub n: i64,
    pub rho: Option<i64>,
    pub gamma: [i64; 4],
    pub oracle: String,
    pub implementation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub d: i64,
    pub n_max: i64,
    pub types_checked: usize,
    pub admissibility_diffs: Vec<OracleDiff>,
    pub degree_diffs: Vec<OracleDiff>,
}

impl OracleReport {
    pub fn is_empty(&self) -> bool {
        self.admissibility_diffs.is_empty() && self.degree_diffs.is_empty()
    }
}

/// Brute-force comparison of [`enumerate_admissible`] and [`degree_genus_of`]
/// against first-principles re-implementations.
pub fn oracle_crosscheck(d: i64, n_max: i64) -> OracleReport {
    oracle_crosscheck_with(d, n_max, enumerate_admissible, degree_genus_of)
}

pub fn oracle_crosscheck_with(
    d: i64,
    n_max: i64,
    admissible: impl Fn(i64, i64, i64) -> Vec<AdmissibleType>,
    degree: impl Fn(i64, &TypeVector) -> Result<(i64, i64)>,
) -> OracleReport {
    let mut report = OracleReport {
        d,
        n_max,
        types_checked: 0,
        admissibility_diffs: Vec::new(),
        degree_diffs: Vec::new(),
    };
    if d < 1 || n_max < 1 {
        return report;
    }

    // cube side: largest c with c*c <= bound, by linear scan
    let side = |bound: i64| {
        let mut c = 0;
        while (c + 1) * (c + 1) <= bound {
            c += 1;
        }
        c
    };
    let cube = |c: i64| {
        (0..=c).flat_map(move |a| {
            (0..=c).flat_map(move |b| (0..=c).flat_map(move |e| (0..=c).map(move |f| [a, b, e, f])))
        })
    };

    for n in 1..=n_max {
        for rho in 1..=(2 * d + 1) {
            let bound = (2 * d - 1) * (2 * n - 2) + 4 - rho * rho;
            let mut expected = BTreeMap::new();
            if bound >= 0 {
                for g in cube(side(bound)) {
                    report.types_checked += 1;
                    let g1 = g[0] + g[1] + g[2] + g[3];
                    let g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
                    let parity = (g[0] + 1 - n) % 2 == 0
                        && (g[1] - n) % 2 == 0
                        && (g[2] - n) % 2 == 0
                        && (g[3] - n) % 2 == 0;
                    let rho_ok = rho % 2 == 1 && rho < 2 * d;
                    if parity && rho_ok && g2 <= bound && g1 >= 1 {
                        expected.insert(g, (g1 - 1) / 2);
                    }
                }
            }
            let actual: BTreeMap<[i64; 4], i64> = admissible(d, n, rho)
                .into_iter()
                .map(|t| (t.gamma.entries(), t.max_genus))
                .collect();
            let keys: BTreeSet<_> = expected.keys().chain(actual.keys()).copied().collect();
            for key in keys {
                let (e, a) = (expected.get(&key), actual.get(&key));
                if e != a {
                    let show = |x: Option<&i64>| {
                        x.map_or("not admissible".to_string(), |g| {
                            format!("admissible, g <= {g}")
                        })
                    };
                    report.admissibility_diffs.push(OracleDiff {
                        n,
                        rho: Some(rho),
                        gamma: key,
                        oracle: show(e),
                        implementation: show(a),
                    });
                }
            }
        }
    }

    // degree relation on the largest cube
    let bound = (2 * d - 1) * (2 * n_max - 2) + 3;
    for g in cube(side(bound)) {
        let g1: i64 = g.iter().sum();
        let g2: i64 = g.iter().map(|x| x * x).sum();
        let mut expected = None;
        let mut m = 1;
        while (2 * d - 1) * (2 * m - 2) + 3 <= g2 {
            if (2 * d - 1) * (2 * m - 2) + 3 == g2 && g1 % 2 == 1 {
                expected = Some((m, (g1 - 1) / 2));
            }
            m += 1;
        }
        let actual = TypeVector::new(g).ok().and_then(|t| degree(d, &t).ok());
        if expected != actual {
            report.degree_diffs.push(OracleDiff {
                n: expected.map_or(0, |e| e.0),
                rho: None,
                gamma: g,
                oracle: format!("{expected:?}"),
                implementation: format!("{actual:?}"),
            });
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Parametrization {
    pub mu: MuVector,
    pub eps: EpsilonChoice,
    pub epsilon: [i64; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub d: i64,
    pub gamma: TypeVector,
    pub n: i64,
    pub g: i64,
    pub dim: i64,
    /// some parametrization carries the auxiliary-divisor construction
    pub constructed: bool,
    /// 2d − 1 < 2g
    pub within_gap_range: bool,
    /// sorted; the first one is reported in CSV
    pub parametrizations: Vec<Parametrization>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyTable {
    pub config: SweepConfig,
    pub rows: Vec<FamilyRow>,
}

/// One representative (family, k, signs) per distinct ε vector, positive
/// signs first.
pub fn epsilon_choices(d: i64) -> Vec<EpsilonChoice> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for family in [EpsilonFamily::A, EpsilonFamily::B] {
        for k in 0..4 {
            for mask in 0..16u32 {
                let signs = [0, 1, 2, 3].map(|i| if mask & (1 << i) != 0 { -1 } else { 1 });
                let choice = EpsilonChoice::new(family, k, signs).expect("valid signs");
                if seen.insert((family, choice.epsilon(d))) {
                    out.push(choice);
                }
            }
        }
    }
    out
}

pub(crate) fn mu_vectors(mu_max: i64, first: i64) -> impl Iterator<Item = MuVector> {
    (0..=mu_max).flat_map(move |b| {
        (0..=mu_max).flat_map(move |c| {
            (0..=mu_max).filter_map(move |e| MuVector::new([first, b, c, e]).ok())
        })
    })
}

struct Built {
    key: (i64, TypeVector),
    n: i64,
    g: i64,
    constructed: bool,
    param: Parametrization,
}

/// Builds and verifies every family within the bounds, merged by (d, γ) in
/// lexicographic order. Work is split by (d, μ₀) and merged in that order.
pub fn enumerate_families(cfg: &SweepConfig) -> Result<FamilyTable> {
    let partitions: Vec<(i64, i64)> = (1..=cfg.d_max)
        .flat_map(|d| (0..=cfg.mu_max).map(move |m0| (d, m0)))
        .collect();
    let chunks: Vec<Result<Vec<Built>>> = partitions
        .par_iter()
        .map(|&(d, m0)| {
            let choices = epsilon_choices(d);
            let mut out = Vec::new();
            for mu in mu_vectors(cfg.mu_max, m0) {
                for eps in &choices {
                    let Ok(gamma) = gamma_of(d, &mu, eps) else {
                        continue;
                    };
                    // γ = (1,0,0,0) would need n = 0
                    let g = match degree_genus_of(d, &gamma) {
                        Ok((_, g)) => g,
                        Err(Error::NotRealizable(_)) => continue,
                        Err(e) => return Err(e),
                    };
                    if g > cfg.genus_max {
                        continue;
                    }
                    let spec = build_family(d, &mu, eps)?;
                    out.push(Built {
                        key: (d, gamma),
                        n: spec.n,
                        g: spec.g,
                        constructed: spec.construction.is_some(),
                        param: Parametrization {
                            mu,
                            eps: *eps,
                            epsilon: spec.epsilon,
                        },
                    });
                }
            }
            Ok(out)
        })
        .collect();

    let mut merged: BTreeMap<(i64, TypeVector), FamilyRow> = BTreeMap::new();
    for chunk in chunks {
        for b in chunk? {
            let row = merged.entry(b.key).or_insert_with(|| FamilyRow {
                d: b.key.0,
                gamma: b.key.1,
                n: b.n,
                g: b.g,
                dim: b.key.0 - 1,
                constructed: false,
                within_gap_range: 2 * b.key.0 - 1 < 2 * b.g,
                parametrizations: Vec::new(),
            });
            if row.n != b.n || row.g != b.g {
                return Err(Error::inconsistency(
                    "deduplication by (d, γ)",
                    format!(
                        "γ = {} gives (n, g) = ({}, {}) and ({}, {})",
                        b.key.1, row.n, row.g, b.n, b.g
                    ),
                ));
            }
            row.constructed |= b.constructed;
            row.parametrizations.push(b.param);
        }
    }
    let rows = merged
        .into_values()
        .map(|mut row| {
            row.parametrizations.sort();
            row
        })
        .collect();
    Ok(FamilyTable { config: *cfg, rows })
}

pub const CSV_HEADER: [&str; 14] = [
    "d", "mu0", "mu1", "mu2", "mu3", "family", "k", "gamma0", "gamma1", "gamma2", "gamma3", "n",
    "g", "dim",
];

impl FamilyTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER).map_err(io)?;
        for row in &self.rows {
            let p = &row.parametrizations[0];
            let mut rec = vec![row.d.to_string()];
            rec.extend(p.mu.entries().iter().map(|x| x.to_string()));
            rec.push(p.eps.family.to_string());
            rec.push(p.eps.k.index().to_string());
            rec.extend(row.gamma.entries().iter().map(|x| x.to_string()));
            rec.push(row.n.to_string());
            rec.push(row.g.to_string());
            rec.push(row.dim.to_string());
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Internal(format!("csv output failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))
    }
}

/// Types of degree n reachable by some (μ, ε) choice.
pub fn constructed_types(d: i64, n: i64) -> Result<BTreeSet<TypeVector>> {
    if d < 1 || n < 1 {
        return Ok(BTreeSet::new());
    }
    let target = (2 * d - 1) * (2 * n - 2) + 3;
    let mu_cap = (target.isqrt() + 2 * d) / (2 * d - 1);
    let choices = epsilon_choices(d);
    let mut out = BTreeSet::new();
    for m0 in 0..=mu_cap {
        for mu in mu_vectors(mu_cap, m0) {
            for eps in &choices {
                let Ok(gamma) = gamma_of(d, &mu, eps) else {
                    continue;
                };
                if gamma.gamma2() == target {
                    out.insert(gamma);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub d: i64,
    pub n: i64,
    pub admissible: usize,
    pub constructed: usize,
    /// admissible with ρ = 1 but not produced by any construction
    pub unconstructed: Vec<TypeVector>,
}

pub fn admissible_gap(d: i64, n: i64) -> Result<GapReport> {
    let admissible = enumerate_admissible(d, n, 1);
    let constructed = constructed_types(d, n)?;
    let unconstructed = admissible
        .iter()
        .map(|t| t.gamma)
        .filter(|g| !constructed.contains(g))
        .collect();
    Ok(GapReport {
        d,
        n,
        admissible: admissible.len(),
        constructed: constructed.len(),
        unconstructed,
    })
}
