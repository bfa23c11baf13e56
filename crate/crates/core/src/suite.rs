//! The full consistency suite behind `verify-paper`.

use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::builder::{build_family, gamma_of, EpsilonChoice, EpsilonFamily, MuVector};
use crate::certificates::certify_family;
use crate::enumerate::{epsilon_choices, mu_vectors, oracle_crosscheck};
use crate::error::{Error, Result};
use crate::halfperiod::HalfPeriod;
use crate::lattice::{adjunction_genus, canonical_class, intersect, lin_equiv, PicClass};

/// Largest sweep bound accepted by [`run_suite`].
pub const SUITE_LIMIT: i64 = 16;

/// Failure messages kept per check; the count is always exact.
const KEPT_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub d_max: i64,
    pub mu_max: i64,
    pub passed: bool,
    pub checks: Vec<SuiteCheck>,
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failure_count: usize,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn finish(self, name: &str) -> SuiteCheck {
        SuiteCheck {
            name: name.to_string(),
            passed: self.failure_count == 0 && self.cases > 0,
            cases: self.cases,
            failure_count: self.failure_count,
            failures: self.failures,
        }
    }
}

/// Builds, verifies and certifies every family with d ≤ `d_max` and μ entries
/// ≤ `mu_max`, cross-checks admissibility against a first-principles oracle,
/// and checks the lattice axioms and three reference instances.
pub fn run_suite(d_max: i64, mu_max: i64) -> Result<SuiteReport> {
    if !(1..=SUITE_LIMIT).contains(&d_max) {
        return Err(Error::OutOfRange {
            what: "d-max",
            value: d_max,
        });
    }
    if !(0..=SUITE_LIMIT).contains(&mu_max) {
        return Err(Error::OutOfRange {
            what: "mu-max",
            value: mu_max,
        });
    }
    let checks = vec![
        family_check(d_max, mu_max),
        oracle_check(d_max),
        lattice_check(),
        reference_check(),
    ];
    Ok(SuiteReport {
        d_max,
        mu_max,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn family_check(d_max: i64, mu_max: i64) -> SuiteCheck {
    let tally = Mutex::new(Tally::default());
    let partitions: Vec<(i64, i64)> = (1..=d_max)
        .flat_map(|d| (0..=mu_max).map(move |m| (d, m)))
        .collect();
    partitions.par_iter().for_each(|&(d, m0)| {
        let choices = epsilon_choices(d);
        let mut local = Tally::default();
        for mu in mu_vectors(mu_max, m0) {
            for eps in &choices {
                let Ok(gamma) = gamma_of(d, &mu, eps) else {
                    continue;
                };
                let outcome = build_family(d, &mu, eps)
                    .and_then(|spec| certify_family(&spec).map(|c| (spec, c)));
                match outcome {
                    // a type with γ^(2) < 3 has no cover of positive degree
                    Err(Error::NotRealizable(_)) if gamma.gamma2() < 3 => {}
                    Ok((spec, certs)) => {
                        let ok = certs.irreducibility.passed
                            && certs.hyperelliptic.cover_report.passed
                            && adjunction_genus(&spec.lambda_class).ok() == Some(spec.g);
                        local.record(ok, || {
                            format!("d={d} μ={:?} {eps:?}: certificate failed", mu.entries())
                        });
                    }
                    Err(e) => {
                        local.record(false, || format!("d={d} μ={:?} {eps:?}: {e}", mu.entries()))
                    }
                }
            }
        }
        let mut t = tally.lock().expect("tally lock");
        t.cases += local.cases;
        t.failure_count += local.failure_count;
        for f in local.failures {
            if t.failures.len() < KEPT_FAILURES {
                t.failures.push(f);
            }
        }
    });
    let mut t = tally.into_inner().expect("tally lock");
    t.failures.sort();
    t.finish("families build, verify and certify")
}

fn oracle_check(d_max: i64) -> SuiteCheck {
    let mut t = Tally::default();
    for d in 1..=d_max {
        let r = oracle_crosscheck(d, 10);
        t.record(r.is_empty() && r.types_checked > 0, || {
            format!(
                "d={d}: {} admissibility and {} degree differences",
                r.admissibility_diffs.len(),
                r.degree_diffs.len()
            )
        });
    }
    t.finish("admissibility matches the oracle for n <= 10")
}

fn basis() -> Vec<(String, PicClass)> {
    let mut out = vec![("C0".to_string(), PicClass::section())];
    for w in HalfPeriod::ALL {
        out.push((format!("F{}", w.index()), PicClass::fiber(w)));
        out.push((format!("s{}", w.index()), PicClass::s_exceptional(w)));
        out.push((format!("r{}", w.index()), PicClass::r_exceptional(w)));
    }
    out
}

fn lattice_check() -> SuiteCheck {
    let mut t = Tally::default();
    let b = basis();
    let k = canonical_class();
    for (na, a) in &b {
        for (nb, bb) in &b {
            let ab = intersect(a, bb);
            t.record(
                ab.is_ok() && ab.as_ref().ok() == intersect(bb, a).as_ref().ok(),
                || format!("{na}·{nb} not symmetric"),
            );
        }
        let even = intersect(a, &a.checked_add(&k).unwrap_or(PicClass::ZERO)).map(|x| x % 2 == 0);
        t.record(even == Ok(true), || format!("{na}·({na}+K) is odd"));
        let genus = adjunction_genus(a);
        // the section is a copy of X; fibers and exceptional curves are rational
        let expected = i64::from(na == "C0");
        t.record(genus == Ok(expected), || {
            format!("genus of {na} is {genus:?}")
        });
    }
    t.record(intersect(&k, &k) == Ok(-8), || "K² != -8".to_string());
    // moving a fiber by a 2-torsion point is detected, moving it twice is not
    let f0 = PicClass::fiber(HalfPeriod::ORIGIN);
    for w in HalfPeriod::ALL.into_iter().skip(1) {
        let f = PicClass::fiber(w);
        t.record(!lin_equiv(&f0, &f), || format!("F0 ~ {w}"));
        let twice = f
            .checked_scale(2)
            .and_then(|x| x.checked_sub(&f0.checked_scale(2)?));
        t.record(
            twice.map(|x| lin_equiv(&x, &PicClass::ZERO)) == Ok(true),
            || format!("2F0 !~ 2{w}"),
        );
    }
    t.finish("lattice pairing, parity and torsion")
}

fn reference_check() -> SuiteCheck {
    let mut t = Tally::default();
    let eps = EpsilonChoice::plain(EpsilonFamily::A, 0).expect("valid choice");
    for (d, mu, n, g, gamma) in [
        (1, [2, 1, 1, 1], 3, 2, [2, 1, 1, 1]),
        (2, [0, 1, 1, 1], 13, 7, [0, 5, 5, 5]),
        (3, [0, 1, 1, 1], 25, 13, [0, 9, 9, 9]),
    ] {
        let got = MuVector::new(mu)
            .and_then(|mu| build_family(d, &mu, &eps))
            .map(|s| (s.n, s.g, s.gamma.entries()));
        t.record(got.as_ref().ok() == Some(&(n, g, gamma)), || {
            format!("d={d} μ={mu:?}: expected {:?}, got {got:?}", (n, g, gamma))
        });
    }
    t.finish("reference instances")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = run_suite(2, 2).unwrap();
        assert!(r.passed, "{r:#?}");
        assert_eq!(r.checks.len(), 4);
        assert!(r.checks[0].cases > 50);
    }

    #[test]
    fn bounds_are_validated() {
        assert!(run_suite(0, 1).is_err());
        assert!(run_suite(1, -1).is_err());
        assert!(run_suite(SUITE_LIMIT + 1, 1).is_err());
    }

    #[test]
    fn tally_keeps_exact_count() {
        let mut t = Tally::default();
        for i in 0..50 {
            t.record(false, || i.to_string());
        }
        let c = t.finish("x");
        assert_eq!(
            (c.failure_count, c.failures.len(), c.passed),
            (50, KEPT_FAILURES, false)
        );
    }
}
