//! Irreducibility and hyperellipticity certificates.
//!
//! The lattice cannot see supports or set-theoretic intersections, so those
//! facts enter as declarations; only intersection numbers and genus
//! relations are computed. Every fact carries its source.

use serde::{Deserialize, Serialize};

use crate::builder::FamilySpec;
use crate::error::{Error, Result};
use crate::halfperiod::HalfPeriod;
use crate::lattice::{adjunction_genus, intersect, PicClass};
use crate::typesystem::{check_cover, quadratic_bound, CoverReport, CoverSpec};

/// Kinds of curves on S⊥ a certificate can refer to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "kebab-case")]
pub enum CurveKind {
    C0Strict,
    SExceptional(HalfPeriod),
    RExceptional(HalfPeriod),
    ZCurve(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCurve {
    pub kind: CurveKind,
    pub class: PicClass,
}

impl NamedCurve {
    /// Returns `None` for Z curves, whose class depends on the construction.
    pub fn standard(kind: CurveKind) -> Option<NamedCurve> {
        let class = match &kind {
            CurveKind::C0Strict => PicClass::c0_strict(),
            CurveKind::SExceptional(i) => PicClass::s_exceptional(*i),
            CurveKind::RExceptional(i) => PicClass::r_exceptional(*i),
            CurveKind::ZCurve(_) => return None,
        };
        Some(NamedCurve { kind, class })
    }
}

/// The nine curves whose absence from the support is required: C₀⊥, sᵢ⊥, rᵢ⊥.
pub fn forbidden_components() -> Vec<CurveKind> {
    let mut v = vec![CurveKind::C0Strict];
    v.extend(HalfPeriod::ALL.iter().map(|&i| CurveKind::SExceptional(i)));
    v.extend(HalfPeriod::ALL.iter().map(|&i| CurveKind::RExceptional(i)));
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCertificate {
    pub class: PicClass,
    /// curves declared absent from the support
    pub declared_support_excludes: Vec<CurveKind>,
    /// declared: the curve meets C₀⊥ only at p₀⊥ = C₀⊥ ∩ s₀⊥
    pub declared_c0_intersection_only_p0: bool,
    /// declared deg(Γ⊥ · sᵢ⊥)
    pub intersection_degrees_with_s: [i64; 4],
}

impl CurveCertificate {
    /// Certificate whose declared degrees are read off the lattice.
    pub fn with_lattice_degrees(
        class: PicClass,
        declared_support_excludes: Vec<CurveKind>,
        declared_c0_intersection_only_p0: bool,
    ) -> Result<Self> {
        Ok(CurveCertificate {
            intersection_degrees_with_s: s_degrees(&class)?,
            class,
            declared_support_excludes,
            declared_c0_intersection_only_p0,
        })
    }
}

fn s_degrees(class: &PicClass) -> Result<[i64; 4]> {
    let mut out = [0; 4];
    for (o, &i) in out.iter_mut().zip(HalfPeriod::ALL.iter()) {
        *o = intersect(class, &PicClass::s_exceptional(i))?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Computed,
    Declared,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub fact: String,
    pub source: Source,
    pub holds: bool,
    pub detail: String,
}

impl Fact {
    fn computed(fact: &str, holds: bool, detail: String) -> Self {
        Fact {
            fact: fact.into(),
            source: Source::Computed,
            holds,
            detail,
        }
    }

    fn declared(fact: &str, detail: &str) -> Self {
        Fact {
            fact: fact.into(),
            source: Source::Declared,
            holds: true,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityReport {
    pub passed: bool,
    pub computed_degrees_with_s: [i64; 4],
    pub facts: Vec<Fact>,
}

/// Numeric irreducibility criterion: support avoids C₀⊥, sᵢ⊥, rᵢ⊥ (declared),
/// the curve meets C₀⊥ only at p₀⊥ (declared), and Γ⊥·sᵢ⊥ = δᵢ₀ (computed).
pub fn irreducibility_certificate(cert: &CurveCertificate) -> Result<IrreducibilityReport> {
    let computed = s_degrees(&cert.class)?;
    let missing: Vec<CurveKind> = forbidden_components()
        .into_iter()
        .filter(|k| !cert.declared_support_excludes.contains(k))
        .collect();
    let support_ok = missing.is_empty();
    if support_ok && computed != cert.intersection_degrees_with_s {
        return Err(Error::CertificateData(format!(
            "declared degrees with s_i {:?} disagree with the lattice {:?}",
            cert.intersection_degrees_with_s, computed
        )));
    }
    let delta_ok = computed == [1, 0, 0, 0];
    let facts = vec![
        Fact {
            fact: "support excludes C0, s_i, r_i".into(),
            source: Source::Declared,
            holds: support_ok,
            detail: if support_ok {
                "all nine curves declared absent".into()
            } else {
                format!("not declared absent: {missing:?}")
            },
        },
        Fact {
            fact: "meets C0 only at p0".into(),
            source: Source::Declared,
            holds: cert.declared_c0_intersection_only_p0,
            detail: String::new(),
        },
        Fact::computed(
            "deg(Γ·s_i) = δ_i0",
            delta_ok,
            format!("intersection numbers with s0..s3: {computed:?}"),
        ),
    ];
    Ok(IrreducibilityReport {
        passed: facts.iter().all(|f| f.holds),
        computed_degrees_with_s: computed,
        facts,
    })
}

/// Declarations that accompany every built family.
pub fn existence_declarations(lambda: PicClass) -> Result<CurveCertificate> {
    CurveCertificate::with_lattice_degrees(lambda, forbidden_components(), true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticCertificate {
    pub cover: CoverSpec,
    pub cover_report: CoverReport,
    pub irreducibility: IrreducibilityReport,
    pub facts: Vec<Fact>,
    /// non-gating
    pub observations: Vec<Fact>,
}

/// Chains the facts that make the generic member of the family a
/// hyperelliptic d-osculating cover and emits its numerical data.
pub fn hyperelliptic_weierstrass_certificate(
    spec: &FamilySpec,
) -> Result<HyperellipticCertificate> {
    let lambda = spec.lambda_class;
    let irreducibility = irreducibility_certificate(&existence_declarations(lambda)?)?;
    let genus = adjunction_genus(&lambda)?;
    let (d, n, g) = (spec.d, spec.n, spec.g);
    let g1 = spec.gamma.gamma1();
    let g2 = spec.gamma.gamma2();

    let mut facts = vec![
        Fact::declared(
            "τ⊥-invariant",
            "generic member of the constructed subsystem",
        ),
        Fact::declared(
            "smooth at p0",
            "generic member of the constructed subsystem",
        ),
        Fact::declared(
            "non-singular",
            "generic member of the constructed subsystem",
        ),
        Fact::declared(
            "image in the quotient surface is rational",
            "projection of a τ⊥-invariant member is isomorphic to P^1",
        ),
        Fact::declared(
            "degree-2 projection to the image, ramified at p0",
            "τ⊥ fixes p0 = C0 ∩ s0",
        ),
        Fact::computed(
            "irreducible (numeric criterion)",
            irreducibility.passed,
            format!("{:?}", irreducibility.computed_degrees_with_s),
        ),
        Fact::computed(
            "arithmetic genus of the class = g",
            genus == g,
            format!("adjunction gives {genus}, g = {g}"),
        ),
        Fact::computed(
            "γ^(2) = (2d-1)(2n-2)+3",
            g2 == (2 * d - 1) * (2 * n - 2) + 3,
            format!("γ^(2) = {g2}"),
        ),
        Fact::computed("2g + 1 = γ^(1)", 2 * g + 1 == g1, format!("γ^(1) = {g1}")),
    ];

    let cover = CoverSpec::new(d, n, 1, g, spec.gamma)?;
    let cover_report = check_cover(&cover);
    facts.push(Fact::computed(
        "necessary conditions hold, quadratic bound attained",
        cover_report.passed && g2 == quadratic_bound(d, n, 1),
        format!("bound = {}", quadratic_bound(d, n, 1)),
    ));
    if let Some(bad) = facts.iter().find(|f| !f.holds) {
        return Err(Error::inconsistency(
            "hyperelliptic certificate",
            format!("{}: {}", bad.fact, bad.detail),
        ));
    }

    // Signed ε choices can push g below d, where the d-th osculating space
    // is not defined; reported, not enforced.
    let observations = vec![Fact::computed(
        "osculating order 2d-1 < 2g",
        2 * d - 1 < 2 * g,
        format!("2d-1 = {}, 2g = {}", 2 * d - 1, 2 * g),
    )];

    Ok(HyperellipticCertificate {
        cover,
        cover_report,
        irreducibility,
        facts,
        observations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCertificates {
    pub irreducibility: IrreducibilityReport,
    pub hyperelliptic: HyperellipticCertificate,
}

pub fn certify_family(spec: &FamilySpec) -> Result<FamilyCertificates> {
    let hyperelliptic = hyperelliptic_weierstrass_certificate(spec)?;
    Ok(FamilyCertificates {
        irreducibility: hyperelliptic.irreducibility.clone(),
        hyperelliptic,
    })
}
