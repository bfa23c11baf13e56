//! Exact divisor calculus for hyperelliptic d-osculating covers of an
//! elliptic curve X.
//!
//! A cover of degree n, type γ and ramification ρ at its marked point lives
//! on the ruled surface S over X, blown up at the eight fixed points of the
//! lifted involution, in the class e*(n·C₀ + (2d−1)·S₀) − ρ·s₀⊥ − Σγᵢ·rᵢ⊥.
//! This crate models that Picard lattice, checks the necessary conditions on
//! (d, n, ρ, g, γ), builds the (d−1)-dimensional families and verifies
//! every linear equivalence their construction relies on.

pub mod builder;
pub mod certificates;
pub mod enumerate;
pub mod error;
pub mod halfperiod;
pub mod lattice;
pub mod suite;
pub mod typesystem;

pub use builder::{
    build_family, closed_form_degree, degree_genus_of, gamma_of, lambda_class, membership_report,
    z_class, EpsConvention, EpsilonChoice, EpsilonFamily, FamilySpec, MembershipReport, MuVector,
};
pub use certificates::{
    certify_family, irreducibility_certificate, CurveCertificate, CurveKind, NamedCurve,
};
pub use enumerate::{enumerate_admissible, enumerate_families, oracle_crosscheck, SweepConfig};
pub use error::{Error, ErrorKind, Result};
pub use halfperiod::{torsion_of_fibers, HalfPeriod, TorsionLabel};
pub use lattice::{adjunction_genus, canonical_class, intersect, lin_equiv, PicClass};
pub use suite::{run_suite, SuiteCheck, SuiteReport};
pub use typesystem::{check_cover, osculating_gap_order, CoverReport, CoverSpec, TypeVector};
