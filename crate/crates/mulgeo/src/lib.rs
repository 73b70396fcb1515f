//! Multiplicative (non-Newtonian) calculus and differential geometry.
//!
//! The scalar domain is the positive half-line `(0, inf)`. Every value is
//! represented canonically by its natural logarithm, so the multiplicative
//! arithmetic laws become exact floating-point operations on logs:
//!
//! * `madd(a, b) = exp(log a + log b)` (`a +* b`)
//! * `msub(a, b) = exp(log a - log b)` (`a -* b`)
//! * `mmul(a, b) = exp(log a * log b)` (`a .* b`)
//! * `mdiv(a, b) = exp(log a / log b)` (`a /* b`)
//!
//! The additive identity is `1` (written `0*`) and the multiplicative
//! identity is `e` (written `1*`).
//!
//! On top of the scalar layer the crate provides log-represented vectors and
//! planes ([`MVec`], [`MPlane`]), multiplicative derivatives and integrals
//! ([`calc`]), a small expression language ([`expr`]), Frenet apparatus and
//! curve classification for curves naturally parametrized in the
//! multiplicative sense ([`curve`]), and construction plus verification of
//! Bertrand and Mannheim partner curves ([`partner`]).

pub mod calc;
pub mod curve;
pub mod error;
pub mod expr;
pub mod jet;
pub mod num;
pub mod partner;
pub mod vec;

pub use calc::{star_arclength, star_derivative, star_integral_definite, ScalarMapJet};
pub use curve::{
    classify_helix, curve_from_curvatures, frenet, frenet_residuals, is_natural,
    rectifying_fit, reparametrize_natural, slant_helix_sigma, spherical_check,
    ClassificationReport, CurveJet, CurveKind, FrenetApparatus, FrenetResiduals,
    NaturalityReport,
};
pub use error::{Error, Result};
pub use expr::{parse_mexpr, render_mexpr, CurveSpec, MExpr};
pub use num::MNum;
pub use partner::{
    bertrand_partner, bertrand_verify, mannheim_lambda, mannheim_partner, mannheim_verify,
    CheckStatus, IdentityCheck, PartnerKind, PartnerReport,
};
pub use vec::{MPlane, MVec, MVec2, MVec3};
