//! Built-in naturally parametrized curves.

use crate::calc::ScalarMapJet;
use crate::curve::synth::{curve_from_curvature_jets, frame_end_state, FrameStart};
use crate::curve::{CurveJet, CurveProvenance};
use crate::error::{Error, Result};
use crate::jet::Taylor;
use std::f64::consts::PI;

/// Multiplicative unit circle: center `(1, 1, 1)`, radius `e`, natural
/// parameter over one full turn. Curvature is `e` and torsion `0*`.
pub fn circle() -> CurveJet {
    let components = [
        ScalarMapJet::from_bridge(|u| Ok(Taylor::variable(u).cos())),
        ScalarMapJet::from_bridge(|u| Ok(Taylor::variable(u).sin())),
        ScalarMapJet::from_bridge(|_| Ok(Taylor::constant(0.0))),
    ];
    CurveJet::new(components, (0.0, 2.0 * PI), CurveProvenance::Catalog)
        .expect("static circle domain")
}

/// Multiplicative circular helix with radius parameter `a > 0` and pitch
/// parameter `b`, in natural parametrization:
///
/// ```text
/// F(U) = (-a sin(U/m), a cos(U/m), (b/m) U),   m = sqrt(a^2 + b^2)
/// ```
///
/// Curvature is `e^(a / (a^2 + b^2))` and torsion `e^(b / (a^2 + b^2))`.
/// When `a^2 + b^2 = 1` this is exactly `(-a sin U, a cos U, b U)`; for
/// other parameters the angular argument is scaled to keep the bridge
/// speed at 1. One full turn of domain.
pub fn helix(a: f64, b: f64) -> Result<CurveJet> {
    if !(a.is_finite() && b.is_finite() && a > 0.0) {
        return Err(Error::Inadmissible(format!(
            "helix needs finite parameters with a > 0, got a={a}, b={b}"
        )));
    }
    let m = a.hypot(b);
    let components = [
        ScalarMapJet::from_bridge(move |u| {
            Ok(Taylor::variable(u).scale(1.0 / m).sin().scale(-a))
        }),
        ScalarMapJet::from_bridge(move |u| {
            Ok(Taylor::variable(u).scale(1.0 / m).cos().scale(a))
        }),
        ScalarMapJet::from_bridge(move |u| Ok(Taylor::variable(u).scale(b / m))),
    ];
    CurveJet::new(components, (0.0, 2.0 * PI * m), CurveProvenance::Catalog)
}

/// A naturally parametrized spherical curve on the multiplicative sphere
/// of radius `e` centered at `(1, 1, 1)`, synthesized from the curvature
/// profile `log kappa(U) = sec(m U)` and constant `log tau = m` over
/// `U` in `[-1, 1]`. Requires `0 < m < pi/2` so the profile stays finite.
pub fn sphcurve(m: f64) -> Result<CurveJet> {
    if !(m.is_finite() && m > 0.0 && m < PI / 2.0) {
        return Err(Error::Inadmissible(format!(
            "sphcurve needs 0 < m < pi/2, got {m}"
        )));
    }
    let kappa = move |u: f64| Taylor::variable(u).scale(m).cos().recip();
    let tau = move |_: f64| Ok(Taylor::constant(m));
    // center the sphere on the bridge origin: with rho = cos(mU) and
    // sigma = 1/m, the center P + rho N + rho' sigma B sits at 0 when
    // P(0) = -N(0); the designed frame below is therefore the state at
    // U = 0, the middle of the domain
    let mid = FrameStart {
        p: [0.0, -1.0, 0.0],
        t: [1.0, 0.0, 0.0],
        n: [0.0, 1.0, 0.0],
        b: [0.0, 0.0, 1.0],
    };
    // the synthesis anchors its start frame at the left end, so recover
    // the state at U = -1 first: the reversed curve V -> x(-V) obeys the
    // same (even) profiles with t and b flipped
    let neg = |v: [f64; 3]| [-v[0], -v[1], -v[2]];
    let reversed = FrameStart { p: mid.p, t: neg(mid.t), n: mid.n, b: neg(mid.b) };
    let end = frame_end_state(kappa, tau, (0.0, 1.0), &reversed)?;
    let left = FrameStart { p: end.p, t: neg(end.t), n: end.n, b: neg(end.b) };
    let curve = curve_from_curvature_jets(kappa, tau, (-1.0, 1.0), left)?;
    Ok(CurveJet::new(
        curve.components().clone(),
        curve.u_domain(),
        CurveProvenance::Catalog,
    )?)
}
