//! Multiplicative calculus via the bridge plane.
//!
//! Every map `f` on the positive half-line is transported to its bridge
//! map `F(U) = log f(e^U)`. Multiplicative derivatives of order `k` are
//! `exp(F^(k)(U))`, the multiplicative integral is `exp(int F dU)`, and
//! arclength of a curve is the classical arclength of its bridge curve.
//! All differentiation happens on `F`, either through analytic jets or a
//! central finite-difference engine.

use crate::error::{Error, Result};
use crate::jet::{Taylor, LEN, ORDER};
use crate::num::MNum;
use std::sync::Arc;

/// Default accuracy target for the adaptive quadrature.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// How a [`ScalarMapJet`] obtains derivatives of its bridge map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetKind {
    /// Jets come from exact series arithmetic.
    Analytic,
    /// Jets come from central finite differences on bridge values.
    FiniteDifference,
}

type ValueFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;
type BridgeFn = Arc<dyn Fn(f64) -> Result<Taylor> + Send + Sync>;

/// A scalar map on `(0, inf)` bundled with a way to take jets of its
/// bridge map. Both constructors derive one representation from the
/// other, so values and jets can never disagree about which map they
/// describe.
#[derive(Clone)]
pub struct ScalarMapJet {
    value: ValueFn,
    bridge: BridgeFn,
    kind: JetKind,
}

impl std::fmt::Debug for ScalarMapJet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarMapJet").field("kind", &self.kind).finish()
    }
}

impl ScalarMapJet {
    /// Wraps a pointwise map `f: (0, inf) -> (0, inf)`. Jets fall back to
    /// finite differences of the bridge values, so the map must be defined
    /// on a neighborhood of any point that is differentiated.
    pub fn from_eval<F>(f: F) -> ScalarMapJet
    where
        F: Fn(MNum) -> Result<MNum> + Send + Sync + 'static,
    {
        let value: ValueFn = Arc::new(move |u| f(MNum::from_log(u)).map(|m| m.log()));
        let fd_src = value.clone();
        let bridge: BridgeFn = Arc::new(move |u| fd_jet(fd_src.as_ref(), u));
        ScalarMapJet { value, bridge, kind: JetKind::FiniteDifference }
    }

    /// Wraps an analytic jet of the bridge map `U -> F(U)`. Values are the
    /// constant terms of those jets.
    pub fn from_bridge<F>(f: F) -> ScalarMapJet
    where
        F: Fn(f64) -> Result<Taylor> + Send + Sync + 'static,
    {
        let bridge: BridgeFn = Arc::new(f);
        let val_src = bridge.clone();
        let value: ValueFn = Arc::new(move |u| val_src(u).map(|t| t.val()));
        ScalarMapJet { value, bridge, kind: JetKind::Analytic }
    }

    pub fn kind(&self) -> JetKind {
        self.kind
    }

    /// Applies the map.
    pub fn eval(&self, x: MNum) -> Result<MNum> {
        Ok(MNum::from_log((self.value)(x.log())?))
    }

    /// Bridge value `F(u)` at a point given by its log.
    pub fn bridge_value(&self, u: f64) -> Result<f64> {
        (self.value)(u)
    }

    /// Order-5 jet of the bridge map at `u`.
    pub fn jet(&self, u: f64) -> Result<Taylor> {
        (self.bridge)(u)
    }
}

/// `k`-th multiplicative derivative of `f` at `x`, for `k` in `1..=5`.
pub fn star_derivative(f: &ScalarMapJet, x: MNum, k: usize) -> Result<MNum> {
    if k == 0 || k > ORDER {
        return Err(Error::Domain(format!(
            "star_derivative supports orders 1..={ORDER}, got {k}"
        )));
    }
    let jet = f.jet(x.log())?;
    Ok(MNum::from_log(jet.derivative(k)))
}

/// Definite multiplicative integral of `f` from `a` to `b` with the
/// default accuracy target.
pub fn star_integral_definite(f: &ScalarMapJet, a: MNum, b: MNum) -> Result<MNum> {
    star_integral_definite_tol(f, a, b, DEFAULT_QUAD_TOL)
}

/// Definite multiplicative integral with an explicit accuracy target on
/// the log-scale result.
pub fn star_integral_definite_tol(f: &ScalarMapJet, a: MNum, b: MNum, tol: f64) -> Result<MNum> {
    let g = |u: f64| f.bridge_value(u);
    let v = integrate_adaptive(&g, a.log(), b.log(), tol)?;
    Ok(MNum::from_log(v))
}

/// Multiplicative arclength of the curve with the given component maps,
/// from parameter `a` to `b`. Equals `exp` of the classical arclength of
/// the bridge curve; the sign follows the orientation of `[a, b]`.
pub fn star_arclength(components: &[ScalarMapJet; 3], a: MNum, b: MNum, tol: f64) -> Result<MNum> {
    let speed = |u: f64| -> Result<f64> {
        let mut acc = 0.0;
        for f in components {
            let d = f.jet(u)?.derivative(1);
            acc += d * d;
        }
        Ok(acc.sqrt())
    };
    let v = integrate_adaptive(&speed, a.log(), b.log(), tol)?;
    Ok(MNum::from_log(v))
}

// ---------------------------------------------------------------------
// finite differences

/// Builds an order-5 jet of `F` at `u` from central differences. Step
/// sizes balance truncation against roundoff per order; orders 1..3 get
/// one Richardson extrapolation.
pub(crate) fn fd_jet(f: &dyn Fn(f64) -> Result<f64>, u: f64) -> Result<Taylor> {
    let eps = f64::EPSILON;
    let scale = u.abs().max(1.0);
    let f0 = f(u)?;
    let mut c = [0.0; LEN];
    c[0] = f0;

    let d1 = |h: f64| -> Result<f64> { Ok((f(u + h)? - f(u - h)?) / (2.0 * h)) };
    let d2 = |h: f64| -> Result<f64> { Ok((f(u + h)? - 2.0 * f0 + f(u - h)?) / (h * h)) };
    let d3 = |h: f64| -> Result<f64> {
        Ok((f(u + 2.0 * h)? - 2.0 * f(u + h)? + 2.0 * f(u - h)? - f(u - 2.0 * h)?)
            / (2.0 * h * h * h))
    };

    let h1 = eps.powf(1.0 / 3.0) * scale;
    c[1] = richardson(d1(h1)?, d1(h1 / 2.0)?);
    let h2 = eps.powf(1.0 / 6.0) * scale;
    c[2] = richardson(d2(h2)?, d2(h2 / 2.0)?) / 2.0;
    let h3 = eps.powf(1.0 / 7.0) * scale;
    c[3] = richardson(d3(h3)?, d3(h3 / 2.0)?) / 6.0;

    let h4 = eps.powf(1.0 / 8.0) * scale;
    let d4 = (f(u + 2.0 * h4)? - 4.0 * f(u + h4)? + 6.0 * f0 - 4.0 * f(u - h4)?
        + f(u - 2.0 * h4)?)
        / h4.powi(4);
    c[4] = d4 / 24.0;

    let h5 = eps.powf(1.0 / 9.0) * scale;
    let d5 = (-f(u - 3.0 * h5)? + 4.0 * f(u - 2.0 * h5)? - 5.0 * f(u - h5)? + 5.0 * f(u + h5)?
        - 4.0 * f(u + 2.0 * h5)?
        + f(u + 3.0 * h5)?)
        / (2.0 * h5.powi(5));
    c[5] = d5 / 120.0;

    Ok(Taylor { c })
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

// ---------------------------------------------------------------------
// adaptive Simpson quadrature

fn integrate_adaptive(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol.max(f64::MIN_POSITIVE), 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let est = (left + right - whole) / 15.0;
    if est.abs() <= tol {
        return Ok(left + right + est);
    }
    if depth == 0 {
        return Err(Error::Accuracy { requested: tol, achieved: est.abs() });
    }
    let half = 0.5 * tol;
    Ok(adaptive(f, a, m, fa, flm, fm, left, half, depth - 1)?
        + adaptive(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}

const _: () = {
    const fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<ScalarMapJet>();
};
