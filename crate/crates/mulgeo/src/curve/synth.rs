//! Curve synthesis from curvature and torsion profiles.
//!
//! Solves the classical structure equations of the bridge curve
//!
//! ```text
//! P' = T,  T' = K N,  N' = -K T + W B,  B' = -W N
//! ```
//!
//! where `K(U)` and `W(U)` are the log-profiles of the requested
//! multiplicative curvature and torsion. Fixed-step RK4 with frame
//! re-orthonormalization provides knot states; component jets come from
//! the order-5 Taylor recurrence of the same equations seeded at the
//! evaluation point.

use crate::calc::ScalarMapJet;
use crate::curve::{CurveJet, CurveProvenance};
use crate::error::{Error, Result};
use crate::jet::{Taylor, ORDER};
use crate::num::MNum;
use std::sync::Arc;

/// Target RK4 step on the log parameter.
const TARGET_STEP: f64 = 2e-3;
/// Frame Gram drift allowed before a step size is rejected.
const DRIFT_TOL: f64 = 1e-6;
/// Step halvings to attempt before giving up.
const MAX_HALVINGS: u32 = 8;

/// Initial position and frame for synthesis, as bridge (log) vectors.
/// The frame must be orthonormal and right-handed.
#[derive(Clone, Copy, Debug)]
pub struct FrameStart {
    pub p: [f64; 3],
    pub t: [f64; 3],
    pub n: [f64; 3],
    pub b: [f64; 3],
}

impl Default for FrameStart {
    fn default() -> FrameStart {
        FrameStart {
            p: [0.0, 0.0, 0.0],
            t: [1.0, 0.0, 0.0],
            n: [0.0, 1.0, 0.0],
            b: [0.0, 0.0, 1.0],
        }
    }
}

impl FrameStart {
    fn validate(&self) -> Result<()> {
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let frame = [self.t, self.n, self.b];
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot(frame[i], frame[j]) - want).abs() > 1e-9 {
                    return Err(Error::Inadmissible(
                        "start frame is not orthonormal".into(),
                    ));
                }
            }
        }
        let cx = self.t[1] * self.n[2] - self.t[2] * self.n[1];
        let cy = self.t[2] * self.n[0] - self.t[0] * self.n[2];
        let cz = self.t[0] * self.n[1] - self.t[1] * self.n[0];
        if (cx - self.b[0]).abs() > 1e-9
            || (cy - self.b[1]).abs() > 1e-9
            || (cz - self.b[2]).abs() > 1e-9
        {
            return Err(Error::Inadmissible(
                "start frame is not right-handed (b must equal t x n)".into(),
            ));
        }
        Ok(())
    }
}

/// Position and frame packed as `[p, t, n, b]`.
type State = [[f64; 3]; 4];

fn axpy(y: &mut [f64; 3], a: f64, x: &[f64; 3]) {
    for i in 0..3 {
        y[i] += a * x[i];
    }
}

fn frenet_rhs(k: f64, w: f64, s: &State) -> State {
    let [_, t, n, b] = s;
    let mut out = [[0.0; 3]; 4];
    out[0] = *t;
    for i in 0..3 {
        out[1][i] = k * n[i];
        out[2][i] = -k * t[i] + w * b[i];
        out[3][i] = -w * n[i];
    }
    out
}

fn add_scaled(s: &State, a: f64, d: &State) -> State {
    let mut out = *s;
    for i in 0..4 {
        axpy(&mut out[i], a, &d[i]);
    }
    out
}

fn gram_drift(s: &State) -> f64 {
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let frame = [&s[1], &s[2], &s[3]];
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot(frame[i], frame[j]) - want).abs());
        }
    }
    worst
}

/// Modified Gram-Schmidt on the frame part; `b` is rebuilt from the cross
/// product to keep the frame right-handed.
fn reorthonormalize(s: &mut State) {
    let norm = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let nt = norm(&s[1]);
    for x in s[1].iter_mut() {
        *x /= nt;
    }
    let proj = s[1][0] * s[2][0] + s[1][1] * s[2][1] + s[1][2] * s[2][2];
    for i in 0..3 {
        s[2][i] -= proj * s[1][i];
    }
    let nn = norm(&s[2]);
    for x in s[2].iter_mut() {
        *x /= nn;
    }
    s[3] = [
        s[1][1] * s[2][2] - s[1][2] * s[2][1],
        s[1][2] * s[2][0] - s[1][0] * s[2][2],
        s[1][0] * s[2][1] - s[1][1] * s[2][0],
    ];
}

type ProfileFn = Arc<dyn Fn(f64) -> Result<Taylor> + Send + Sync>;

struct OdeSolution {
    u0: f64,
    step: f64,
    knots: Vec<State>,
    kappa: ProfileFn,
    tau: ProfileFn,
}

impl OdeSolution {
    /// Taylor series of all state components about `u`, from the
    /// structure-equation recurrence seeded with `state`.
    fn state_series(&self, u: f64, state: &State) -> Result<[[Taylor; 3]; 4]> {
        let kj = (self.kappa)(u)?;
        let wj = (self.tau)(u)?;
        let mut s = [[Taylor::constant(0.0); 3]; 4];
        for part in 0..4 {
            for i in 0..3 {
                s[part][i].c[0] = state[part][i];
            }
        }
        // raise the order one coefficient at a time; a Cauchy-product
        // coefficient of order k only needs factors through order k
        for k in 0..ORDER {
            let conv = |a: &Taylor, b: &Taylor| -> f64 {
                (0..=k).map(|j| a.c[j] * b.c[k - j]).sum()
            };
            let div = (k + 1) as f64;
            for i in 0..3 {
                let dp = s[1][i].c[k];
                let dt = conv(&kj, &s[2][i]);
                let dn = -conv(&kj, &s[1][i]) + conv(&wj, &s[3][i]);
                let db = -conv(&wj, &s[2][i]);
                s[0][i].c[k + 1] = dp / div;
                s[1][i].c[k + 1] = dt / div;
                s[2][i].c[k + 1] = dn / div;
                s[3][i].c[k + 1] = db / div;
            }
        }
        Ok(s)
    }

    /// State at arbitrary `u`: series step from the nearest knot.
    fn state_at(&self, u: f64) -> Result<State> {
        let last = self.knots.len() - 1;
        let idx = (((u - self.u0) / self.step).round() as isize).clamp(0, last as isize) as usize;
        let knot_u = self.u0 + idx as f64 * self.step;
        let series = self.state_series(knot_u, &self.knots[idx])?;
        let h = u - knot_u;
        let mut out = [[0.0; 3]; 4];
        for part in 0..4 {
            for i in 0..3 {
                out[part][i] = series[part][i].eval(h);
            }
        }
        Ok(out)
    }
}

fn solve_frame(
    kappa: ProfileFn,
    tau: ProfileFn,
    u_domain: (f64, f64),
    start: &FrameStart,
) -> Result<OdeSolution> {
    start.validate()?;
    let (u0, u1) = u_domain;
    if !(u0.is_finite() && u1.is_finite() && u0 < u1) {
        return Err(Error::Domain(format!(
            "synthesis domain must be increasing, got ({u0}, {u1})"
        )));
    }
    let len = u1 - u0;
    let mut steps = ((len / TARGET_STEP).ceil() as usize).max(512);

    let kval = |u: f64| -> Result<f64> {
        let v = (kappa)(u)?.val();
        if v <= 0.0 {
            return Err(Error::FrameUndefined { at: u });
        }
        Ok(v)
    };
    let wval = |u: f64| -> Result<f64> { Ok((tau)(u)?.val()) };

    let state0: State = [start.p, start.t, start.n, start.b];
    let mut solution = None;
    'attempt: for _ in 0..=MAX_HALVINGS {
        let h = len / steps as f64;
        let mut knots = Vec::with_capacity(steps + 1);
        let mut y = state0;
        knots.push(y);
        for i in 0..steps {
            let ua = u0 + i as f64 * h;
            let um = ua + 0.5 * h;
            let ub = ua + h;
            let (ka, wa) = (kval(ua)?, wval(ua)?);
            let (km, wm) = (kval(um)?, wval(um)?);
            let (kb, wb) = (kval(ub)?, wval(ub)?);
            let k1 = frenet_rhs(ka, wa, &y);
            let k2 = frenet_rhs(km, wm, &add_scaled(&y, 0.5 * h, &k1));
            let k3 = frenet_rhs(km, wm, &add_scaled(&y, 0.5 * h, &k2));
            let k4 = frenet_rhs(kb, wb, &add_scaled(&y, h, &k3));
            let mut next = y;
            for part in 0..4 {
                for c in 0..3 {
                    next[part][c] += h / 6.0
                        * (k1[part][c] + 2.0 * k2[part][c] + 2.0 * k3[part][c] + k4[part][c]);
                }
            }
            if gram_drift(&next) > DRIFT_TOL {
                steps *= 2;
                continue 'attempt;
            }
            reorthonormalize(&mut next);
            y = next;
            knots.push(y);
        }
        solution = Some(OdeSolution {
            u0,
            step: h,
            knots,
            kappa: kappa.clone(),
            tau: tau.clone(),
        });
        break;
    }
    solution.ok_or(Error::Accuracy {
        requested: DRIFT_TOL,
        achieved: f64::NAN,
    })
}

/// Synthesizes a naturally parametrized curve from analytic jets of the
/// curvature and torsion log-profiles. The curvature profile must stay
/// positive on the domain. The start frame is the state at the left end
/// of the domain.
pub fn curve_from_curvature_jets<K, W>(
    kappa: K,
    tau: W,
    u_domain: (f64, f64),
    start: FrameStart,
) -> Result<CurveJet>
where
    K: Fn(f64) -> Result<Taylor> + Send + Sync + 'static,
    W: Fn(f64) -> Result<Taylor> + Send + Sync + 'static,
{
    let solution = Arc::new(solve_frame(Arc::new(kappa), Arc::new(tau), u_domain, &start)?);

    let mut components = Vec::with_capacity(3);
    for i in 0..3 {
        let sol = solution.clone();
        components.push(ScalarMapJet::from_bridge(move |u| {
            let state = sol.state_at(u)?;
            let series = sol.state_series(u, &state)?;
            Ok(series[0][i])
        }));
    }
    let components: [ScalarMapJet; 3] = components.try_into().expect("three components");
    CurveJet::new(components, u_domain, CurveProvenance::Synthesized)
}

/// Integrates the structure equations across `u_domain` and returns the
/// position and frame at the right end.
pub(crate) fn frame_end_state<K, W>(
    kappa: K,
    tau: W,
    u_domain: (f64, f64),
    start: &FrameStart,
) -> Result<FrameStart>
where
    K: Fn(f64) -> Result<Taylor> + Send + Sync + 'static,
    W: Fn(f64) -> Result<Taylor> + Send + Sync + 'static,
{
    let solution = solve_frame(Arc::new(kappa), Arc::new(tau), u_domain, start)?;
    let [p, t, n, b] = *solution.knots.last().expect("at least the start knot");
    Ok(FrameStart { p, t, n, b })
}

/// Synthesizes a naturally parametrized curve from pointwise curvature
/// and torsion profiles given in the multiplicative domain. Profile jets
/// fall back to finite differences, so both maps must be defined slightly
/// beyond the requested domain. Starts from the standard frame at the
/// origin `(1, 1, 1)`.
pub fn curve_from_curvatures<K, W>(kappa: K, tau: W, s_lo: MNum, s_hi: MNum) -> Result<CurveJet>
where
    K: Fn(MNum) -> Result<MNum> + Send + Sync + 'static,
    W: Fn(MNum) -> Result<MNum> + Send + Sync + 'static,
{
    let kmap = ScalarMapJet::from_eval(kappa);
    let wmap = ScalarMapJet::from_eval(tau);
    curve_from_curvature_jets(
        move |u| kmap.jet(u),
        move |u| wmap.jet(u),
        (s_lo.log(), s_hi.log()),
        FrameStart::default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{frenet, frenet_residuals, is_natural};

    #[test]
    fn constant_profiles_reproduce_helix_invariants() {
        // K = 0.5, W = 0.25 is the helix with a = 8/5, b = 4/5
        let c = curve_from_curvature_jets(
            |_| Ok(Taylor::constant(0.5)),
            |_| Ok(Taylor::constant(0.25)),
            (0.0, 6.0),
            FrameStart::default(),
        )
        .unwrap();
        assert!(is_natural(&c).unwrap().natural);
        for u in [0.3, 2.0, 5.7] {
            let fr = frenet(&c, MNum::from_log(u)).unwrap();
            assert!((fr.kappa.log() - 0.5).abs() < 1e-9, "u={u}");
            assert!((fr.tau.log() - 0.25).abs() < 1e-9, "u={u}");
            let res = frenet_residuals(&c, MNum::from_log(u)).unwrap();
            assert!(res.max() < 1e-8, "u={u} {res:?}");
        }
    }

    #[test]
    fn varying_profiles_are_matched() {
        let c = curve_from_curvature_jets(
            |u| Ok(Taylor::variable(u).scale(0.3).cos().scale(0.5).add(&Taylor::constant(1.0))),
            |u| Ok(Taylor::variable(u).scale(0.2)),
            (-1.0, 1.5),
            FrameStart::default(),
        )
        .unwrap();
        for u in [-0.8, 0.0, 1.2] {
            let fr = frenet(&c, MNum::from_log(u)).unwrap();
            let want_k = 1.0 + 0.5 * (0.3 * u).cos();
            let want_w = 0.2 * u;
            assert!((fr.kappa.log() - want_k).abs() < 1e-8, "u={u}");
            assert!((fr.tau.log() - want_w).abs() < 1e-8, "u={u}");
        }
    }

    #[test]
    fn pointwise_profile_api_uses_finite_differences() {
        let c = curve_from_curvatures(
            |s| Ok(MNum::from_log(1.0 + 0.25 * s.log())),
            |_| Ok(MNum::from_log(0.5)),
            MNum::from_log(0.0),
            MNum::from_log(2.0),
        )
        .unwrap();
        let fr = frenet(&c, MNum::from_log(1.0)).unwrap();
        assert!((fr.kappa.log() - 1.25).abs() < 1e-4);
        assert!((fr.tau.log() - 0.5).abs() < 1e-4);
    }

    #[test]
    fn bad_starts_are_rejected() {
        let mut start = FrameStart::default();
        start.n = [0.0, 0.9, 0.0];
        assert!(curve_from_curvature_jets(
            |_| Ok(Taylor::constant(1.0)),
            |_| Ok(Taylor::constant(0.0)),
            (0.0, 1.0),
            start,
        )
        .is_err());
        // negative curvature profile
        assert!(curve_from_curvature_jets(
            |_| Ok(Taylor::constant(-1.0)),
            |_| Ok(Taylor::constant(0.0)),
            (0.0, 1.0),
            FrameStart::default(),
        )
        .is_err());
    }
}
