//! Curves in multiplicative 3-space, their Frenet apparatus, natural
//! reparametrization, classification, and synthesis from curvature
//! profiles.
//!
//! A [`CurveJet`] bundles three [`ScalarMapJet`] component maps over a
//! common log-parameter interval. Every geometric quantity is computed
//! from the component jets of the bridge curve `U -> F(U)`: the frame,
//! curvature, and torsion of the multiplicative curve are the exponentials
//! of the classical frame, curvature, and torsion of the bridge curve.

pub mod catalog;
mod classify;
mod synth;

pub use classify::{
    classify_helix, rectifying_fit, slant_helix_sigma, spherical_check, ClassificationReport,
    CurveKind, DEFAULT_CLASSIFY_TOL,
};
pub use synth::{curve_from_curvature_jets, curve_from_curvatures, FrameStart};

use crate::calc::{star_arclength, ScalarMapJet};
use crate::error::{Error, Result};
use crate::expr::CurveSpec;
use crate::jet::{Taylor, ORDER};
use crate::num::MNum;
use crate::vec::MVec3;
use std::sync::Arc;

/// Default sample count for whole-curve scans (naturality, classifiers,
/// partner verification).
pub const DEFAULT_SAMPLES: usize = 64;
/// Max `|log speed - 0|`... i.e. `| ||F'|| - 1 |` for a curve to count as
/// naturally parametrized.
pub const NATURAL_TOL: f64 = 1e-6;
/// Below this bridge curvature the Frenet frame is treated as undefined.
pub const KAPPA_MIN: f64 = 1e-9;

/// Where a curve came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveProvenance {
    Catalog,
    Dsl,
    Synthesized,
}

/// A parametric curve in multiplicative 3-space.
#[derive(Clone, Debug)]
pub struct CurveJet {
    components: [ScalarMapJet; 3],
    u_domain: (f64, f64),
    provenance: CurveProvenance,
}

impl CurveJet {
    /// Bundles three component maps over the log-parameter interval
    /// `u_domain` (must be increasing).
    pub fn new(
        components: [ScalarMapJet; 3],
        u_domain: (f64, f64),
        provenance: CurveProvenance,
    ) -> Result<CurveJet> {
        if !(u_domain.0.is_finite() && u_domain.1.is_finite() && u_domain.0 < u_domain.1) {
            return Err(Error::Domain(format!(
                "curve domain must be a finite increasing interval, got ({}, {})",
                u_domain.0, u_domain.1
            )));
        }
        Ok(CurveJet { components, u_domain, provenance })
    }

    /// Builds a curve from a parsed [`CurveSpec`]; component jets are
    /// analytic.
    pub fn from_spec(spec: &CurveSpec) -> Result<CurveJet> {
        let bridges = spec.bridge_components()?;
        let components = bridges.map(|b| {
            ScalarMapJet::from_bridge(move |u| b.eval_jet(&Taylor::variable(u)))
        });
        CurveJet::new(
            components,
            (spec.range[0].log(), spec.range[1].log()),
            CurveProvenance::Dsl,
        )
    }

    pub fn components(&self) -> &[ScalarMapJet; 3] {
        &self.components
    }

    /// Parameter interval on logs.
    pub fn u_domain(&self) -> (f64, f64) {
        self.u_domain
    }

    /// Parameter interval in the multiplicative domain.
    pub fn domain(&self) -> (MNum, MNum) {
        (MNum::from_log(self.u_domain.0), MNum::from_log(self.u_domain.1))
    }

    pub fn provenance(&self) -> CurveProvenance {
        self.provenance
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        let (a, b) = self.u_domain;
        let slack = 1e-9 * (1.0 + (b - a).abs());
        if u < a - slack || u > b + slack {
            return Err(Error::Domain(format!(
                "parameter log {u} outside curve domain [{a}, {b}]"
            )));
        }
        Ok(())
    }

    /// Point on the curve at parameter `s`.
    pub fn point(&self, s: MNum) -> Result<MVec3> {
        let u = s.log();
        self.check_domain(u)?;
        let mut logs = [0.0; 3];
        for (slot, comp) in logs.iter_mut().zip(&self.components) {
            *slot = comp.bridge_value(u)?;
        }
        Ok(MVec3::from_logs(logs))
    }

    /// Order-5 jets of the three bridge components at log-parameter `u`.
    pub fn component_jets(&self, u: f64) -> Result<[Taylor; 3]> {
        self.check_domain(u)?;
        Ok([
            self.components[0].jet(u)?,
            self.components[1].jet(u)?,
            self.components[2].jet(u)?,
        ])
    }

    /// Multiplicative arclength between two parameter values.
    pub fn arclength(&self, a: MNum, b: MNum, tol: f64) -> Result<MNum> {
        self.check_domain(a.log())?;
        self.check_domain(b.log())?;
        star_arclength(&self.components, a, b, tol)
    }
}

// ---------------------------------------------------------------------
// series helpers on bridge vectors

pub(crate) fn diff3(a: &[Taylor; 3]) -> [Taylor; 3] {
    [a[0].differentiate(), a[1].differentiate(), a[2].differentiate()]
}

pub(crate) fn dot3(a: &[Taylor; 3], b: &[Taylor; 3]) -> Taylor {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

pub(crate) fn cross3(a: &[Taylor; 3], b: &[Taylor; 3]) -> [Taylor; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

pub(crate) fn vals3(a: &[Taylor; 3]) -> [f64; 3] {
    [a[0].val(), a[1].val(), a[2].val()]
}

/// Midpoint sample grid over `[u0, u1]`, uniform on logs.
pub(crate) fn sample_grid(u0: f64, u1: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    let h = (u1 - u0) / n as f64;
    (0..n).map(|i| u0 + (i as f64 + 0.5) * h).collect()
}

// ---------------------------------------------------------------------
// Frenet apparatus

/// Frame, curvature, and torsion series of the bridge curve at one
/// parameter value. Fields are classical series on logs; validity orders:
/// `t` 4, `kappa`/`n`/`b` 3, `tau` 2.
#[derive(Clone, Debug)]
pub(crate) struct FrenetSeries {
    pub f: [Taylor; 3],
    pub t: [Taylor; 3],
    pub n: [Taylor; 3],
    pub b: [Taylor; 3],
    pub kappa: Taylor,
    pub tau: Taylor,
}

/// Computes the Frenet data of a naturally parametrized curve at
/// log-parameter `u`. Fails with [`Error::NotNatural`] when the bridge
/// speed is not 1 and [`Error::FrameUndefined`] when the curvature
/// vanishes.
pub(crate) fn frenet_series(curve: &CurveJet, u: f64) -> Result<FrenetSeries> {
    let f = curve.component_jets(u)?;
    let t = diff3(&f);
    let speed2 = dot3(&t, &t);
    if speed2.val() <= 0.0 {
        return Err(Error::Singular { at: u });
    }
    let deviation = (speed2.val().sqrt() - 1.0).abs();
    if deviation > NATURAL_TOL {
        return Err(Error::NotNatural { deviation });
    }
    let tp = diff3(&t);
    let kappa2 = dot3(&tp, &tp);
    if kappa2.val().sqrt() < KAPPA_MIN {
        return Err(Error::FrameUndefined { at: u });
    }
    let kappa = kappa2.sqrt()?;
    let n = [
        tp[0].div(&kappa)?,
        tp[1].div(&kappa)?,
        tp[2].div(&kappa)?,
    ];
    let b = cross3(&t, &n);
    let np = diff3(&n);
    let tau = dot3(&np, &b);
    Ok(FrenetSeries { f, t, n, b, kappa, tau })
}

/// Moving frame, curvature, and torsion at one point of a naturally
/// parametrized curve.
#[derive(Clone, Debug)]
pub struct FrenetApparatus {
    pub point: MVec3,
    pub t: MVec3,
    pub n: MVec3,
    pub b: MVec3,
    pub kappa: MNum,
    pub tau: MNum,
}

/// Frenet apparatus at parameter `s`.
pub fn frenet(curve: &CurveJet, s: MNum) -> Result<FrenetApparatus> {
    let fs = frenet_series(curve, s.log())?;
    Ok(FrenetApparatus {
        point: MVec3::from_logs(vals3(&fs.f)),
        t: MVec3::from_logs(vals3(&fs.t)),
        n: MVec3::from_logs(vals3(&fs.n)),
        b: MVec3::from_logs(vals3(&fs.b)),
        kappa: MNum::from_log(fs.kappa.val()),
        tau: MNum::from_log(fs.tau.val()),
    })
}

/// Residuals of the structure equations at one point, measured on logs.
#[derive(Clone, Copy, Debug)]
pub struct FrenetResiduals {
    /// `max_i | (t*)_i - (kappa .* n)_i |` on logs.
    pub tangent_eq: f64,
    /// `max_i | (n*)_i - (-*kappa .* t +* tau .* b)_i |` on logs.
    pub normal_eq: f64,
    /// `max_i | (b*)_i - (-*tau .* n)_i |` on logs.
    pub binormal_eq: f64,
    /// Max deviation of the frame Gram matrix from the identity.
    pub orthonormality: f64,
}

impl FrenetResiduals {
    pub fn max(&self) -> f64 {
        self.tangent_eq
            .max(self.normal_eq)
            .max(self.binormal_eq)
            .max(self.orthonormality)
    }
}

/// Evaluates the structure equations of the frame at parameter `s`.
pub fn frenet_residuals(curve: &CurveJet, s: MNum) -> Result<FrenetResiduals> {
    let fs = frenet_series(curve, s.log())?;
    let k = fs.kappa.val();
    let ta = fs.tau.val();
    let t = vals3(&fs.t);
    let n = vals3(&fs.n);
    let b = vals3(&fs.b);
    let tp = vals3(&diff3(&fs.t));
    let np = vals3(&diff3(&fs.n));
    let bp = vals3(&diff3(&fs.b));
    let mut tangent_eq: f64 = 0.0;
    let mut normal_eq: f64 = 0.0;
    let mut binormal_eq: f64 = 0.0;
    for i in 0..3 {
        tangent_eq = tangent_eq.max((tp[i] - k * n[i]).abs());
        normal_eq = normal_eq.max((np[i] - (-k * t[i] + ta * b[i])).abs());
        binormal_eq = binormal_eq.max((bp[i] + ta * n[i]).abs());
    }
    let frame = [t, n, b];
    let mut orthonormality: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let dot: f64 = (0..3).map(|c| frame[i][c] * frame[j][c]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            orthonormality = orthonormality.max((dot - want).abs());
        }
    }
    Ok(FrenetResiduals { tangent_eq, normal_eq, binormal_eq, orthonormality })
}

// ---------------------------------------------------------------------
// naturality

/// Outcome of a naturality scan.
#[derive(Clone, Copy, Debug)]
pub struct NaturalityReport {
    pub natural: bool,
    /// Worst `| ||F'(u)|| - 1 |` over the scan.
    pub max_deviation: f64,
    /// Log-parameter where the worst deviation occurred.
    pub worst_u: f64,
    pub samples: usize,
    pub tol: f64,
}

/// Scans the curve with the default sample count and tolerance.
pub fn is_natural(curve: &CurveJet) -> Result<NaturalityReport> {
    is_natural_with(curve, DEFAULT_SAMPLES, NATURAL_TOL)
}

/// Scans bridge speed over `samples` midpoints and compares against 1.
pub fn is_natural_with(curve: &CurveJet, samples: usize, tol: f64) -> Result<NaturalityReport> {
    let (u0, u1) = curve.u_domain;
    let mut max_deviation: f64 = 0.0;
    let mut worst_u = u0;
    for u in sample_grid(u0, u1, samples) {
        let f = curve.component_jets(u)?;
        let mut s2 = 0.0;
        for comp in &f {
            let d = comp.derivative(1);
            s2 += d * d;
        }
        let dev = (s2.sqrt() - 1.0).abs();
        if dev > max_deviation {
            max_deviation = dev;
            worst_u = u;
        }
    }
    Ok(NaturalityReport {
        natural: max_deviation <= tol,
        max_deviation,
        worst_u,
        samples,
        tol,
    })
}

// ---------------------------------------------------------------------
// natural reparametrization

const ARC_CELLS: usize = 2048;
const MIN_SPEED: f64 = 1e-9;

/// 5-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 5] = [
    -0.906179845938664,
    -0.5384693101056831,
    0.0,
    0.5384693101056831,
    0.906179845938664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.23692688505618908,
    0.47862867049936647,
    0.5688888888888889,
    0.47862867049936647,
    0.23692688505618908,
];

struct ArcTable {
    comps: [ScalarMapJet; 3],
    u0: f64,
    cell: f64,
    /// Cumulative arclength at cell boundaries; `cum[ARC_CELLS]` is the
    /// total length.
    cum: Vec<f64>,
}

impl ArcTable {
    fn speed(&self, u: f64) -> Result<f64> {
        let mut s2 = 0.0;
        for comp in &self.comps {
            let d = comp.jet(u)?.derivative(1);
            s2 += d * d;
        }
        let s = s2.sqrt();
        if s < MIN_SPEED {
            return Err(Error::Singular { at: u });
        }
        Ok(s)
    }

    fn gl_segment(&self, a: f64, b: f64) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            acc += w * self.speed(mid + half * x)?;
        }
        Ok(acc * half)
    }

    fn build(comps: [ScalarMapJet; 3], u0: f64, u1: f64) -> Result<ArcTable> {
        let cell = (u1 - u0) / ARC_CELLS as f64;
        let mut table = ArcTable { comps, u0, cell, cum: Vec::with_capacity(ARC_CELLS + 1) };
        table.cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..ARC_CELLS {
            let a = u0 + i as f64 * cell;
            acc += table.gl_segment(a, a + cell)?;
            table.cum.push(acc);
        }
        Ok(table)
    }

    fn total(&self) -> f64 {
        *self.cum.last().expect("cumulative table")
    }

    /// Solves `arc(u) = a` for `u` by bracketed Newton iteration.
    fn invert(&self, a: f64) -> Result<f64> {
        let total = self.total();
        let a = a.clamp(0.0, total);
        // locate the cell: cum[i] <= a <= cum[i+1]
        let idx = match self.cum.binary_search_by(|v| v.partial_cmp(&a).unwrap()) {
            Ok(i) => i.min(ARC_CELLS - 1),
            Err(i) => i.saturating_sub(1).min(ARC_CELLS - 1),
        };
        let mut lo = self.u0 + idx as f64 * self.cell;
        let mut hi = lo + self.cell;
        let base = self.cum[idx];
        let span = self.cum[idx + 1] - base;
        let mut u = if span > 0.0 { lo + (a - base) / span * self.cell } else { lo };
        let tol = 1e-14 * (1.0 + total);
        let cell_start = self.u0 + idx as f64 * self.cell;
        for _ in 0..60 {
            let arc_u = base + self.gl_segment(cell_start, u)?;
            let err = arc_u - a;
            if err.abs() <= tol {
                return Ok(u);
            }
            if err > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let step = err / self.speed(u)?;
            let next = u - step;
            u = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        }
        Err(Error::Accuracy { requested: tol, achieved: f64::NAN })
    }

    /// Order-5 series of the inverse arclength map `V -> U(V)` as a
    /// deviation series (zero constant term) about the point with
    /// `U(V) = uu`.
    fn inverse_series(&self, uu: f64) -> Result<Taylor> {
        let t = diff3(&[
            self.comps[0].jet(uu)?,
            self.comps[1].jet(uu)?,
            self.comps[2].jet(uu)?,
        ]);
        let speed2 = dot3(&t, &t);
        if speed2.val() <= MIN_SPEED * MIN_SPEED {
            return Err(Error::Singular { at: uu });
        }
        let w_outer = speed2.sqrt()?.recip()?;
        let mut u_dev = Taylor::constant(0.0);
        u_dev.c[1] = w_outer.val();
        for _ in 0..ORDER {
            let w = Taylor::compose(&w_outer, &u_dev);
            let mut next = Taylor::constant(0.0);
            for k in 0..ORDER {
                next.c[k + 1] = w.c[k] / (k + 1) as f64;
            }
            u_dev = next;
        }
        Ok(u_dev)
    }
}

/// Reparametrizes by multiplicative arclength. The result has unit bridge
/// speed; its domain is `[u0, u0 + L]` on logs, where `L` is the total
/// bridge arclength. Provenance is preserved.
pub fn reparametrize_natural(curve: &CurveJet) -> Result<CurveJet> {
    let (u0, u1) = curve.u_domain;
    let table = Arc::new(ArcTable::build(curve.components.clone(), u0, u1)?);
    let total = table.total();
    let mut components = Vec::with_capacity(3);
    for i in 0..3 {
        let table = table.clone();
        components.push(ScalarMapJet::from_bridge(move |v| {
            let a = v - table.u0;
            if a < -1e-7 * (1.0 + total) || a > total * (1.0 + 1e-7) + 1e-7 {
                return Err(Error::Domain(format!(
                    "parameter log {v} outside reparametrized domain"
                )));
            }
            let uu = table.invert(a)?;
            let u_dev = table.inverse_series(uu)?;
            let fj = table.comps[i].jet(uu)?;
            Ok(Taylor::compose(&fj, &u_dev))
        }));
    }
    let components: [ScalarMapJet; 3] = components.try_into().expect("three components");
    CurveJet::new(components, (u0, u0 + total), curve.provenance)
}
