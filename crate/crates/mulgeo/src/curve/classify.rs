//! Shape classifiers driven by the curvature and torsion profiles.
//!
//! All classifiers scan a midpoint grid on the log-parameter domain,
//! evaluate profile values or derivatives from the Frenet series, and
//! compare against the defining invariant of the shape class. Samples
//! where a quantity is undefined (vanishing curvature or torsion, poles)
//! are excluded and counted in the report.

use crate::curve::{frenet_series, sample_grid, CurveJet};
use crate::error::{Error, Result};
use crate::jet::Taylor;
use crate::num::MNum;
use crate::vec::MVec3;
use serde::Serialize;
use std::collections::BTreeMap;

/// Default residual tolerance for classification.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;
/// Below this |log tau| a sample counts as torsion `0*` and is excluded
/// from torsion-dividing checks.
const TAU_MIN: f64 = 1e-9;
/// Minimum |slope| on logs for a rectifying fit to count as a proper
/// line rather than a constant.
const SLOPE_MIN: f64 = 1e-6;

/// Shape classes reported by the classifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Helix,
    SlantHelix,
    Spherical,
    Rectifying,
    Unclassified,
}

/// Outcome of a classifier scan.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub kind: CurveKind,
    /// Named constants recovered by the fit (multiplicative values).
    pub constants: BTreeMap<String, MNum>,
    /// Worst residual of the defining invariant over the retained samples.
    pub residual: f64,
    pub samples: usize,
    pub excluded_samples: usize,
    pub notes: Vec<String>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite residuals"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

struct ProfileScan {
    us: Vec<f64>,
    kappas: Vec<Taylor>,
    taus: Vec<Taylor>,
    excluded: usize,
    notes: Vec<String>,
}

/// Collects curvature/torsion series at the sample grid, excluding
/// samples where the frame is undefined.
fn scan_profiles(curve: &CurveJet, samples: usize) -> Result<ProfileScan> {
    let (u0, u1) = curve.u_domain();
    let mut out = ProfileScan {
        us: Vec::new(),
        kappas: Vec::new(),
        taus: Vec::new(),
        excluded: 0,
        notes: Vec::new(),
    };
    let mut first_note = true;
    for u in sample_grid(u0, u1, samples) {
        match frenet_series(curve, u) {
            Ok(fs) => {
                out.us.push(u);
                out.kappas.push(fs.kappa);
                out.taus.push(fs.tau);
            }
            Err(Error::FrameUndefined { .. }) => {
                out.excluded += 1;
                if first_note {
                    out.notes.push(format!(
                        "frame undefined (curvature 0*) near log-parameter {u}; sample excluded"
                    ));
                    first_note = false;
                }
            }
            Err(e) => return Err(e),
        }
    }
    if out.us.is_empty() {
        return Err(Error::FrameUndefined { at: u0 });
    }
    Ok(out)
}

/// Tests whether torsion/curvature is constant: the general-helix
/// invariant. On success the constant `c = tau /* kappa` is reported.
pub fn classify_helix(curve: &CurveJet, samples: usize, tol: f64) -> Result<ClassificationReport> {
    let scan = scan_profiles(curve, samples)?;
    let ratios: Vec<f64> = scan
        .kappas
        .iter()
        .zip(&scan.taus)
        .map(|(k, t)| t.val() / k.val())
        .collect();
    let c = median(ratios.clone());
    let residual = ratios.iter().map(|r| (r - c).abs()).fold(0.0, f64::max);
    let mut constants = BTreeMap::new();
    constants.insert("c".to_string(), MNum::from_log(c));
    let kind = if residual <= tol { CurveKind::Helix } else { CurveKind::Unclassified };
    Ok(ClassificationReport {
        kind,
        constants,
        residual,
        samples,
        excluded_samples: scan.excluded,
        notes: scan.notes,
    })
}

/// Evaluates the slant-helix invariant
/// `sigma = (kappa^2 / (kappa^2 + tau^2)^(3/2)) .* (tau /* kappa)*`
/// on logs and tests it for constancy. General helices give `sigma = 0*`
/// and still classify (with a note).
pub fn slant_helix_sigma(
    curve: &CurveJet,
    samples: usize,
    tol: f64,
) -> Result<ClassificationReport> {
    let scan = scan_profiles(curve, samples)?;
    let mut notes = scan.notes;
    let mut excluded = scan.excluded;
    let mut sigmas = Vec::new();
    for (k, t) in scan.kappas.iter().zip(&scan.taus) {
        let k2 = k.mul(k);
        let sum = k2.add(&t.mul(t));
        if sum.val() <= 0.0 {
            excluded += 1;
            continue;
        }
        let denom = sum.powf(1.5)?;
        let ratio_p = match t.div(k) {
            Ok(r) => r.differentiate(),
            Err(_) => {
                excluded += 1;
                continue;
            }
        };
        let sigma = k2.div(&denom)?.mul(&ratio_p);
        sigmas.push(sigma.val());
    }
    if sigmas.is_empty() {
        return Err(Error::FrameUndefined { at: curve.u_domain().0 });
    }
    let s = median(sigmas.clone());
    let residual = sigmas.iter().map(|x| (x - s).abs()).fold(0.0, f64::max);
    let mut constants = BTreeMap::new();
    constants.insert("sigma".to_string(), MNum::from_log(s));
    let kind = if residual <= tol { CurveKind::SlantHelix } else { CurveKind::Unclassified };
    if kind == CurveKind::SlantHelix && s.abs() <= tol {
        notes.push("sigma is 0*: the curve is a general helix".to_string());
    }
    Ok(ClassificationReport {
        kind,
        constants,
        residual,
        samples,
        excluded_samples: excluded,
        notes,
    })
}

/// Tests the spherical-curve invariant
/// `(p* .* q)* +* p /* q = 0*` with `p = e /* kappa`, `q = e /* tau`
/// (all on logs). Samples with torsion `0*` are excluded and reported.
/// With a candidate center and radius, the radius identity
/// `r^2 = p^2 + (p' q)^2` and the pointwise distance to the center are
/// also checked.
pub fn spherical_check(
    curve: &CurveJet,
    samples: usize,
    tol: f64,
    candidate: Option<(MVec3, MNum)>,
) -> Result<ClassificationReport> {
    let (u0, u1) = curve.u_domain();
    let mut notes = Vec::new();
    let mut excluded = 0usize;
    let mut residual: f64 = 0.0;
    let mut radii = Vec::new();
    let mut kept = 0usize;
    let mut tau_note = false;
    for u in sample_grid(u0, u1, samples) {
        let fs = match frenet_series(curve, u) {
            Ok(fs) => fs,
            Err(Error::FrameUndefined { .. }) => {
                excluded += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if fs.tau.val().abs() < TAU_MIN {
            excluded += 1;
            if !tau_note {
                notes.push(format!(
                    "torsion 0* near log-parameter {u}; spherical invariant undefined there"
                ));
                tau_note = true;
            }
            continue;
        }
        let p = fs.kappa.recip()?;
        let q = fs.tau.recip()?;
        let pq = p.differentiate().mul(&q);
        let invariant = pq.differentiate().val() + p.val() / q.val();
        residual = residual.max(invariant.abs());
        let r2 = p.val() * p.val() + pq.val() * pq.val();
        radii.push(r2.sqrt());
        kept += 1;
        if let Some((center, radius)) = &candidate {
            let pos = MVec3::from_logs(crate::curve::vals3(&fs.f));
            let dist = pos.mdistance(center).log();
            residual = residual.max((dist - radius.log()).abs());
            residual = residual.max((radius.log() * radius.log() - r2).abs());
        }
    }
    if kept == 0 {
        return Err(Error::Domain(
            "no samples with defined spherical invariant (torsion is 0* everywhere?)".into(),
        ));
    }
    let mut constants = BTreeMap::new();
    constants.insert("radius".to_string(), MNum::from_log(median(radii)));
    if let Some((_, radius)) = &candidate {
        constants.insert("candidate_radius".to_string(), *radius);
    }
    let kind = if residual <= tol { CurveKind::Spherical } else { CurveKind::Unclassified };
    Ok(ClassificationReport {
        kind,
        constants,
        residual,
        samples,
        excluded_samples: excluded,
        notes,
    })
}

/// Fits `tau /* kappa` against the parameter log: rectifying curves have
/// `tau /* kappa = a .* s +* b` with `a` not `0*`. A flat fit reduces to
/// the helix invariant and is reported as such.
pub fn rectifying_fit(curve: &CurveJet, samples: usize, tol: f64) -> Result<ClassificationReport> {
    let scan = scan_profiles(curve, samples)?;
    let mut notes = scan.notes;
    let n = scan.us.len() as f64;
    let ys: Vec<f64> = scan
        .kappas
        .iter()
        .zip(&scan.taus)
        .map(|(k, t)| t.val() / k.val())
        .collect();
    let sx: f64 = scan.us.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = scan.us.iter().map(|x| x * x).sum();
    let sxy: f64 = scan.us.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-12 {
        return Err(Error::Domain("degenerate sample grid for line fit".into()));
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    let residual = scan
        .us
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0, f64::max);
    let mut constants = BTreeMap::new();
    let kind = if residual <= tol && slope.abs() > SLOPE_MIN {
        constants.insert("a".to_string(), MNum::from_log(slope));
        constants.insert("b".to_string(), MNum::from_log(intercept));
        CurveKind::Rectifying
    } else if residual <= tol {
        constants.insert("c".to_string(), MNum::from_log(intercept));
        notes.push(
            "tau /* kappa is constant: general helix rather than a proper rectifying curve"
                .to_string(),
        );
        CurveKind::Helix
    } else {
        CurveKind::Unclassified
    };
    Ok(ClassificationReport {
        kind,
        constants,
        residual,
        samples,
        excluded_samples: scan.excluded,
        notes,
    })
}
