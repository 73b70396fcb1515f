//! Grammar for `--curve` sources.
//!
//! ```text
//! circle
//! helix:a=1.6,b=0.8
//! sphcurve:m=0.5
//! plane:a=3,b=2,c=1,d=5          (plot only)
//! spec:path/to/curve.json
//! natural(<source>)
//! bertrand-partner(<source>,lambda=<mnum>)
//! mannheim-partner(<source>)
//! ```

use std::collections::BTreeMap;
use std::fs;

use mulgeo::expr::CurveSpec;
use mulgeo::curve::catalog::{circle, helix, sphcurve};
use mulgeo::vec::MVec3;
use mulgeo::{
    bertrand_partner, mannheim_partner, reparametrize_natural, CurveJet, MNum, MPlane,
};

use crate::CliError;

/// A drawable or analyzable object named by a source string.
pub enum SourceObject {
    Curve(CurveJet),
    Plane(MPlane),
}

/// Parses a source string into its object. The label used in legends and
/// reports is the source string itself.
pub fn parse_source(text: &str) -> Result<SourceObject, CliError> {
    let text = text.trim();
    if let Some(inner) = wrapped(text, "natural") {
        let curve = curve_of(inner)?;
        return Ok(SourceObject::Curve(reparametrize_natural(&curve)?));
    }
    if let Some(inner) = wrapped(text, "bertrand-partner") {
        let (src, lambda) = split_partner_args(inner)?;
        let lambda: MNum = lambda
            .ok_or_else(|| CliError::usage("bertrand-partner needs `,lambda=<mnum>`"))?
            .parse()?;
        return Ok(SourceObject::Curve(bertrand_partner(&curve_of(src)?, lambda)?));
    }
    if let Some(inner) = wrapped(text, "mannheim-partner") {
        let (src, lambda) = split_partner_args(inner)?;
        if lambda.is_some() {
            return Err(CliError::usage("mannheim-partner measures its own offset; drop lambda"));
        }
        return Ok(SourceObject::Curve(mannheim_partner(&curve_of(src)?)?));
    }
    if text == "circle" {
        return Ok(SourceObject::Curve(circle()));
    }
    if let Some(params) = text.strip_prefix("helix:") {
        let p = keyed_floats(params, &["a", "b"])?;
        return Ok(SourceObject::Curve(helix(p["a"], p["b"])?));
    }
    if let Some(params) = text.strip_prefix("sphcurve:") {
        let p = keyed_floats(params, &["m"])?;
        return Ok(SourceObject::Curve(sphcurve(p["m"])?));
    }
    if let Some(params) = text.strip_prefix("plane:") {
        let p = keyed_floats(params, &["a", "b", "c", "d"])?;
        let normal = MVec3::from_logs([p["a"], p["b"], p["c"]]);
        return Ok(SourceObject::Plane(MPlane::new(normal, MNum::from_log(p["d"]))));
    }
    if let Some(path) = text.strip_prefix("spec:") {
        let body = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
        let spec = CurveSpec::from_json(&body)?;
        return Ok(SourceObject::Curve(CurveJet::from_spec(&spec)?));
    }
    Err(CliError::usage(format!(
        "unknown curve source `{text}`; expected circle | helix:a=..,b=.. | sphcurve:m=.. | \
         plane:a=..,b=..,c=..,d=.. | spec:<path> | natural(..) | bertrand-partner(..,lambda=..) | \
         mannheim-partner(..)"
    )))
}

/// Parses a source that must be a curve.
pub fn curve_of(text: &str) -> Result<CurveJet, CliError> {
    match parse_source(text)? {
        SourceObject::Curve(c) => Ok(c),
        SourceObject::Plane(_) => {
            Err(CliError::usage(format!("`{text}` is a plane; this command needs a curve")))
        }
    }
}

/// Strips `name( ... )`, returning the interior.
fn wrapped<'a>(text: &'a str, name: &str) -> Option<&'a str> {
    let rest = text.strip_prefix(name)?.trim_start();
    let rest = rest.strip_prefix('(')?;
    let rest = rest.strip_suffix(')')?;
    Some(rest.trim())
}

/// Splits `<source>[,lambda=<mnum>]` at the last top-level comma; commas
/// inside the source's own parameter list pass through.
fn split_partner_args(inner: &str) -> Result<(&str, Option<&str>), CliError> {
    let mut depth = 0usize;
    let mut last_comma = None;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| CliError::usage("unbalanced parentheses in curve source"))?;
            }
            ',' if depth == 0 => last_comma = Some(i),
            _ => {}
        }
    }
    if let Some(i) = last_comma {
        if let Some(lambda) = inner[i + 1..].trim().strip_prefix("lambda=") {
            return Ok((inner[..i].trim(), Some(lambda.trim())));
        }
    }
    Ok((inner, None))
}

/// Parses `k1=v1,k2=v2,...` requiring exactly the given keys.
fn keyed_floats(params: &str, keys: &[&str]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for part in params.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("expected key=value, got `{part}`")))?;
        let k = k.trim();
        if !keys.contains(&k) {
            return Err(CliError::usage(format!("unknown parameter `{k}`; expected {keys:?}")));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("parameter `{k}` is not a number: `{v}`")))?;
        if out.insert(k.to_string(), v).is_some() {
            return Err(CliError::usage(format!("parameter `{k}` given twice")));
        }
    }
    for k in keys {
        if !out.contains_key(*k) {
            return Err(CliError::usage(format!("missing parameter `{k}`")));
        }
    }
    Ok(out)
}
