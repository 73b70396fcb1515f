//! Expression language for multiplicative scalar maps of one parameter.
//!
//! Grammar (whitespace-insensitive, `s` is the curve parameter):
//!
//! ```text
//! expr    := term { ("+*" | "-*") term }
//! term    := factor { (".*" | "/*") factor }
//! factor  := base [ "^*" real ]
//! base    := "(" expr ")" | func "(" expr ")" | literal | "s"
//! func    := msin | mcos | mtan | mcot | msqrt | mneg | mabs
//! literal := "e^" real | positive-decimal
//! ```
//!
//! Expressions evaluate two independent ways: directly through [`MNum`]
//! arithmetic, or through the classical [`BridgeExpr`] obtained by
//! [`MExpr::to_bridge`], which also provides exact jets.

mod bridge;
mod parse;

pub use bridge::{bridge_diff, BridgeExpr};
pub use parse::{parse_classical, parse_mexpr};

use crate::calc::ScalarMapJet;
use crate::error::{Error, Result};
use crate::jet::Taylor;
use crate::num::MNum;
use serde::{Deserialize, Serialize};

/// Unary functions of the multiplicative grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryFn {
    Msin,
    Mcos,
    Mtan,
    Mcot,
    Msqrt,
    Mneg,
    Mabs,
}

impl UnaryFn {
    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Msin => "msin",
            UnaryFn::Mcos => "mcos",
            UnaryFn::Mtan => "mtan",
            UnaryFn::Mcot => "mcot",
            UnaryFn::Msqrt => "msqrt",
            UnaryFn::Mneg => "mneg",
            UnaryFn::Mabs => "mabs",
        }
    }
}

/// Binary operators of the multiplicative grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Madd,
    Msub,
    Mmul,
    Mdiv,
}

impl BinOp {
    pub fn token(self) -> &'static str {
        match self {
            BinOp::Madd => "+*",
            BinOp::Msub => "-*",
            BinOp::Mmul => ".*",
            BinOp::Mdiv => "/*",
        }
    }

    fn level(self) -> u8 {
        match self {
            BinOp::Madd | BinOp::Msub => 1,
            BinOp::Mmul | BinOp::Mdiv => 2,
        }
    }
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum MExpr {
    Literal(MNum),
    /// The parameter `s`.
    Param,
    Unary(UnaryFn, Box<MExpr>),
    Binary(BinOp, Box<MExpr>, Box<MExpr>),
    /// `base ^* k`, multiplicative power with a real exponent.
    Pow(Box<MExpr>, f64),
}

impl MExpr {
    /// Evaluates through [`MNum`] arithmetic.
    pub fn eval(&self, s: MNum) -> Result<MNum> {
        match self {
            MExpr::Literal(m) => Ok(*m),
            MExpr::Param => Ok(s),
            MExpr::Unary(f, inner) => {
                let v = inner.eval(s)?;
                match f {
                    UnaryFn::Msin => Ok(v.msin()),
                    UnaryFn::Mcos => Ok(v.mcos()),
                    UnaryFn::Mtan => v.mtan(),
                    UnaryFn::Mcot => v.mcot(),
                    UnaryFn::Msqrt => v.msqrt(),
                    UnaryFn::Mneg => Ok(v.mneg()),
                    UnaryFn::Mabs => Ok(v.mabs()),
                }
            }
            MExpr::Binary(op, l, r) => {
                let a = l.eval(s)?;
                let b = r.eval(s)?;
                match op {
                    BinOp::Madd => Ok(a.madd(b)),
                    BinOp::Msub => Ok(a.msub(b)),
                    BinOp::Mmul => Ok(a.mmul(b)),
                    BinOp::Mdiv => a.mdiv(b),
                }
            }
            MExpr::Pow(b, k) => b.eval(s)?.mpow(*k),
        }
    }

    /// The classical map on logs defining the same scalar map.
    pub fn to_bridge(&self) -> BridgeExpr {
        match self {
            MExpr::Literal(m) => BridgeExpr::Const(m.log()),
            MExpr::Param => BridgeExpr::Var,
            MExpr::Unary(f, inner) => {
                let i = Box::new(inner.to_bridge());
                match f {
                    UnaryFn::Msin => BridgeExpr::Sin(i),
                    UnaryFn::Mcos => BridgeExpr::Cos(i),
                    UnaryFn::Mtan => BridgeExpr::Tan(i),
                    UnaryFn::Mcot => BridgeExpr::Cot(i),
                    UnaryFn::Msqrt => BridgeExpr::Sqrt(i),
                    UnaryFn::Mneg => BridgeExpr::Neg(i),
                    UnaryFn::Mabs => BridgeExpr::Abs(i),
                }
            }
            MExpr::Binary(op, l, r) => {
                let a = Box::new(l.to_bridge());
                let b = Box::new(r.to_bridge());
                match op {
                    BinOp::Madd => BridgeExpr::Add(a, b),
                    BinOp::Msub => BridgeExpr::Sub(a, b),
                    BinOp::Mmul => BridgeExpr::Mul(a, b),
                    BinOp::Mdiv => BridgeExpr::Div(a, b),
                }
            }
            MExpr::Pow(b, k) => BridgeExpr::Pow(Box::new(b.to_bridge()), *k),
        }
    }

    /// Wraps the expression as a scalar map with analytic jets.
    pub fn to_map(&self) -> ScalarMapJet {
        let b = self.to_bridge();
        ScalarMapJet::from_bridge(move |u| b.eval_jet(&Taylor::variable(u)))
    }
}

/// Renders with minimal parentheses; [`parse_mexpr`] of the result
/// reproduces the tree exactly (literals print as `e^<log>` with
/// shortest round-trip float formatting).
pub fn render_mexpr(e: &MExpr) -> String {
    let mut out = String::new();
    render_prec(e, 0, &mut out);
    out
}

fn atom_level(e: &MExpr) -> u8 {
    match e {
        MExpr::Literal(_) | MExpr::Param | MExpr::Unary(..) => 4,
        MExpr::Pow(..) => 3,
        MExpr::Binary(op, ..) => op.level(),
    }
}

fn render_prec(e: &MExpr, min: u8, out: &mut String) {
    match e {
        MExpr::Literal(m) => {
            out.push_str("e^");
            out.push_str(&format!("{}", m.log()));
        }
        MExpr::Param => out.push('s'),
        MExpr::Unary(f, inner) => {
            out.push_str(f.name());
            out.push('(');
            render_prec(inner, 0, out);
            out.push(')');
        }
        MExpr::Pow(b, k) => {
            if atom_level(b) < 4 {
                out.push('(');
                render_prec(b, 0, out);
                out.push(')');
            } else {
                render_prec(b, 0, out);
            }
            out.push_str(" ^* ");
            out.push_str(&format!("{k}"));
        }
        MExpr::Binary(op, l, r) => {
            let lev = op.level();
            let parens = lev < min;
            if parens {
                out.push('(');
            }
            render_prec(l, lev, out);
            out.push(' ');
            out.push_str(op.token());
            out.push(' ');
            render_prec(r, lev + 1, out);
            if parens {
                out.push(')');
            }
        }
    }
}

/// Which grammar a curve-spec component string uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentForm {
    /// Multiplicative grammar, parameter `s`.
    Mult,
    /// Classical log-form grammar, parameter `u = log s`.
    Log,
}

/// JSON description of a parametric curve in 3-space.
///
/// `components` are three expressions; per-component `form` selects the
/// grammar (default all `mult`). `range` is the parameter interval in the
/// multiplicative domain, default `[1, e^2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub components: [String; 3],
    #[serde(default = "CurveSpec::default_forms")]
    pub form: [ComponentForm; 3],
    #[serde(default = "CurveSpec::default_range")]
    pub range: [MNum; 2],
}

impl CurveSpec {
    fn default_forms() -> [ComponentForm; 3] {
        [ComponentForm::Mult; 3]
    }

    fn default_range() -> [MNum; 2] {
        [MNum::ZERO_STAR, MNum::from_log(2.0)]
    }

    pub fn from_json(text: &str) -> Result<CurveSpec> {
        let spec: CurveSpec = serde_json::from_str(text)
            .map_err(|e| Error::Domain(format!("curve spec JSON: {e}")))?;
        if spec.range[0].log() >= spec.range[1].log() {
            return Err(Error::Domain(format!(
                "curve spec range must be increasing, got [{}, {}]",
                spec.range[0], spec.range[1]
            )));
        }
        Ok(spec)
    }

    /// Parses the three component strings into classical bridge maps.
    pub fn bridge_components(&self) -> Result<[BridgeExpr; 3]> {
        let mut out = Vec::with_capacity(3);
        for (text, form) in self.components.iter().zip(self.form) {
            let b = match form {
                ComponentForm::Mult => parse_mexpr(text)?.to_bridge(),
                ComponentForm::Log => parse_classical(text)?,
            };
            out.push(b);
        }
        Ok(out.try_into().expect("three components"))
    }
}
