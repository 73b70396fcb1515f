//! Classical expression trees on the log side of the bridge, with plain
//! `f64` evaluation and exact Taylor-jet evaluation.

use crate::error::{Error, Result};
use crate::jet::{Taylor, ORDER};

/// Classical map of one variable `u` (the log of the curve parameter).
#[derive(Clone, Debug, PartialEq)]
pub enum BridgeExpr {
    Const(f64),
    Var,
    Neg(Box<BridgeExpr>),
    Add(Box<BridgeExpr>, Box<BridgeExpr>),
    Sub(Box<BridgeExpr>, Box<BridgeExpr>),
    Mul(Box<BridgeExpr>, Box<BridgeExpr>),
    Div(Box<BridgeExpr>, Box<BridgeExpr>),
    Pow(Box<BridgeExpr>, f64),
    Sin(Box<BridgeExpr>),
    Cos(Box<BridgeExpr>),
    Tan(Box<BridgeExpr>),
    Cot(Box<BridgeExpr>),
    Sqrt(Box<BridgeExpr>),
    Abs(Box<BridgeExpr>),
}

fn is_small_int(k: f64) -> bool {
    k.fract() == 0.0 && k.abs() <= 64.0
}

impl BridgeExpr {
    /// Pointwise evaluation at `u`.
    pub fn eval_f64(&self, u: f64) -> Result<f64> {
        let v = match self {
            BridgeExpr::Const(v) => *v,
            BridgeExpr::Var => u,
            BridgeExpr::Neg(a) => -a.eval_f64(u)?,
            BridgeExpr::Add(a, b) => a.eval_f64(u)? + b.eval_f64(u)?,
            BridgeExpr::Sub(a, b) => a.eval_f64(u)? - b.eval_f64(u)?,
            BridgeExpr::Mul(a, b) => a.eval_f64(u)? * b.eval_f64(u)?,
            BridgeExpr::Div(a, b) => {
                let d = b.eval_f64(u)?;
                if d == 0.0 {
                    return Err(Error::Singular { at: u });
                }
                a.eval_f64(u)? / d
            }
            BridgeExpr::Pow(a, k) => a.eval_f64(u)?.powf(*k),
            BridgeExpr::Sin(a) => a.eval_f64(u)?.sin(),
            BridgeExpr::Cos(a) => a.eval_f64(u)?.cos(),
            BridgeExpr::Tan(a) => a.eval_f64(u)?.tan(),
            BridgeExpr::Cot(a) => {
                let t = a.eval_f64(u)?.tan();
                if t == 0.0 {
                    return Err(Error::Singular { at: u });
                }
                1.0 / t
            }
            BridgeExpr::Sqrt(a) => {
                let v = a.eval_f64(u)?;
                if v < 0.0 {
                    return Err(Error::Domain(format!("sqrt of negative value {v}")));
                }
                v.sqrt()
            }
            BridgeExpr::Abs(a) => a.eval_f64(u)?.abs(),
        };
        if v.is_nan() {
            return Err(Error::Singular { at: u });
        }
        Ok(v)
    }

    /// Jet evaluation: plug a variable series in for `u`.
    pub fn eval_jet(&self, var: &Taylor) -> Result<Taylor> {
        Ok(match self {
            BridgeExpr::Const(v) => Taylor::constant(*v),
            BridgeExpr::Var => *var,
            BridgeExpr::Neg(a) => a.eval_jet(var)?.neg(),
            BridgeExpr::Add(a, b) => a.eval_jet(var)?.add(&b.eval_jet(var)?),
            BridgeExpr::Sub(a, b) => a.eval_jet(var)?.sub(&b.eval_jet(var)?),
            BridgeExpr::Mul(a, b) => a.eval_jet(var)?.mul(&b.eval_jet(var)?),
            BridgeExpr::Div(a, b) => a.eval_jet(var)?.div(&b.eval_jet(var)?)?,
            BridgeExpr::Pow(a, k) => {
                let base = a.eval_jet(var)?;
                if is_small_int(*k) {
                    base.powi(*k as i32)?
                } else {
                    base.powf(*k)?
                }
            }
            BridgeExpr::Sin(a) => a.eval_jet(var)?.sin(),
            BridgeExpr::Cos(a) => a.eval_jet(var)?.cos(),
            BridgeExpr::Tan(a) => a.eval_jet(var)?.tan()?,
            BridgeExpr::Cot(a) => a.eval_jet(var)?.cot()?,
            BridgeExpr::Sqrt(a) => a.eval_jet(var)?.sqrt()?,
            BridgeExpr::Abs(a) => a.eval_jet(var)?.abs()?,
        })
    }
}

/// Builds an evaluator of the `order`-th classical derivative of the map,
/// backed by jet arithmetic. Supports orders `0..=5`.
pub fn bridge_diff(
    expr: BridgeExpr,
    order: usize,
) -> Result<impl Fn(f64) -> Result<f64> + Send + Sync> {
    if order > ORDER {
        return Err(Error::Domain(format!(
            "bridge_diff supports orders 0..={ORDER}, got {order}"
        )));
    }
    Ok(move |u: f64| {
        expr.eval_jet(&Taylor::variable(u))
            .map(|t| t.derivative(order))
    })
}
