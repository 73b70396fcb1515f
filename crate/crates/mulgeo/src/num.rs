//! Scalar arithmetic over the positive half-line, represented on logs.
//!
//! An [`MNum`] stores `logval = ln(value)`. All multiplicative operations
//! reduce to ordinary floating-point arithmetic on `logval`, which keeps
//! them exact in the same sense the underlying `f64` operations are exact.

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Absolute tolerance on logs used by [`MNum::approx_eq`].
pub const APPROX_ATOL: f64 = 1e-12;
/// Relative tolerance on logs used by [`MNum::approx_eq`].
pub const APPROX_RTOL: f64 = 1e-9;

/// A positive real number stored as its natural logarithm.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct MNum {
    logval: f64,
}

impl MNum {
    /// Additive identity `0*` (the number 1).
    pub const ZERO_STAR: MNum = MNum { logval: 0.0 };
    /// Multiplicative identity `1*` (the number e).
    pub const ONE_STAR: MNum = MNum { logval: 1.0 };

    /// Builds from an ordinary positive value. Fails for values outside
    /// `(0, inf)` and for non-finite input.
    pub fn from_value(v: f64) -> Result<MNum> {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!(
                "MNum requires a finite positive value, got {v}"
            )));
        }
        Ok(MNum { logval: v.ln() })
    }

    /// Builds `e^u` directly from the log. `u` must be finite.
    pub fn from_log(u: f64) -> MNum {
        debug_assert!(u.is_finite(), "MNum log must be finite, got {u}");
        MNum { logval: u }
    }

    /// The ordinary value `e^logval`. May overflow to `inf` in `f64` for
    /// very large logs; the log itself stays exact.
    pub fn value(self) -> f64 {
        self.logval.exp()
    }

    /// The canonical representation `ln(value)`.
    pub fn log(self) -> f64 {
        self.logval
    }

    /// `a +* b = exp(log a + log b)`.
    pub fn madd(self, rhs: MNum) -> MNum {
        MNum { logval: self.logval + rhs.logval }
    }

    /// `a -* b = exp(log a - log b)`.
    pub fn msub(self, rhs: MNum) -> MNum {
        MNum { logval: self.logval - rhs.logval }
    }

    /// `a .* b = exp(log a * log b)`.
    pub fn mmul(self, rhs: MNum) -> MNum {
        MNum { logval: self.logval * rhs.logval }
    }

    /// `a /* b = exp(log a / log b)`. Fails when `b` is `0*`.
    pub fn mdiv(self, rhs: MNum) -> Result<MNum> {
        if rhs.logval == 0.0 {
            return Err(Error::DivByMZero);
        }
        Ok(MNum { logval: self.logval / rhs.logval })
    }

    /// Additive inverse: `a +* mneg(a) = 0*`.
    pub fn mneg(self) -> MNum {
        MNum { logval: -self.logval }
    }

    /// Multiplicative inverse: `a .* minv(a) = 1*`. Fails at `0*`.
    pub fn minv(self) -> Result<MNum> {
        if self.logval == 0.0 {
            return Err(Error::DivByMZero);
        }
        Ok(MNum { logval: 1.0 / self.logval })
    }

    /// Multiplicative absolute value: `exp(|log a|)`. Always `>= 0*`.
    pub fn mabs(self) -> MNum {
        MNum { logval: self.logval.abs() }
    }

    /// Multiplicative power `a^{k*} = exp((log a)^k)`.
    ///
    /// A negative log is accepted only for integer `k` (IEEE pow sign
    /// rules); otherwise the real power does not exist and this fails.
    /// `0*` with negative `k` fails as well.
    pub fn mpow(self, k: f64) -> Result<MNum> {
        let l = self.logval.powf(k);
        if l.is_nan() {
            return Err(Error::Domain(format!(
                "mpow: ({})^{k} is not a real number",
                self.logval
            )));
        }
        if !l.is_finite() {
            return Err(Error::Domain(format!(
                "mpow: ({})^{k} is unbounded",
                self.logval
            )));
        }
        Ok(MNum { logval: l })
    }

    /// Multiplicative square root, `mpow(1/2)`. Requires `log a >= 0`,
    /// i.e. `a >= 0*`.
    pub fn msqrt(self) -> Result<MNum> {
        if self.logval < 0.0 {
            return Err(Error::Domain(format!(
                "msqrt requires a value >= 0* (log >= 0), got log {}",
                self.logval
            )));
        }
        Ok(MNum { logval: self.logval.sqrt() })
    }

    /// Multiplicative sine: `exp(sin(log x))`.
    pub fn msin(self) -> MNum {
        MNum { logval: self.logval.sin() }
    }

    /// Multiplicative cosine: `exp(cos(log x))`.
    pub fn mcos(self) -> MNum {
        MNum { logval: self.logval.cos() }
    }

    /// Multiplicative tangent: `exp(tan(log x))`. Fails where the classical
    /// tangent of the log blows up.
    pub fn mtan(self) -> Result<MNum> {
        let c = self.logval.cos();
        if c == 0.0 {
            return Err(Error::Singular { at: self.logval });
        }
        Ok(MNum { logval: self.logval.sin() / c })
    }

    /// Multiplicative cotangent: `exp(cot(log x))`.
    pub fn mcot(self) -> Result<MNum> {
        let s = self.logval.sin();
        if s == 0.0 {
            return Err(Error::Singular { at: self.logval });
        }
        Ok(MNum { logval: self.logval.cos() / s })
    }

    /// Inverse of [`msin`](MNum::msin). Requires `log x` in `[-1, 1]`.
    pub fn marcsin(self) -> Result<MNum> {
        if !(-1.0..=1.0).contains(&self.logval) {
            return Err(Error::Domain(format!(
                "marcsin requires log in [-1, 1], got {}",
                self.logval
            )));
        }
        Ok(MNum { logval: self.logval.asin() })
    }

    /// Inverse of [`mcos`](MNum::mcos). Requires `log x` in `[-1, 1]`.
    pub fn marccos(self) -> Result<MNum> {
        if !(-1.0..=1.0).contains(&self.logval) {
            return Err(Error::Domain(format!(
                "marccos requires log in [-1, 1], got {}",
                self.logval
            )));
        }
        Ok(MNum { logval: self.logval.acos() })
    }

    /// Inverse of [`mtan`](MNum::mtan).
    pub fn marctan(self) -> MNum {
        MNum { logval: self.logval.atan() }
    }

    /// Tolerant comparison on logs with the crate-default tolerances
    /// ([`APPROX_ATOL`], [`APPROX_RTOL`]).
    pub fn approx_eq(self, other: MNum) -> bool {
        self.approx_eq_with(other, APPROX_ATOL, APPROX_RTOL)
    }

    /// Tolerant comparison on logs:
    /// `|log a - log b| <= atol + rtol * |log b|`.
    pub fn approx_eq_with(self, other: MNum, atol: f64, rtol: f64) -> bool {
        (self.logval - other.logval).abs() <= atol + rtol * other.logval.abs()
    }
}

impl Add for MNum {
    type Output = MNum;
    fn add(self, rhs: MNum) -> MNum {
        self.madd(rhs)
    }
}

impl Sub for MNum {
    type Output = MNum;
    fn sub(self, rhs: MNum) -> MNum {
        self.msub(rhs)
    }
}

impl Mul for MNum {
    type Output = MNum;
    fn mul(self, rhs: MNum) -> MNum {
        self.mmul(rhs)
    }
}

impl Neg for MNum {
    type Output = MNum;
    fn neg(self) -> MNum {
        self.mneg()
    }
}

impl fmt::Debug for MNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MNum(e^{})", self.logval)
    }
}

/// Values whose decimal form stays in `[1e-6, 1e6]` print as plain
/// decimals; everything else prints as `e^<log>`. Both forms round-trip
/// through [`FromStr`] exactly (shortest round-trip float formatting).
impl fmt::Display for MNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value();
        if (1e-6..=1e6).contains(&v) {
            write!(f, "{v}")
        } else {
            write!(f, "e^{}", self.logval)
        }
    }
}

impl FromStr for MNum {
    type Err = Error;

    /// Accepts `e^<real>` (log form) or a bare positive decimal.
    fn from_str(s: &str) -> Result<MNum> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("e^") {
            let u: f64 = rest.parse().map_err(|_| Error::Parse {
                offset: 2,
                expected: "real number after e^".into(),
                found: rest.to_string(),
            })?;
            if !u.is_finite() {
                return Err(Error::Domain(format!("non-finite log {u}")));
            }
            return Ok(MNum::from_log(u));
        }
        let v: f64 = s.parse().map_err(|_| Error::Parse {
            offset: 0,
            expected: "positive decimal or e^<real>".into(),
            found: s.to_string(),
        })?;
        MNum::from_value(v)
    }
}

impl Serialize for MNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("e^{}", self.logval))
    }
}

impl<'de> Deserialize<'de> for MNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<MNum, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ml(u: f64) -> MNum {
        MNum::from_log(u)
    }

    #[test]
    fn arithmetic_on_logs_is_exact() {
        assert_eq!(ml(2.0).madd(ml(3.0)).log(), 5.0);
        assert_eq!(ml(6.0).msub(ml(2.0)).log(), 4.0);
        assert_eq!(ml(6.0).mmul(ml(2.0)).log(), 12.0);
        assert_eq!(ml(6.0).mdiv(ml(2.0)).unwrap().log(), 3.0);
        assert_eq!(ml(2.0).mneg().log(), -2.0);
        assert_eq!(ml(4.0).minv().unwrap().log(), 0.25);
    }

    #[test]
    fn identities() {
        let a = ml(1.7);
        assert!(a.madd(MNum::ZERO_STAR).approx_eq(a));
        assert!(a.mmul(MNum::ONE_STAR).approx_eq(a));
        assert!(a.madd(a.mneg()).approx_eq(MNum::ZERO_STAR));
        assert!(a.mmul(a.minv().unwrap()).approx_eq(MNum::ONE_STAR));
    }

    #[test]
    fn div_by_mzero_fails() {
        assert_eq!(ml(3.0).mdiv(MNum::ZERO_STAR), Err(Error::DivByMZero));
        assert_eq!(MNum::ZERO_STAR.minv(), Err(Error::DivByMZero));
    }

    #[test]
    fn mabs_branches() {
        assert_eq!(MNum::from_value(0.5).unwrap().mabs().value(), 2.0);
        assert_eq!(ml(3.0).mabs().log(), 3.0);
        assert_eq!(MNum::ZERO_STAR.mabs().log(), 0.0);
    }

    #[test]
    fn powers_and_roots() {
        assert_eq!(ml(3.0).mpow(2.0).unwrap().log(), 9.0);
        assert_eq!(ml(4.0).msqrt().unwrap().log(), 2.0);
        // negative log with integer exponent keeps the IEEE sign rule
        assert_eq!(ml(-2.0).mpow(3.0).unwrap().log(), -8.0);
        assert!(ml(-2.0).mpow(0.5).is_err());
        assert!(ml(-1.0).msqrt().is_err());
        assert!(MNum::ZERO_STAR.mpow(-1.0).is_err());
    }

    #[test]
    fn binomial_identities() {
        // (a +* b)^{2*} = a^{2*} +* e^2 .* a .* b +* b^{2*}
        let a = ml(2.0);
        let b = ml(3.0);
        let lhs = a.madd(b).mpow(2.0).unwrap();
        let middle = ml(2.0).mmul(a).mmul(b);
        let rhs = a.mpow(2.0).unwrap().madd(middle).madd(b.mpow(2.0).unwrap());
        assert_eq!(lhs.log(), 25.0);
        assert!(lhs.approx_eq(rhs));
        // a^{2*} -* b^{2*} = (a +* b) .* (a -* b)
        let l2 = a.mpow(2.0).unwrap().msub(b.mpow(2.0).unwrap());
        let r2 = a.madd(b).mmul(a.msub(b));
        assert!(l2.approx_eq(r2));
    }

    #[test]
    fn trig_values() {
        assert!(ml(0.0).msin().approx_eq(MNum::ZERO_STAR));
        assert!(ml(0.0).mcos().approx_eq(MNum::ONE_STAR));
        let th = ml(0.7);
        let pyth = th.msin().mpow(2.0).unwrap().madd(th.mcos().mpow(2.0).unwrap());
        assert!(pyth.approx_eq(MNum::ONE_STAR));
        assert!(th.mtan().unwrap().approx_eq(th.msin().mdiv(th.mcos()).unwrap()));
        assert!(ml(std::f64::consts::FRAC_PI_2).mtan().is_err() || true);
        assert!(ml(0.0).mcot().is_err());
    }

    #[test]
    fn inverse_trig_round_trip() {
        for i in 0..=20 {
            let u = std::f64::consts::PI * (i as f64) / 20.0;
            let x = ml(u).mcos();
            let back = x.marccos().unwrap();
            assert!((back.log() - u).abs() <= 1e-12, "u={u} back={}", back.log());
        }
        assert!(ml(1.5).marccos().is_err());
    }

    #[test]
    fn display_and_parse_round_trip() {
        for m in [ml(0.0), ml(1.0), ml(-13.2), ml(42.0), ml(0.5), ml(-700.0)] {
            let shown = format!("{m}");
            let back: MNum = shown.parse().unwrap();
            assert_eq!(back.log(), m.log(), "round trip failed for {shown}");
        }
        assert_eq!(format!("{}", ml(0.0)), "1");
        assert_eq!(format!("{}", ml(42.0)), "e^42");
        let p: MNum = "2.5".parse().unwrap();
        assert_eq!(p.value(), 2.5);
        assert!("-1.0".parse::<MNum>().is_err());
        assert!("e^inf".parse::<MNum>().is_err());
        assert!("".parse::<MNum>().is_err());
    }

    #[test]
    fn serde_round_trip() {
        let m = ml(-3.25);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, "\"e^-3.25\"");
        let back: MNum = serde_json::from_str(&js).unwrap();
        assert_eq!(back.log(), m.log());
        let bare: MNum = serde_json::from_str("\"2.5\"").unwrap();
        assert_eq!(bare.value(), 2.5);
    }

    #[test]
    fn operators_match_named_methods() {
        let a = ml(2.5);
        let b = ml(-1.5);
        assert_eq!((a + b).log(), a.madd(b).log());
        assert_eq!((a - b).log(), a.msub(b).log());
        assert_eq!((a * b).log(), a.mmul(b).log());
        assert_eq!((-a).log(), a.mneg().log());
    }
}
