//! Vectors and planes over the multiplicative scalars.
//!
//! The log image of an [`MVec`] is an ordinary Euclidean vector; inner
//! product, norm, cross product, and angle are the classical ones applied
//! to log images, wrapped back into scalars.

use crate::error::{Error, Result};
use crate::num::MNum;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Index, IndexMut};

/// Fixed-dimension vector of positive scalars.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MVec<const N: usize> {
    components: [MNum; N],
}

pub type MVec2 = MVec<2>;
pub type MVec3 = MVec<3>;

impl<const N: usize> MVec<N> {
    pub fn new(components: [MNum; N]) -> MVec<N> {
        MVec { components }
    }

    /// Builds from ordinary positive values.
    pub fn from_values(values: [f64; N]) -> Result<MVec<N>> {
        let mut components = [MNum::ZERO_STAR; N];
        for (slot, v) in components.iter_mut().zip(values) {
            *slot = MNum::from_value(v)?;
        }
        Ok(MVec { components })
    }

    /// Builds directly from logs.
    pub fn from_logs(logs: [f64; N]) -> MVec<N> {
        let mut components = [MNum::ZERO_STAR; N];
        for (slot, u) in components.iter_mut().zip(logs) {
            *slot = MNum::from_log(u);
        }
        MVec { components }
    }

    pub fn components(&self) -> &[MNum; N] {
        &self.components
    }

    /// The classical vector of component logs.
    pub fn log_image(&self) -> [f64; N] {
        let mut out = [0.0; N];
        for (slot, m) in out.iter_mut().zip(self.components) {
            *slot = m.log();
        }
        out
    }

    /// Componentwise `+*`.
    pub fn vadd(&self, rhs: &MVec<N>) -> MVec<N> {
        let mut components = self.components;
        for (slot, r) in components.iter_mut().zip(rhs.components) {
            *slot = slot.madd(r);
        }
        MVec { components }
    }

    /// Componentwise `-*`.
    pub fn vsub(&self, rhs: &MVec<N>) -> MVec<N> {
        let mut components = self.components;
        for (slot, r) in components.iter_mut().zip(rhs.components) {
            *slot = slot.msub(r);
        }
        MVec { components }
    }

    /// Componentwise additive inverse.
    pub fn vneg(&self) -> MVec<N> {
        let mut components = self.components;
        for slot in components.iter_mut() {
            *slot = slot.mneg();
        }
        MVec { components }
    }

    /// Scalar multiple: each component `a .* c`.
    pub fn smul(&self, a: MNum) -> MVec<N> {
        let mut components = self.components;
        for slot in components.iter_mut() {
            *slot = a.mmul(*slot);
        }
        MVec { components }
    }

    /// Multiplicative inner product: `exp(<log u, log v>)`.
    pub fn minner(&self, rhs: &MVec<N>) -> MNum {
        let mut acc = 0.0;
        for (a, b) in self.components.iter().zip(rhs.components) {
            acc += a.log() * b.log();
        }
        MNum::from_log(acc)
    }

    /// Multiplicative norm: `exp(|log u|_2)`. Always `>= 0*`.
    pub fn mnorm(&self) -> MNum {
        let mut acc = 0.0;
        for a in self.components {
            acc += a.log() * a.log();
        }
        MNum::from_log(acc.sqrt())
    }

    /// Distance `mnorm(u -* v)`.
    pub fn mdistance(&self, rhs: &MVec<N>) -> MNum {
        self.vsub(rhs).mnorm()
    }

    /// Angle between the log images, as `e^theta` with `theta` in
    /// `[0, pi]`. Fails when either log image is the zero vector.
    pub fn mangle(&self, rhs: &MVec<N>) -> Result<MNum> {
        let na = self.mnorm().log();
        let nb = rhs.mnorm().log();
        if na == 0.0 || nb == 0.0 {
            return Err(Error::Domain(
                "mangle is undefined for a vector with zero log image".into(),
            ));
        }
        let cosv = (self.minner(rhs).log() / (na * nb)).clamp(-1.0, 1.0);
        Ok(MNum::from_log(cosv.acos()))
    }

    /// Componentwise tolerant comparison with the scalar defaults.
    pub fn approx_eq(&self, rhs: &MVec<N>) -> bool {
        self.components
            .iter()
            .zip(rhs.components)
            .all(|(a, b)| a.approx_eq(b))
    }
}

impl MVec3 {
    /// Multiplicative cross product: `exp(log u x log v)` componentwise.
    pub fn mcross(&self, rhs: &MVec3) -> MVec3 {
        let a = self.log_image();
        let b = rhs.log_image();
        MVec3::from_logs([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }
}

impl<const N: usize> Index<usize> for MVec<N> {
    type Output = MNum;
    fn index(&self, i: usize) -> &MNum {
        &self.components[i]
    }
}

impl<const N: usize> IndexMut<usize> for MVec<N> {
    fn index_mut(&mut self, i: usize) -> &mut MNum {
        &mut self.components[i]
    }
}

impl<const N: usize> fmt::Display for MVec<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<const N: usize> Serialize for MVec<N> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.components.iter())
    }
}

impl<'de, const N: usize> Deserialize<'de> for MVec<N> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<MVec<N>, D::Error> {
        let raw = Vec::<MNum>::deserialize(deserializer)?;
        let len = raw.len();
        let components: [MNum; N] = raw
            .try_into()
            .map_err(|_| D::Error::custom(format!("expected {N} components, got {len}")))?;
        Ok(MVec { components })
    }
}

/// Plane `<normal, p>* = offset` in multiplicative 3-space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MPlane {
    pub normal: MVec3,
    pub offset: MNum,
}

impl MPlane {
    pub fn new(normal: MVec3, offset: MNum) -> MPlane {
        MPlane { normal, offset }
    }

    /// Signed residual `<normal, p>* -* offset`; `0*` on the plane.
    pub fn eval(&self, p: &MVec3) -> MNum {
        self.normal.minner(p).msub(self.offset)
    }

    pub fn contains(&self, p: &MVec3) -> bool {
        self.eval(p).approx_eq(MNum::ZERO_STAR)
    }
}
