//! Truncated Taylor series used as the jet engine for every derivative in
//! the crate.
//!
//! A [`Taylor`] holds the first six Taylor coefficients of a scalar map
//! about some base point: `c[k] = f^(k)(x0) / k!`. Arithmetic on jets is
//! arithmetic on (truncated) power series, so one order-5 jet of a bridge
//! map carries every derivative the Frenet and partner layers need.

use crate::error::{Error, Result};

/// Highest derivative order carried by a jet.
pub const ORDER: usize = 5;
/// Number of stored coefficients.
pub const LEN: usize = ORDER + 1;

/// Order-5 truncated Taylor series. Coefficient convention
/// `c[k] = f^(k)/k!`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor {
    pub c: [f64; LEN],
}

impl Taylor {
    /// The constant series `v`.
    pub fn constant(v: f64) -> Taylor {
        let mut c = [0.0; LEN];
        c[0] = v;
        Taylor { c }
    }

    /// The identity map seeded at `x0`: value `x0`, slope 1.
    pub fn variable(x0: f64) -> Taylor {
        let mut c = [0.0; LEN];
        c[0] = x0;
        c[1] = 1.0;
        Taylor { c }
    }

    /// Series value at the base point.
    pub fn val(&self) -> f64 {
        self.c[0]
    }

    /// `k`-th derivative at the base point, `k! * c[k]`.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }

    pub fn add(&self, rhs: &Taylor) -> Taylor {
        let mut c = [0.0; LEN];
        for k in 0..LEN {
            c[k] = self.c[k] + rhs.c[k];
        }
        Taylor { c }
    }

    pub fn sub(&self, rhs: &Taylor) -> Taylor {
        let mut c = [0.0; LEN];
        for k in 0..LEN {
            c[k] = self.c[k] - rhs.c[k];
        }
        Taylor { c }
    }

    pub fn neg(&self) -> Taylor {
        self.scale(-1.0)
    }

    pub fn scale(&self, a: f64) -> Taylor {
        let mut c = [0.0; LEN];
        for k in 0..LEN {
            c[k] = a * self.c[k];
        }
        Taylor { c }
    }

    /// Cauchy product truncated at order 5.
    pub fn mul(&self, rhs: &Taylor) -> Taylor {
        let mut c = [0.0; LEN];
        for n in 0..LEN {
            let mut acc = 0.0;
            for j in 0..=n {
                acc += self.c[j] * rhs.c[n - j];
            }
            c[n] = acc;
        }
        Taylor { c }
    }

    /// Series quotient. Fails when the divisor vanishes at the base point.
    pub fn div(&self, rhs: &Taylor) -> Result<Taylor> {
        if rhs.c[0] == 0.0 {
            return Err(Error::Domain(
                "series division by a map vanishing at the base point".into(),
            ));
        }
        let mut q = [0.0; LEN];
        for n in 0..LEN {
            let mut acc = self.c[n];
            for j in 1..=n {
                acc -= rhs.c[j] * q[n - j];
            }
            q[n] = acc / rhs.c[0];
        }
        Ok(Taylor { c: q })
    }

    pub fn recip(&self) -> Result<Taylor> {
        Taylor::constant(1.0).div(self)
    }

    /// Real power `x^alpha`. Requires a strictly positive base value.
    pub fn powf(&self, alpha: f64) -> Result<Taylor> {
        if self.c[0] <= 0.0 {
            return Err(Error::Domain(format!(
                "series power x^{alpha} needs value > 0 at the base point, got {}",
                self.c[0]
            )));
        }
        let mut p = [0.0; LEN];
        p[0] = self.c[0].powf(alpha);
        for n in 1..LEN {
            let mut acc = 0.0;
            for k in 0..n {
                acc += (alpha * (n - k) as f64 - k as f64) * p[k] * self.c[n - k];
            }
            p[n] = acc / (n as f64 * self.c[0]);
        }
        Ok(Taylor { c: p })
    }

    /// Integer power by repeated multiplication. Works for any sign of the
    /// base value; negative exponents need a nonzero base value.
    pub fn powi(&self, k: i32) -> Result<Taylor> {
        if k < 0 {
            return self.powi(-k)?.recip();
        }
        let mut acc = Taylor::constant(1.0);
        let mut base = *self;
        let mut e = k as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn sqrt(&self) -> Result<Taylor> {
        self.powf(0.5)
    }

    /// Joint sine/cosine recurrence; returns `(sin, cos)` of the series.
    pub fn sin_cos(&self) -> (Taylor, Taylor) {
        let mut s = [0.0; LEN];
        let mut c = [0.0; LEN];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for n in 1..LEN {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 0..n {
                let w = (n - j) as f64 * self.c[n - j];
                sa += c[j] * w;
                ca -= s[j] * w;
            }
            s[n] = sa / n as f64;
            c[n] = ca / n as f64;
        }
        (Taylor { c: s }, Taylor { c })
    }

    pub fn sin(&self) -> Taylor {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Taylor {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Result<Taylor> {
        let (s, c) = self.sin_cos();
        s.div(&c)
            .map_err(|_| Error::Singular { at: self.c[0] })
    }

    pub fn cot(&self) -> Result<Taylor> {
        let (s, c) = self.sin_cos();
        c.div(&s)
            .map_err(|_| Error::Singular { at: self.c[0] })
    }

    pub fn exp(&self) -> Taylor {
        let mut e = [0.0; LEN];
        e[0] = self.c[0].exp();
        for n in 1..LEN {
            let mut acc = 0.0;
            for j in 0..n {
                acc += e[j] * (n - j) as f64 * self.c[n - j];
            }
            e[n] = acc / n as f64;
        }
        Taylor { c: e }
    }

    pub fn ln(&self) -> Result<Taylor> {
        if self.c[0] <= 0.0 {
            return Err(Error::Domain(format!(
                "series log needs value > 0 at the base point, got {}",
                self.c[0]
            )));
        }
        let mut l = [0.0; LEN];
        l[0] = self.c[0].ln();
        for n in 1..LEN {
            let mut acc = n as f64 * self.c[n];
            for j in 1..n {
                acc -= (n - j) as f64 * self.c[j] * l[n - j];
            }
            l[n] = acc / (n as f64 * self.c[0]);
        }
        Ok(Taylor { c: l })
    }

    /// `sign(x0) * x`. Not differentiable where the value crosses zero, so
    /// this fails at a zero base value unless the series is identically 0.
    pub fn abs(&self) -> Result<Taylor> {
        if self.c[0] > 0.0 {
            Ok(*self)
        } else if self.c[0] < 0.0 {
            Ok(self.neg())
        } else if self.c.iter().all(|&x| x == 0.0) {
            Ok(*self)
        } else {
            Err(Error::NonDifferentiable(
                "abs of a map vanishing at the base point".into(),
            ))
        }
    }

    /// Series of the derivative map. The top coefficient is filled with 0,
    /// so the result is exact only through order 4.
    pub fn differentiate(&self) -> Taylor {
        let mut c = [0.0; LEN];
        for k in 0..ORDER {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Taylor { c }
    }

    /// Antiderivative with zero constant term; drops the top input
    /// coefficient.
    pub fn integrate(&self) -> Taylor {
        let mut c = [0.0; LEN];
        for k in 1..LEN {
            c[k] = self.c[k - 1] / k as f64;
        }
        Taylor { c }
    }

    /// Composition `outer(inner(.))` by truncated Horner evaluation.
    ///
    /// `outer` must be expanded about `inner.val()`; `inner_dev` is the
    /// inner series with its constant term removed.
    pub fn compose(outer: &Taylor, inner_dev: &Taylor) -> Taylor {
        debug_assert!(inner_dev.c[0] == 0.0, "inner deviation must have zero value");
        let mut r = Taylor::constant(outer.c[ORDER]);
        for k in (0..ORDER).rev() {
            r = r.mul(inner_dev).add(&Taylor::constant(outer.c[k]));
        }
        r
    }

    /// Polynomial evaluation of the truncated series at offset `h` from the
    /// base point.
    pub fn eval(&self, h: f64) -> f64 {
        let mut r = self.c[ORDER];
        for k in (0..ORDER).rev() {
            r = r * h + self.c[k];
        }
        r
    }
}
