//! Complex scalars over MPFR reals.
//!
//! A `Cplx` is a pair of `rug::Float` components at the active working
//! precision. Only the field operations needed by the pipeline are
//! implemented; everything stays exact-precision (no hidden f64 round trips).

use crate::precision::Precision;
use rug::ops::CompleteRound;
use rug::Float;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex number with MPFR real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct Cplx {
    re: Float,
    im: Float,
}

impl fmt::Debug for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} {:+e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i", self.re, self.im)
    }
}

impl Cplx {
    pub fn new(re: Float, im: Float) -> Self {
        Self { re, im }
    }

    pub fn from_f64(prec: &Precision, re: f64, im: f64) -> Self {
        Self {
            re: prec.real(re),
            im: prec.real(im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::with_val(re.prec(), 0u8);
        Self { re, im }
    }

    pub fn zero(prec: &Precision) -> Self {
        Self::from_f64(prec, 0.0, 0.0)
    }

    pub fn one(prec: &Precision) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: &Precision) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.re, self.im)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: (-&self.im).complete(self.im.prec()),
        }
    }

    /// |z|, computed as hypot(re, im).
    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// |z|^2.
    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    /// 1/z (naive formula; the MPFR exponent range makes overflow moot).
    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self {
            re: Float::with_val(n.prec(), &self.re / &n),
            im: -Float::with_val(n.prec(), &self.im / &n),
        }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        Self {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn unscale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        Self {
            re: Float::with_val(p, &self.re / s),
            im: Float::with_val(p, &self.im / s),
        }
    }

    /// z * i, exact.
    pub fn mul_i(&self) -> Self {
        Self {
            re: (-&self.im).complete(self.im.prec()),
            im: self.re.clone(),
        }
    }

    /// Round both components to the context width.
    pub fn rounded(&self, prec: &Precision) -> Self {
        Self {
            re: prec.round(&self.re),
            im: prec.round(&self.im),
        }
    }

    /// Distance |self - other|.
    pub fn dist(&self, other: &Self) -> Float {
        (self - other).abs()
    }
}

fn add_impl(a: &Cplx, b: &Cplx) -> Cplx {
    let p = a.prec().max(b.prec());
    Cplx {
        re: Float::with_val(p, &a.re + &b.re),
        im: Float::with_val(p, &a.im + &b.im),
    }
}

fn sub_impl(a: &Cplx, b: &Cplx) -> Cplx {
    let p = a.prec().max(b.prec());
    Cplx {
        re: Float::with_val(p, &a.re - &b.re),
        im: Float::with_val(p, &a.im - &b.im),
    }
}

fn mul_impl(a: &Cplx, b: &Cplx) -> Cplx {
    let p = a.prec().max(b.prec());
    let re = Float::with_val(p, &a.re * &b.re) - Float::with_val(p, &a.im * &b.im);
    let im = Float::with_val(p, &a.re * &b.im) + Float::with_val(p, &a.im * &b.re);
    Cplx { re, im }
}

fn div_impl(a: &Cplx, b: &Cplx) -> Cplx {
    let p = a.prec().max(b.prec());
    let n = b.norm_sqr();
    let re = (Float::with_val(p, &a.re * &b.re) + Float::with_val(p, &a.im * &b.im)) / &n;
    let im = (Float::with_val(p, &a.im * &b.re) - Float::with_val(p, &a.re * &b.im)) / &n;
    Cplx { re, im }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $func:ident) => {
        impl $trait for &Cplx {
            type Output = Cplx;
            fn $method(self, rhs: &Cplx) -> Cplx {
                $func(self, rhs)
            }
        }
        impl $trait for Cplx {
            type Output = Cplx;
            fn $method(self, rhs: Cplx) -> Cplx {
                $func(&self, &rhs)
            }
        }
        impl $trait<&Cplx> for Cplx {
            type Output = Cplx;
            fn $method(self, rhs: &Cplx) -> Cplx {
                $func(&self, rhs)
            }
        }
        impl $trait<Cplx> for &Cplx {
            type Output = Cplx;
            fn $method(self, rhs: Cplx) -> Cplx {
                $func(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for &Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx {
            re: (-&self.re).complete(self.re.prec()),
            im: (-&self.im).complete(self.im.prec()),
        }
    }
}

impl Neg for Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn field_ops() {
        let prec = p();
        let a = Cplx::from_f64(&prec, 1.0, 2.0);
        let b = Cplx::from_f64(&prec, 3.0, -1.0);
        let s = &a + &b;
        assert_eq!(s.re().to_f64(), 4.0);
        assert_eq!(s.im().to_f64(), 1.0);
        let m = &a * &b;
        assert_eq!(m.re().to_f64(), 5.0); // 3 + 2
        assert_eq!(m.im().to_f64(), 5.0); // -1 + 6
        let q = &m / &b;
        assert!((&q - &a).abs() < prec.ulps(4.0));
    }

    #[test]
    fn recip_of_2i() {
        let prec = p();
        let z = Cplx::from_f64(&prec, 0.0, 2.0);
        let r = z.recip();
        assert_eq!(r.re().to_f64(), 0.0);
        assert_eq!(r.im().to_f64(), -0.5);
    }

    #[test]
    fn conj_and_abs() {
        let prec = p();
        let z = Cplx::from_f64(&prec, 3.0, 4.0);
        assert_eq!(z.abs().to_f64(), 5.0);
        assert_eq!(z.conj().im().to_f64(), -4.0);
        assert_eq!(z.norm_sqr().to_f64(), 25.0);
    }

    #[test]
    fn conjugation_commutes_with_product_bitwise() {
        let prec = p();
        let a = Cplx::from_f64(&prec, 0.1, 1.7);
        let b = Cplx::from_f64(&prec, -0.3, 0.9);
        let lhs = (&a * &b).conj();
        let rhs = a.conj() * b.conj();
        assert_eq!(lhs, rhs);
    }
}
