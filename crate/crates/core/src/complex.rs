//! Arbitrary-precision complex numbers backed by MPFR floats.
//!
//! `Coefficient` is the scalar type used everywhere in the crate: polynomial
//! coefficients, evaluation points, roots and the unit-modulus constants
//! `epsilon`, `lambda` and `mu`. Binary operations run at the larger of the
//! two operand precisions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

/// Smallest precision accepted by the analysis routines.
pub const MIN_PRECISION: u32 = 64;

/// Working precision used when the caller does not choose one.
pub const DEFAULT_PRECISION: u32 = 256;

/// A complex number `re + i*im` with both parts at the same binary precision.
#[derive(Clone, PartialEq)]
pub struct Coefficient {
    re: Float,
    im: Float,
}

impl Coefficient {
    /// Builds a coefficient from its parts; both are widened to the larger
    /// precision.
    pub fn new(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        let mut re = re;
        let mut im = im;
        re.set_prec(prec);
        im.set_prec(prec);
        Coefficient { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Coefficient {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Coefficient {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Coefficient {
            re,
            im: Float::new(prec),
        }
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    /// `e^{i theta}` at the precision of `theta`.
    pub fn exp_i(theta: &Float) -> Self {
        let prec = theta.prec();
        let mut sin = theta.clone();
        let mut cos = Float::new(prec);
        sin.sin_cos_mut(&mut cos);
        Coefficient { re: cos, im: sin }
    }

    /// `e^z`.
    pub fn exp(&self) -> Self {
        let rot = Self::exp_i(&self.im);
        let modulus = Float::with_val(self.prec(), self.re.exp_ref());
        rot.scale(&modulus)
    }

    /// `e^{2 pi i num / den}`.
    pub fn root_of_unity(prec: u32, num: i64, den: u64) -> Self {
        let mut theta = Float::with_val(prec + 16, Constant::Pi);
        theta *= 2 * num;
        theta /= den;
        let z = Self::exp_i(&theta);
        z.with_prec(prec)
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Coefficient {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Coefficient {
            re: self.re.clone(),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let prec = self.prec();
        let mut n = Float::with_val(prec, self.re.square_ref());
        n += Float::with_val(prec, self.im.square_ref());
        n
    }

    /// Modulus `|z|`.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn scale(&self, s: &Float) -> Self {
        let prec = self.prec().max(s.prec());
        Coefficient {
            re: Float::with_val(prec, &self.re * s),
            im: Float::with_val(prec, &self.im * s),
        }
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        let prec = self.prec();
        Coefficient {
            re: Float::with_val(prec, &self.re * s),
            im: Float::with_val(prec, &self.im * s),
        }
    }

    pub fn recip(&self) -> Self {
        Coefficient::one(self.prec()).div_ref(self)
    }

    /// `z^n` by binary powering.
    pub fn powu(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Coefficient::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Exact decimal rendering of both parts.
    pub fn to_decimal_pair(&self) -> [String; 2] {
        [decimal_string(&self.re), decimal_string(&self.im)]
    }

    /// Parses a decimal pair at the requested precision.
    pub fn parse_decimal_pair(prec: u32, re: &str, im: &str) -> Result<Self, String> {
        Ok(Coefficient {
            re: parse_float(prec, re)?,
            im: parse_float(prec, im)?,
        })
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        Coefficient {
            re: Float::with_val(prec, &self.re + &rhs.re),
            im: Float::with_val(prec, &self.im + &rhs.im),
        }
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        Coefficient {
            re: Float::with_val(prec, &self.re - &rhs.re),
            im: Float::with_val(prec, &self.im - &rhs.im),
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        let mut re = Float::with_val(prec, &self.re * &rhs.re);
        re -= Float::with_val(prec, &self.im * &rhs.im);
        let mut im = Float::with_val(prec, &self.re * &rhs.im);
        im += Float::with_val(prec, &self.im * &rhs.re);
        Coefficient { re, im }
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        let prec = self.prec().max(rhs.prec());
        let den = rhs.with_prec(prec).norm_sqr();
        let mut re = Float::with_val(prec, &self.re * &rhs.re);
        re += Float::with_val(prec, &self.im * &rhs.im);
        let mut im = Float::with_val(prec, &self.im * &rhs.re);
        im -= Float::with_val(prec, &self.re * &rhs.im);
        re /= &den;
        im /= &den;
        Coefficient { re, im }
    }
}

/// Shortest decimal string that parses back to the same binary value.
pub fn decimal_string(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, None)
}

pub fn parse_float(prec: u32, s: &str) -> Result<Float, String> {
    let parsed = Float::parse(s.trim()).map_err(|e| format!("{s:?}: {e}"))?;
    let f = Float::with_val(prec, parsed);
    if !f.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(f)
}

/// `pi` at `prec` bits, computed with 16 guard bits and rounded once.
pub fn pi(prec: u32) -> Float {
    let wide = Float::with_val(prec + 16, Constant::Pi);
    Float::with_val(prec, wide)
}

/// `2^e` exactly.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, e))
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [re, im] = self.to_decimal_pair();
        write!(f, "({re}, {im})")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Coefficient> for &Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: &Coefficient) -> Coefficient {
                self.$inner(rhs)
            }
        }
        impl $tr<Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: Coefficient) -> Coefficient {
                self.$inner(&rhs)
            }
        }
        impl $tr<&Coefficient> for Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: &Coefficient) -> Coefficient {
                self.$inner(rhs)
            }
        }
        impl $tr<Coefficient> for &Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: Coefficient) -> Coefficient {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        let prec = self.prec();
        Coefficient {
            re: Float::with_val(prec, -&self.re),
            im: Float::with_val(prec, -&self.im),
        }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}
