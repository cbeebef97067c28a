//! Scalar fields for the double-complex engine.

use std::fmt;

use rug::{Complex, Float, Rational};

use crate::precision::{Closeness, Precision};

/// Arithmetic needed by the engine. `Ctx` carries whatever the scalar
/// needs to create constants, e.g. a working precision.
pub trait Field: Clone + fmt::Debug + Send + Sync + Sized + 'static {
    type Ctx: Clone + fmt::Debug + Send + Sync;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_gauss(v: &GaussRat, ctx: &Self::Ctx) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Stored value is exactly zero; used to skip work, never to decide.
    fn is_exact_zero(&self) -> bool;
    /// Decides whether the value vanishes at the context tolerance.
    fn zero_test(&self, ctx: &Self::Ctx) -> Closeness;
    /// |value| as f64, for reporting.
    fn magnitude(&self) -> f64;
    /// Real and imaginary parts as text that `parse` reads back.
    fn to_text(&self, ctx: &Self::Ctx) -> (String, String);
    fn parse(re: &str, im: &str, ctx: &Self::Ctx) -> Result<Self, String>;
}

/// Exact element of Q(i).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        GaussRat { re: re.into(), im: im.into() }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        GaussRat { re: re.into(), im: Rational::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn inv(&self) -> GaussRat {
        let n = Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref());
        GaussRat { re: Rational::from(&self.re / &n), im: -Rational::from(&self.im / &n) }
    }

    pub fn div(&self, o: &GaussRat) -> GaussRat {
        self.mul(&o.inv())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

impl Field for GaussRat {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        GaussRat::default()
    }
    fn one(_: &()) -> Self {
        GaussRat::real(1)
    }
    fn from_gauss(v: &GaussRat, _: &()) -> Self {
        v.clone()
    }
    fn add(&self, o: &Self) -> Self {
        GaussRat { re: Rational::from(&self.re + &o.re), im: Rational::from(&self.im + &o.im) }
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRat { re: Rational::from(&self.re - &o.re), im: Rational::from(&self.im - &o.im) }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im == 0 && o.im == 0 {
            return GaussRat::real(Rational::from(&self.re * &o.re));
        }
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        GaussRat { re, im }
    }
    fn neg(&self) -> Self {
        GaussRat { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
    fn zero_test(&self, _: &()) -> Closeness {
        if self.is_zero() {
            Closeness::Equal
        } else {
            Closeness::Distinct
        }
    }
    fn magnitude(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
    fn to_text(&self, _: &()) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
    fn parse(re: &str, im: &str, _: &()) -> Result<Self, String> {
        let p = |s: &str| Rational::from_str_radix(s, 10).map_err(|_| format!("not a rational: {s:?}"));
        Ok(GaussRat { re: p(re)?, im: p(im)? })
    }
}

/// Complex number at a fixed binary precision.
#[derive(Clone, Debug, PartialEq)]
pub struct MpC(pub Complex);

impl MpC {
    pub fn bits(&self) -> u32 {
        self.0.prec().0
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.bits(), self.0.abs_ref())
    }
}

impl Field for MpC {
    type Ctx = Precision;

    fn zero(ctx: &Precision) -> Self {
        MpC(Complex::new(ctx.bits()))
    }
    fn one(ctx: &Precision) -> Self {
        MpC(Complex::with_val(ctx.bits(), 1))
    }
    fn from_gauss(v: &GaussRat, ctx: &Precision) -> Self {
        MpC(Complex::with_val(ctx.bits(), (&v.re, &v.im)))
    }
    fn add(&self, o: &Self) -> Self {
        MpC(Complex::with_val(self.bits(), &self.0 + &o.0))
    }
    fn sub(&self, o: &Self) -> Self {
        MpC(Complex::with_val(self.bits(), &self.0 - &o.0))
    }
    fn mul(&self, o: &Self) -> Self {
        MpC(Complex::with_val(self.bits(), &self.0 * &o.0))
    }
    fn neg(&self) -> Self {
        MpC(Complex::with_val(self.bits(), -&self.0))
    }
    fn is_exact_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }
    fn zero_test(&self, ctx: &Precision) -> Closeness {
        ctx.classify(&self.abs())
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64()
    }
    fn to_text(&self, ctx: &Precision) -> (String, String) {
        // enough decimal digits to pin the binary value down
        let digits = (ctx.bits() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        let f = |x: &Float| {
            if x.is_zero() {
                "0".to_string()
            } else {
                x.to_string_radix(10, Some(digits))
            }
        };
        (f(self.0.real()), f(self.0.imag()))
    }
    fn parse(re: &str, im: &str, ctx: &Precision) -> Result<Self, String> {
        let p = |s: &str| {
            if s.contains('/') {
                return Rational::from_str_radix(s, 10)
                    .map(|q| Float::with_val(ctx.bits(), q))
                    .map_err(|_| format!("not a rational: {s:?}"));
            }
            Float::parse(s)
                .map(|v| Float::with_val(ctx.bits(), v))
                .map_err(|_| format!("not a decimal number: {s:?}"))
        };
        Ok(MpC(Complex::with_val(ctx.bits(), (p(re)?, p(im)?))))
    }
}
