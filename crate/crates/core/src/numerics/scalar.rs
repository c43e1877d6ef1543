//! Extended-precision real scalar.
//!
//! `PScalar` wraps an `astro_float::BigFloat` together with the mantissa width
//! it was created at. Binary operations round to the left operand's width, so
//! a computation seeded from one [`Precision`] stays at that precision without
//! any ambient context.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Mantissa width in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(usize);

impl Precision {
    pub const MIN_BITS: usize = 128;
    pub const DEFAULT: Precision = Precision(512);

    pub fn new(bits: usize) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Config(format!("precision must be at least {} bits, got {bits}", Self::MIN_BITS)));
        }
        Ok(Precision(bits))
    }

    #[inline]
    pub fn bits(self) -> usize {
        self.0
    }

    pub fn doubled(self) -> Self {
        Precision(self.0 * 2)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Extended-precision real number.
#[derive(Clone, Debug)]
pub struct PScalar {
    value: BigFloat,
    precision: Precision,
}

fn consts() -> Consts {
    Consts::new().expect("allocating astro-float constant cache")
}

impl PScalar {
    fn wrap(value: BigFloat, precision: Precision) -> Self {
        PScalar { value, precision }
    }

    pub fn zero(precision: Precision) -> Self {
        Self::from_i64(0, precision)
    }

    pub fn one(precision: Precision) -> Self {
        Self::from_i64(1, precision)
    }

    pub fn from_f64(v: f64, precision: Precision) -> Self {
        Self::wrap(BigFloat::from_f64(v, precision.bits()), precision)
    }

    pub fn from_i64(v: i64, precision: Precision) -> Self {
        Self::wrap(BigFloat::from_i64(v, precision.bits()), precision)
    }

    pub fn from_u64(v: u64, precision: Precision) -> Self {
        Self::wrap(BigFloat::from_u64(v, precision.bits()), precision)
    }

    /// `num / den` rounded once at the target precision.
    pub fn from_ratio(num: i64, den: i64, precision: Precision) -> Self {
        let n = BigFloat::from_i64(num, precision.bits());
        let d = BigFloat::from_i64(den, precision.bits());
        Self::wrap(n.div(&d, precision.bits(), RM), precision)
    }

    /// Parses a decimal literal such as `-1094.42109160` or `3e-1`.
    pub fn parse(s: &str, precision: Precision) -> Result<Self> {
        let v = BigFloat::parse(s.trim(), Radix::Dec, precision.bits(), RM, &mut consts());
        if v.is_nan() {
            return Err(Error::InvalidInput(format!("not a decimal number: {s:?}")));
        }
        Ok(Self::wrap(v, precision))
    }

    #[inline]
    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Same value rounded to another precision.
    pub fn with_precision(&self, precision: Precision) -> Self {
        let mut v = self.value.clone();
        // set_precision only fails for invalid precisions, which Precision rules out
        let _ = v.set_precision(precision.bits(), RM);
        Self::wrap(v, precision)
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.value.is_zero() && self.value.is_negative()
    }

    /// -1, 0 or +1. NaN maps to 0.
    pub fn signum(&self) -> i8 {
        if self.value.is_nan() || self.value.is_zero() {
            0
        } else if self.value.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.precision)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.value.reciprocal(self.precision.bits(), RM), self.precision)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.precision.bits(), RM), self.precision)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.value.exp(self.precision.bits(), RM, &mut consts()), self.precision)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(self.value.ln(self.precision.bits(), RM, &mut consts()), self.precision)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.value.powi(n, self.precision.bits(), RM), self.precision)
    }

    /// Multiplies by a small integer (used for derivative shifts).
    pub fn scale_u64(&self, n: u64) -> Self {
        let f = BigFloat::from_u64(n, self.precision.bits());
        Self::wrap(self.value.mul(&f, self.precision.bits(), RM), self.precision)
    }

    /// Binary exponent `e` with `2^(e-1) <= |self| < 2^e`; `None` for zero and non-finite values.
    pub fn binary_exponent(&self) -> Option<i64> {
        if self.value.is_zero() {
            return None;
        }
        self.value.exponent().map(i64::from)
    }

    /// True when both values carry identical sign, exponent and mantissa words.
    pub fn bit_identical(&self, other: &Self) -> bool {
        match (self.value.as_raw_parts(), other.value.as_raw_parts()) {
            (Some((ma, na, sa, ea, _)), Some((mb, nb, sb, eb, _))) => ma == mb && na == nb && sa == sb && ea == eb,
            _ => self.value.is_nan() == other.value.is_nan() && self.value.is_inf() == other.value.is_inf(),
        }
    }

    /// Nearest `f64` (from the top 128 mantissa bits); saturates to ±inf or 0.
    pub fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return if self.value.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if self.value.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exponent, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        let word_bits = Word::BITS as usize;
        let mut top: u128 = 0;
        let mut filled = 0usize;
        for &w in words.iter().rev() {
            if filled + word_bits > 128 {
                break;
            }
            top = (top << word_bits) | w as u128;
            filled += word_bits;
        }
        // mantissa is the fraction 0.1xxx, so value = top * 2^(exponent - filled)
        let mag = ldexp(top as f64, i64::from(exponent) - filled as i64);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Full-precision decimal representation.
    pub fn to_decimal_string(&self) -> String {
        self.value.format(Radix::Dec, RM, &mut consts()).unwrap_or_else(|_| self.to_f64().to_string())
    }

    pub fn max<'a>(&'a self, other: &'a Self) -> &'a Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

impl PartialEq for PScalar {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for PScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl fmt::Display for PScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a PScalar> for &'a PScalar {
            type Output = PScalar;
            #[inline]
            fn $method(self, rhs: &'a PScalar) -> PScalar {
                let p = self.precision;
                PScalar::wrap(self.value.$method(&rhs.value, p.bits(), RM), p)
            }
        }
        impl $trait<PScalar> for PScalar {
            type Output = PScalar;
            #[inline]
            fn $method(self, rhs: PScalar) -> PScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a PScalar> for PScalar {
            type Output = PScalar;
            #[inline]
            fn $method(self, rhs: &'a PScalar) -> PScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<PScalar> for &'a PScalar {
            type Output = PScalar;
            #[inline]
            fn $method(self, rhs: PScalar) -> PScalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &PScalar {
    type Output = PScalar;
    fn neg(self) -> PScalar {
        PScalar::wrap(BigFloat::neg(&self.value), self.precision)
    }
}

impl Neg for PScalar {
    type Output = PScalar;
    fn neg(self) -> PScalar {
        -&self
    }
}
