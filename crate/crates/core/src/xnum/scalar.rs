use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use super::XnumError;

/// Smallest admissible mantissa width (IEEE binary64).
pub const MIN_PRECISION: u32 = 53;

/// Mantissa width used by the Remez engine unless configured otherwise.
pub const DEFAULT_PRECISION: u32 = 256;

/// Extended-precision real number.
///
/// Binary operations are carried out at the larger of the two operand
/// precisions, so mixing widths never silently truncates.
#[derive(Clone)]
pub struct XScalar(Float);

impl XScalar {
    fn check(prec: u32) -> u32 {
        prec.max(MIN_PRECISION)
    }

    pub fn zero(prec: u32) -> Self {
        XScalar(Float::new(Self::check(prec)))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        XScalar(Float::with_val(Self::check(prec), v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        XScalar(Float::with_val(Self::check(prec), v))
    }

    /// Exact rational `num / den` rounded once to `prec` bits.
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        let p = Self::check(prec);
        let n = Float::with_val(p + 64, num);
        XScalar(Float::with_val(p, n / den))
    }

    pub fn pi(prec: u32) -> Self {
        XScalar(Float::with_val(
            Self::check(prec),
            rug::float::Constant::Pi,
        ))
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    /// Copy rounded (or widened) to another precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        XScalar(Float::with_val(Self::check(prec), &self.0))
    }

    /// Round-to-nearest conversion to binary64.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64_round(Round::Nearest)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn from_float(f: Float) -> Self {
        if f.prec() < MIN_PRECISION {
            XScalar(Float::with_val(MIN_PRECISION, f))
        } else {
            XScalar(f)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum_i32(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Self {
        XScalar(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        XScalar(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        XScalar(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        XScalar(self.0.clone().exp())
    }

    pub fn recip(&self) -> Self {
        XScalar(self.0.clone().recip())
    }

    pub fn square(&self) -> Self {
        XScalar(self.0.clone().square())
    }

    pub fn powi(&self, n: i32) -> Self {
        XScalar(self.0.clone().pow(n))
    }

    pub fn pow(&self, e: &XScalar) -> Self {
        let p = self.precision().max(e.precision());
        XScalar(Float::with_val(p, (&self.0).pow(&e.0)))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Power of two `2^e` at the given precision.
    pub fn exp2i(e: i32, prec: u32) -> Self {
        XScalar(Float::with_val(Self::check(prec), Float::i_exp(1, e)))
    }

    /// Number of decimal digits written by [`XScalar::to_decimal_string`].
    pub fn decimal_digits(prec: u32) -> usize {
        (prec / 3 + 2) as usize
    }

    /// Decimal representation that reloads to the identical binary value.
    pub fn to_decimal_string(&self) -> String {
        if self.0.is_zero() {
            return if self.0.is_sign_negative() { "-0".into() } else { "0".into() };
        }
        let digits = Self::decimal_digits(self.precision());
        let s = self.0.to_string_radix(10, Some(digits));
        // rug writes the exponent as `e` for radix 10; normalise for JSON readers.
        s.replace('@', "")
    }

    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self, XnumError> {
        let parsed = Float::parse(s.trim()).map_err(|e| XnumError::Parse {
            input: s.to_string(),
            reason: e.to_string(),
        })?;
        Ok(XScalar(Float::with_val(Self::check(prec), parsed)))
    }
}

/// Serialised as the decimal string of [`XScalar::to_decimal_string`]; the
/// precision is recovered from the number of significant digits.
impl serde::Serialize for XScalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> serde::Deserialize<'de> for XScalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        let mantissa = s.split(['e', 'E']).next().unwrap_or("");
        let digits = mantissa.trim_start_matches(['-', '+', '0', '.']).chars().filter(char::is_ascii_digit).count();
        let prec = (3 * digits.saturating_sub(2) + 2) as u32;
        XScalar::parse_decimal(&s, prec).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for XScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6e}[{}b]", self.to_f64(), self.precision())
    }
}

impl fmt::Display for XScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl PartialEq for XScalar {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for XScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for XScalar {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for XScalar {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a XScalar> for &'a XScalar {
            type Output = XScalar;
            fn $method(self, rhs: &'a XScalar) -> XScalar {
                let p = self.precision().max(rhs.precision());
                XScalar(Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl $tr<XScalar> for XScalar {
            type Output = XScalar;
            fn $method(self, rhs: XScalar) -> XScalar {
                (&self) $op (&rhs)
            }
        }
        impl<'a> $tr<&'a XScalar> for XScalar {
            type Output = XScalar;
            fn $method(self, rhs: &'a XScalar) -> XScalar {
                (&self) $op rhs
            }
        }
        impl<'a> $tr<XScalar> for &'a XScalar {
            type Output = XScalar;
            fn $method(self, rhs: XScalar) -> XScalar {
                self $op (&rhs)
            }
        }
        impl $tr<f64> for XScalar {
            type Output = XScalar;
            fn $method(self, rhs: f64) -> XScalar {
                let p = self.precision();
                XScalar(Float::with_val(p, &self.0 $op rhs))
            }
        }
        impl<'a> $tr<f64> for &'a XScalar {
            type Output = XScalar;
            fn $method(self, rhs: f64) -> XScalar {
                let p = self.precision();
                XScalar(Float::with_val(p, &self.0 $op rhs))
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for XScalar {
    type Output = XScalar;
    fn neg(self) -> XScalar {
        XScalar(-self.0)
    }
}

impl Neg for &XScalar {
    type Output = XScalar;
    fn neg(self) -> XScalar {
        XScalar(-self.0.clone())
    }
}

impl AddAssign<&XScalar> for XScalar {
    fn add_assign(&mut self, rhs: &XScalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign<XScalar> for XScalar {
    fn add_assign(&mut self, rhs: XScalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&XScalar> for XScalar {
    fn sub_assign(&mut self, rhs: &XScalar) {
        *self = &*self - rhs;
    }
}

impl SubAssign<XScalar> for XScalar {
    fn sub_assign(&mut self, rhs: XScalar) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&XScalar> for XScalar {
    fn mul_assign(&mut self, rhs: &XScalar) {
        *self = &*self * rhs;
    }
}

/// Extended-precision complex number, used only for polynomial roots.
#[derive(Clone, Debug, PartialEq)]
pub struct XComplex {
    pub re: XScalar,
    pub im: XScalar,
}

impl XComplex {
    pub fn new(re: XScalar, im: XScalar) -> Self {
        XComplex { re, im }
    }

    pub fn real(re: XScalar) -> Self {
        let p = re.precision();
        XComplex { re, im: XScalar::zero(p) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        XComplex {
            re: XScalar::from_f64(re, prec),
            im: XScalar::from_f64(im, prec),
        }
    }

    pub fn add(&self, o: &XComplex) -> XComplex {
        XComplex::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &XComplex) -> XComplex {
        XComplex::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &XComplex) -> XComplex {
        XComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, k: &XScalar) -> XComplex {
        XComplex::new(&self.re * k, &self.im * k)
    }

    pub fn norm_sqr(&self) -> XScalar {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> XScalar {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, o: &XComplex) -> XComplex {
        let d = o.norm_sqr();
        XComplex::new(
            (&self.re * &o.re + &self.im * &o.im) / &d,
            (&self.im * &o.re - &self.re * &o.im) / &d,
        )
    }

    pub fn recip(&self) -> XComplex {
        let p = self.re.precision();
        XComplex::real(XScalar::one(p)).div(self)
    }
}
