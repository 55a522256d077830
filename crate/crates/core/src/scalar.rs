//! Numeric backends.
//!
//! Grid computations are generic over [`Real`], which is implemented by
//! exact [`Rational`]s and by correctly rounded [`BigFloat`]s. A single run
//! always stays inside one backend; the dynamic [`Scalar`] wrapper exists
//! for documents and the command line, and it refuses mixed arithmetic.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Field operations shared by numeric scalars and symbolic rational functions.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn is_zero(&self) -> bool;
}

/// Arithmetic backend for edge labels.
pub trait Real: Field + PartialOrd + fmt::Display {
    fn is_positive(&self) -> bool;

    /// `value` converted into the same backend (and precision) as `self`.
    fn lift(&self, value: &Rational) -> Self;

    fn abs(&self) -> Self;

    fn to_f64(&self) -> f64;

    fn mode(&self) -> Mode;

    /// Relative tolerance used by equality tests; `None` means exact.
    fn rel_tolerance(&self) -> Option<Self>;

    fn to_scalar(&self) -> Scalar;

    fn approx_eq(&self, other: &Self) -> bool {
        match self.rel_tolerance() {
            None => self == other,
            Some(tol) => {
                let scale = if self.abs() > other.abs() {
                    self.abs()
                } else {
                    other.abs()
                };
                self.sub(other).abs() <= tol.mul(&scale)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float { precision_bits: u32 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float { .. } => "float",
        }
    }

    /// The value one in this mode.
    pub fn one(&self) -> Result<Scalar> {
        match *self {
            Mode::Exact => Ok(Scalar::Exact(Rational::from(1))),
            Mode::Float { precision_bits } => {
                Ok(Scalar::Float(BigFloat::from_int(1, precision_bits)?))
            }
        }
    }
}

impl Field for Rational {
    fn add(&self, rhs: &Self) -> Self {
        Rational::from(self + rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Rational::from(self - rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Rational::from(self * rhs)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.cmp0() == Ordering::Equal {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from(self / rhs))
    }

    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }
}

impl Real for Rational {
    fn is_positive(&self) -> bool {
        self.cmp0() == Ordering::Greater
    }

    fn lift(&self, value: &Rational) -> Self {
        value.clone()
    }

    fn abs(&self) -> Self {
        Rational::from(self.abs_ref())
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn mode(&self) -> Mode {
        Mode::Exact
    }

    fn rel_tolerance(&self) -> Option<Self> {
        None
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
}

/// Binary floating point number with a fixed precision of at least 64 bits.
///
/// Every operation is rounded once, to nearest, at the precision of the
/// left operand.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct BigFloat(Float);

impl BigFloat {
    pub const MIN_PRECISION: u32 = 64;

    /// Default precision for tables over grids with up to a few hundred rows.
    pub const DEFAULT_PRECISION: u32 = 256;

    fn check_precision(precision_bits: u32) -> Result<()> {
        if precision_bits < Self::MIN_PRECISION {
            return Err(Error::PrecisionTooLow(precision_bits));
        }
        Ok(())
    }

    pub fn from_int(value: i64, precision_bits: u32) -> Result<Self> {
        Self::check_precision(precision_bits)?;
        Ok(BigFloat(Float::with_val(precision_bits, value)))
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(value: &Rational, precision_bits: u32) -> Result<Self> {
        Self::check_precision(precision_bits)?;
        Ok(BigFloat(Float::with_val(precision_bits, value)))
    }

    pub fn parse(input: &str, precision_bits: u32) -> Result<Self> {
        Self::check_precision(precision_bits)?;
        let parsed = Float::parse(input.trim()).map_err(|_| Error::Parse {
            kind: "float",
            input: input.to_string(),
        })?;
        Ok(BigFloat(Float::with_val(precision_bits, parsed)))
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> Option<Rational> {
        self.0.to_rational()
    }

    /// Plain decimal rendering rounded to `digits` significant digits,
    /// e.g. `0.1837762860`.
    pub fn to_sig_string(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let sci = self
            .0
            .to_string_radix_round(10, Some(digits.max(1)), Round::Nearest);
        plain_decimal(&sci)
    }
}

/// Turns rug's `d.ddde-x` output into positional notation.
fn plain_decimal(sci: &str) -> String {
    let (mantissa, exponent) = match sci.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (sci, 0),
    };
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: String = format!("{int_part}{frac_part}");
    // Position of the decimal point relative to the start of `digits`.
    let point = int_part.len() as i64 + exponent;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_string_radix(10, None))
    }
}

impl Field for BigFloat {
    fn add(&self, rhs: &Self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), &self.0 + &rhs.0))
    }

    fn sub(&self, rhs: &Self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), &self.0 - &rhs.0))
    }

    fn mul(&self, rhs: &Self) -> Self {
        BigFloat(Float::with_val(self.0.prec(), &self.0 * &rhs.0))
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigFloat(Float::with_val(self.0.prec(), &self.0 / &rhs.0)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Real for BigFloat {
    fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero() && !self.0.is_nan()
    }

    fn lift(&self, value: &Rational) -> Self {
        BigFloat(Float::with_val(self.0.prec(), value))
    }

    fn abs(&self) -> Self {
        BigFloat(self.0.clone().abs())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn mode(&self) -> Mode {
        Mode::Float {
            precision_bits: self.0.prec(),
        }
    }

    fn rel_tolerance(&self) -> Option<Self> {
        let exp = 16 - self.0.prec() as i32;
        Some(BigFloat(Float::with_val(
            self.0.prec(),
            Float::i_exp(1, exp),
        )))
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Float(self.clone())
    }
}

/// Euler's number, correctly rounded to `precision_bits`.
///
/// The Taylor series is summed exactly up to `N` terms and bracketed by the
/// remainder bound `1/(N!·N)`; `N` grows until both ends of the bracket
/// round to the same float.
pub fn e_const(precision_bits: u32) -> Result<BigFloat> {
    BigFloat::check_precision(precision_bits)?;
    let mut terms: u32 = 8;
    loop {
        // sum = Σ_{k=0}^{N} N!/k!, so the partial sum is sum / N!.
        let mut factorial = Integer::from(1);
        let mut sum = Integer::from(1);
        let mut term = Integer::from(1);
        for k in (1..=terms).rev() {
            term *= k;
            sum += &term;
        }
        for k in 1..=terms {
            factorial *= k;
        }
        let lower = Rational::from((sum, factorial.clone()));
        let remainder = Rational::from((Integer::from(1), factorial * terms));
        let upper = Rational::from(&lower + &remainder);
        let lo = Float::with_val(precision_bits, &lower);
        let hi = Float::with_val(precision_bits, &upper);
        if lo == hi {
            return Ok(BigFloat(lo));
        }
        terms *= 2;
    }
}

/// Correctly rounded conversion of an exact rational.
pub fn to_float(value: &Rational, precision_bits: u32) -> Result<BigFloat> {
    BigFloat::from_rational(value, precision_bits)
}

pub fn parse_rational(input: &str) -> Result<Rational> {
    let trimmed = input.trim();
    let parsed = Rational::parse(trimmed).map_err(|_| Error::Parse {
        kind: "rational",
        input: input.to_string(),
    })?;
    Ok(Rational::from(parsed))
}

/// Exact value of a decimal literal such as `-0.00014` or `7.0010150391`.
pub fn parse_decimal(input: &str) -> Result<Rational> {
    let err = || Error::Parse {
        kind: "decimal",
        input: input.to_string(),
    };
    let s = input.trim();
    let (negative, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let numer = Integer::from_str_radix(&digits, 10).map_err(|_| err())?;
    let denom = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
    let value = Rational::from((numer, denom));
    Ok(if negative { -value } else { value })
}

/// A label of either backend, used where the backend is chosen at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(BigFloat),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(f) => f.mode(),
        }
    }

    pub fn parse(input: &str, mode: Mode) -> Result<Self> {
        match mode {
            Mode::Exact => parse_rational(input).map(Scalar::Exact),
            Mode::Float { precision_bits } => {
                BigFloat::parse(input, precision_bits).map(Scalar::Float)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Float(f) => f.to_f64(),
        }
    }

    pub fn arith(&self, op: ArithOp, rhs: &Scalar) -> Result<Scalar> {
        scalar_arith(self, rhs, op)
    }
}

pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar> {
    fn apply<T: Field>(x: &T, y: &T, op: ArithOp) -> Result<T> {
        Ok(match op {
            ArithOp::Add => x.add(y),
            ArithOp::Sub => x.sub(y),
            ArithOp::Mul => x.mul(y),
            ArithOp::Div => x.div(y)?,
        })
    }
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => apply(x, y, op).map(Scalar::Exact),
        (Scalar::Float(x), Scalar::Float(y)) => {
            if x.precision() != y.precision() {
                return Err(Error::ModeMismatch {
                    left: "float",
                    right: "float of another precision",
                });
            }
            apply(x, y, op).map(Scalar::Float)
        }
        _ => Err(Error::ModeMismatch {
            left: a.mode().name(),
            right: b.mode().name(),
        }),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Exact(String),
    Float { value: String, precision_bits: u32 },
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Scalar::Exact(q) => ScalarRepr::Exact(q.to_string()),
            Scalar::Float(x) => ScalarRepr::Float {
                value: x.to_string(),
                precision_bits: x.precision(),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ScalarRepr::deserialize(deserializer)? {
            ScalarRepr::Exact(s) => parse_rational(&s)
                .map(Scalar::Exact)
                .map_err(D::Error::custom),
            ScalarRepr::Float {
                value,
                precision_bits,
            } => BigFloat::parse(&value, precision_bits)
                .map(Scalar::Float)
                .map_err(D::Error::custom),
        }
    }
}
