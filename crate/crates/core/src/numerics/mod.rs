//! Scalar kinds and small numeric utilities shared by every other module.
//!
//! The square dynamics run entirely in exact [`Rational`] arithmetic. Big
//! floats ([`BigFloat`]) enter only where the collapse chart and the tangent
//! chart need trigonometry; their precision travels in an explicit
//! [`Precision`] value so that nothing depends on global state.

mod pl;

pub use pl::{pl_eval, PlFunction};

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::{NegAssign, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always in lowest terms.
pub type Rational = rug::Rational;

/// Arbitrary-precision binary float with a wide exponent range.
pub type BigFloat = rug::Float;

/// Which way to apply a homeomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}

/// Working precision of the big-float pipeline, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision(u32);

impl Precision {
    pub const DEFAULT: Precision = Precision(256);

    pub fn new(bits: u32) -> Result<Self> {
        if !(53..=1 << 24).contains(&bits) {
            return Err(Error::domain("precision", format!("{bits} bits")));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The same precision widened by `extra` bits.
    pub fn widened(self, extra: u32) -> Self {
        Precision(self.0.saturating_add(extra).min(1 << 24))
    }

    pub fn float(self, value: f64) -> BigFloat {
        BigFloat::with_val(self.0, value)
    }

    pub fn from_rational(self, q: &Rational) -> BigFloat {
        BigFloat::with_val_round(self.0, q, Round::Nearest).0
    }

    pub fn pi(self) -> BigFloat {
        BigFloat::with_val(self.0, Constant::Pi)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

/// Run-level tolerances for the numeric (non-exact) checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `xi_inv(xi(x))` and `psi_inv(psi(x))` round trips.
    pub chart_roundtrip: f64,
    /// Commutation and structural identities of the collapse map.
    pub commutation: f64,
    /// Radius used to cluster orbit tails into limit points.
    pub limitset: f64,
    /// Number of iterates used for limit-set estimates.
    pub horizon: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            chart_roundtrip: 1e-25,
            commutation: 1e-30,
            limitset: 1e-3,
            horizon: 400,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.chart_roundtrip) || !positive(self.commutation) || !positive(self.limitset)
        {
            return Err(Error::domain("tolerances", "all tolerances must be positive"));
        }
        if self.horizon < 1 {
            return Err(Error::domain("tolerances", "horizon must be at least 1"));
        }
        Ok(())
    }
}

/// A point of the plane (or of the square) in big-float coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanePoint {
    pub x: BigFloat,
    pub y: BigFloat,
}

impl PlanePoint {
    pub fn new(x: BigFloat, y: BigFloat) -> Self {
        PlanePoint { x, y }
    }

    pub fn from_f64(prec: Precision, x: f64, y: f64) -> Self {
        PlanePoint::new(prec.float(x), prec.float(y))
    }

    pub fn from_rationals(prec: Precision, x: &Rational, y: &Rational) -> Self {
        PlanePoint::new(prec.from_rational(x), prec.from_rational(y))
    }

    pub fn prec(&self) -> u32 {
        self.x.prec().max(self.y.prec())
    }

    /// Re-rounds both coordinates to `prec`.
    pub fn rounded(&self, prec: Precision) -> Self {
        PlanePoint::new(
            BigFloat::with_val(prec.bits(), &self.x),
            BigFloat::with_val(prec.bits(), &self.y),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &PlanePoint) -> BigFloat {
        let prec = self.prec().max(other.prec());
        let dx = BigFloat::with_val(prec, &self.x - &other.x);
        let dy = BigFloat::with_val(prec, &self.y - &other.y);
        dx.hypot(&dy)
    }

    /// Euclidean norm; huge values are fine thanks to the wide exponent.
    pub fn norm(&self) -> BigFloat {
        BigFloat::with_val(self.prec(), self.x.hypot_ref(&self.y))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    /// Mirror image under `(x, y) -> (-x, y)`.
    pub fn mirrored(&self) -> Self {
        let mut x = self.x.clone();
        x.neg_assign();
        PlanePoint::new(x, self.y.clone())
    }

    /// Mirror image under `(x, y) -> (x, -y)`.
    pub fn flipped(&self) -> Self {
        let mut y = self.y.clone();
        y.neg_assign();
        PlanePoint::new(self.x.clone(), y)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_float(&self.x), format_float(&self.y))
    }
}

/// Polar angle of `y - center`, normalised to `[0, 2*pi)`.
pub fn angle_normalize(y: &PlanePoint, center: &PlanePoint) -> Result<BigFloat> {
    let prec = y.prec().max(center.prec());
    let dx = BigFloat::with_val(prec, &y.x - &center.x);
    let dy = BigFloat::with_val(prec, &y.y - &center.y);
    if dx.is_zero() && dy.is_zero() {
        return Err(Error::degenerate("angle_normalize", "point equals the centre"));
    }
    let mut angle = dy.atan2(&dx);
    if angle.is_sign_negative() {
        angle += BigFloat::with_val(prec, Constant::Pi) * 2u32;
    }
    // atan2(-0, -1) = -pi rounds back up to exactly 2*pi; fold it to the slit side 0.
    let two_pi = BigFloat::with_val(prec, Constant::Pi) * 2u32;
    if angle >= two_pi {
        angle -= two_pi;
    }
    Ok(angle)
}

/// `2^e` as an exact rational, for any integer `e`.
pub fn pow2(e: i64) -> Rational {
    let mut q = Rational::from(1);
    if e >= 0 {
        q <<= e as u32;
    } else {
        q >>= (-e) as u32;
    }
    q
}

/// Parses `p/q`, an integer, or a terminating decimal (`-0.7`, `1.25e-3`)
/// into an exact fraction.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if t.contains('/') {
        return Rational::parse(t)
            .map(Rational::from)
            .map_err(|e| Error::Parse(format!("{t:?}: {e}")));
    }
    parse_decimal(t).ok_or_else(|| Error::Parse(format!("{t:?} is not an exact fraction or decimal")))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(at) => (&t[..at], t[at + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut q = Rational::from(rug::Integer::from_str_radix(&all, 10).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = rug::Integer::from(10);
    let factor = Rational::from(ten.pow(scale.unsigned_abs()));
    if scale >= 0 {
        q *= factor;
    } else {
        q /= factor;
    }
    if negative {
        q.neg_assign();
    }
    Some(q)
}

/// Parses a big-float literal (decimal or scientific) at `prec`.
pub fn parse_float(text: &str, prec: Precision) -> Result<BigFloat> {
    let t = text.trim();
    if t.contains('/') {
        return Ok(prec.from_rational(&parse_rational(t)?));
    }
    BigFloat::parse(t)
        .map(|p| BigFloat::with_val(prec.bits(), p))
        .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
}

/// Human-readable rendering: integers print plainly, everything else with
/// 30 significant digits.
pub fn format_float(v: &BigFloat) -> String {
    if v.is_zero() {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    if v.is_integer() && v.clone().abs() < 1e30 {
        if let Some(i) = v.to_integer() {
            return i.to_string();
        }
    }
    let s = v.to_string_radix(10, Some(30));
    trim_mantissa(&s)
}

fn trim_mantissa(s: &str) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(at) => (&s[..at], &s[at..]),
        None => (s, ""),
    };
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}{exp}")
}

/// Sign of a big float as an ordering against zero.
pub fn sign(v: &BigFloat) -> Ordering {
    v.cmp0().unwrap_or(Ordering::Equal)
}

/// Converts a finite big float to the exact rational it represents.
pub fn float_to_rational(v: &BigFloat) -> Result<Rational> {
    v.to_rational()
        .ok_or_else(|| Error::domain("float_to_rational", format!("non-finite value {v}")))
}

/// Number of bits needed to resolve a positive exact gap `d`: roughly
/// `-log2(d)`, clamped at zero.
pub fn resolution_bits(d: &Rational) -> u32 {
    if *d <= 0 {
        return 0;
    }
    let num_bits = d.numer().significant_bits() as i64;
    let den_bits = d.denom().significant_bits() as i64;
    (den_bits - num_bits + 1).max(0) as u32
}
