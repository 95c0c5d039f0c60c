//! The normally rising, orientation-reversing homeomorphism of the square
//! `J^2 = [-1, 1]^2` and all of its building blocks, in exact arithmetic.
//!
//! Every map here preserves horizontal lines up to the base shift of
//! heights: a point at height `s` always lands at height `level_shift(s)`.
//! The map itself is assembled from three pieces:
//!
//! * on `s >= 0` it is the upper map: shift up, mirror, then shear each
//!   horizontal line of the upper band by its line rule;
//! * on `-1/2 <= s < 0` it is the plain mirrored shift;
//! * on `s < -1/2` it is the inverse of the upper map conjugated by the
//!   vertical flip.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{pow2, Direction, PlFunction, Rational};
use crate::strips::{block_of, strip_locate, Zone};

/// An exact point of the square `J^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquarePoint {
    r: Rational,
    s: Rational,
}

impl SquarePoint {
    pub fn new(r: Rational, s: Rational) -> Result<Self> {
        if r < -1 || r > 1 || s < -1 || s > 1 {
            return Err(Error::domain("SquarePoint", format!("({r}, {s}) outside J^2")));
        }
        Ok(SquarePoint { r, s })
    }

    /// Convenience constructor from two `(numerator, denominator)` pairs.
    pub fn ratio(r: (i64, i64), s: (i64, i64)) -> Result<Self> {
        SquarePoint::new(Rational::from(r), Rational::from(s))
    }

    /// Parses `"r,s"` where each coordinate is a fraction or a terminating
    /// decimal.
    pub fn parse(text: &str) -> Result<Self> {
        let (r, s) = text
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected \"r,s\", got {text:?}")))?;
        SquarePoint::new(crate::numerics::parse_rational(r)?, crate::numerics::parse_rational(s)?)
    }

    /// Horizontal coordinate (the abscissa projection).
    pub fn r(&self) -> &Rational {
        &self.r
    }

    /// Height.
    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn into_parts(self) -> (Rational, Rational) {
        (self.r, self.s)
    }

    pub fn is_interior(&self) -> bool {
        self.r > -1 && self.r < 1 && self.s > -1 && self.s < 1
    }

    pub fn on_boundary(&self) -> bool {
        !self.is_interior()
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.r.to_f64(), self.s.to_f64()]
    }

    /// Exact squared Euclidean distance.
    pub fn distance_sq(&self, other: &SquarePoint) -> Rational {
        let dr = Rational::from(&self.r - &other.r);
        let ds = Rational::from(&self.s - &other.s);
        dr.clone() * &dr + ds.clone() * &ds
    }

    /// Exact distance to the boundary of the square in the sup metric.
    pub fn boundary_gap(&self) -> Rational {
        let gr = Rational::from(1 - self.r.clone().abs());
        let gs = Rational::from(1 - self.s.clone().abs());
        gr.min(gs)
    }

    fn unchecked(r: Rational, s: Rational) -> Self {
        SquarePoint { r, s }
    }
}

impl fmt::Display for SquarePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.s)
    }
}

/// The named points of the construction.
pub mod named {
    use super::SquarePoint;

    fn p(r: (i64, i64), s: (i64, i64)) -> SquarePoint {
        SquarePoint::ratio(r, s).expect("named points lie in the square")
    }

    /// Top-left vertex `(-1, 1)`.
    pub fn v1() -> SquarePoint {
        p((-1, 1), (1, 1))
    }
    /// Top-right vertex `(1, 1)`.
    pub fn v2() -> SquarePoint {
        p((1, 1), (1, 1))
    }
    /// Bottom-left vertex `(-1, -1)`.
    pub fn v3() -> SquarePoint {
        p((-1, 1), (-1, 1))
    }
    /// Bottom-right vertex `(1, -1)`.
    pub fn v4() -> SquarePoint {
        p((1, 1), (-1, 1))
    }
    /// Midpoint of the left edge `(-1, 0)`.
    pub fn v5() -> SquarePoint {
        p((-1, 1), (0, 1))
    }
    /// Midpoint of the right edge `(1, 0)`.
    pub fn v6() -> SquarePoint {
        p((1, 1), (0, 1))
    }
    /// Midpoint of the top edge `(0, 1)`.
    pub fn v7() -> SquarePoint {
        p((0, 1), (1, 1))
    }
    /// Midpoint of the bottom edge `(0, -1)`.
    pub fn v8() -> SquarePoint {
        p((0, 1), (-1, 1))
    }
    /// Inner end of the left slit `(-1/2, 0)`.
    pub fn v9() -> SquarePoint {
        p((-1, 2), (0, 1))
    }
    /// Inner end of the right slit `(1/2, 0)`.
    pub fn v0() -> SquarePoint {
        p((1, 2), (0, 1))
    }
    /// The 2-periodic orbit `{(-1, 0), (1, 0)}` of the plane map, as exact
    /// coordinates.
    pub fn w1() -> SquarePoint {
        v5()
    }
    pub fn w2() -> SquarePoint {
        v6()
    }
}

/// Which formula of the square map applies at a height.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegionTag {
    // forward split
    R0,
    DMinus1,
    RMinus2,
    // inverse split
    R1,
    D0,
    RMinus1,
}

impl RegionTag {
    pub fn forward(s: &Rational) -> Self {
        if *s >= 0 {
            RegionTag::R0
        } else if *s >= Rational::from((-1, 2)) {
            RegionTag::DMinus1
        } else {
            RegionTag::RMinus2
        }
    }

    pub fn inverse(s: &Rational) -> Self {
        if *s >= Rational::from((1, 2)) {
            RegionTag::R1
        } else if *s >= 0 {
            RegionTag::D0
        } else {
            RegionTag::RMinus1
        }
    }
}

fn check_j(op: &'static str, v: &Rational) -> Result<()> {
    if *v < -1 || *v > 1 {
        return Err(Error::domain(op, format!("{v} outside J")));
    }
    Ok(())
}

/// The base shift of heights: `(s+1)/2` on `[0, 1]`, `s + 1/2` on
/// `[-1/2, 0]`, `2s + 1` on `[-1, -1/2]`.
pub fn level_shift(s: &Rational, direction: Direction) -> Result<Rational> {
    check_j("level_shift", s)?;
    let half = Rational::from((1, 2));
    Ok(match direction {
        Direction::Forward => {
            if *s >= 0 {
                Rational::from(s + 1u32) / 2u32
            } else if *s >= Rational::from((-1, 2)) {
                Rational::from(s + &half)
            } else {
                Rational::from(s * 2u32) + 1u32
            }
        }
        Direction::Inverse => {
            if *s >= half {
                Rational::from(s * 2u32) - 1u32
            } else if *s >= 0 {
                Rational::from(s - &half)
            } else {
                Rational::from(s - 1u32) / 2u32
            }
        }
    })
}

/// The base shift as a [`PlFunction`].
pub fn level_shift_function() -> PlFunction {
    let q = |n, d| Rational::from((n, d));
    PlFunction::new(vec![(q(-1, 1), q(-1, 1)), (q(-1, 2), q(0, 1)), (q(0, 1), q(1, 2)), (q(1, 1), q(1, 1))])
        .expect("valid breakpoints")
}

/// The standard vertical shift `(r, s) -> (r, level_shift(s))`.
pub fn vertical_shift(p: &SquarePoint, direction: Direction) -> Result<SquarePoint> {
    Ok(SquarePoint::unchecked(p.r.clone(), level_shift(&p.s, direction)?))
}

/// Reflection axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `(r, s) -> (-r, s)`
    Level,
    /// `(r, s) -> (r, -s)`
    Vertical,
}

pub fn reflect(p: &SquarePoint, axis: Axis) -> SquarePoint {
    match axis {
        Axis::Level => SquarePoint::unchecked(Rational::from(-&p.r), p.s.clone()),
        Axis::Vertical => SquarePoint::unchecked(p.r.clone(), Rational::from(-&p.s)),
    }
}

/// `b_n = 1 - 2^-n`: the span on which the `n`-th shear is a translation.
pub fn shear_span(n: u64) -> Rational {
    1 - pow2(-(n as i64))
}

/// The `n`-th shear of `J`: the increasing PL map through
/// `(-1, -1)`, `(-b, -b + 2b/n)`, `(b - 2b/n, b)`, `(1, 1)` with `b = b_n`.
/// It moves every interior point right by at most `2b/n` and translates
/// `[-b, b - 2b/n]` by exactly `2b/n`, so `n` steps carry `-b` to `b`.
pub fn shear_function(n: u64) -> Result<PlFunction> {
    if n < 1 {
        return Err(Error::domain("shear", "n must be at least 1"));
    }
    let b = shear_span(n);
    let step = Rational::from(&b * 2u32) / n;
    let one = Rational::from(1);
    PlFunction::new(vec![
        (-one.clone(), -one.clone()),
        (Rational::from(-&b), Rational::from(&step - &b)),
        (Rational::from(&b - &step), b),
        (one.clone(), one),
    ])
}

pub fn shear(n: u64, r: &Rational, direction: Direction) -> Result<Rational> {
    check_j("shear", r)?;
    shear_function(n)?.apply(r, direction)
}

/// Horizontal rule on a shear zone of level `i`: the identity on level 1 and
/// on odd levels, the shear of block `n(i)` on even levels.
pub fn line_rule(i: u64) -> Result<PlFunction> {
    if i < 1 {
        return Err(Error::domain("line_rule", "level must be at least 1"));
    }
    if i == 1 || i % 2 == 1 {
        return Ok(PlFunction::identity());
    }
    shear_function(block_of(i)?)
}

/// The horizontal slice of the strip shear at height `s` in `[1/2, 1]`.
///
/// Blend zones interpolate affinely in `s` between the rule of the level
/// below (at `lo`) and the rule of their own level (at `mid`), so vertical
/// segments there are carried to straight segments.
pub fn fiber_slice(s: &Rational) -> Result<PlFunction> {
    let d = strip_locate(s)?;
    match d.zone {
        Zone::D1Core | Zone::TopLine => Ok(PlFunction::identity()),
        Zone::BZone => line_rule(d.level),
        Zone::FZone => {
            let below = line_rule(d.level - 1)?;
            let own = line_rule(d.level)?;
            let t = Rational::from(s - &d.lo) / Rational::from(&d.mid - &d.lo);
            PlFunction::blend(&below, &own, &t)
        }
    }
}

/// The strip shear of the upper band: preserves every horizontal line and
/// applies [`fiber_slice`] along it.
pub fn strip_shear(p: &SquarePoint, direction: Direction) -> Result<SquarePoint> {
    if p.s < Rational::from((1, 2)) || p.s > 1 {
        return Err(Error::domain("strip_shear", format!("s = {} outside [1/2, 1]", p.s)));
    }
    check_j("strip_shear", &p.r)?;
    let slice = fiber_slice(&p.s)?;
    if slice.is_identity() {
        return Ok(p.clone());
    }
    Ok(SquarePoint::unchecked(slice.apply(&p.r, direction)?, p.s.clone()))
}

/// The upper map `J x [0, 1] -> J x [1/2, 1]`: shift, mirror, shear.
pub fn upper_map(p: &SquarePoint, direction: Direction) -> Result<SquarePoint> {
    match direction {
        Direction::Forward => {
            if p.s < 0 {
                return Err(Error::domain("upper_map", format!("s = {} < 0", p.s)));
            }
            let shifted = vertical_shift(p, Direction::Forward)?;
            strip_shear(&reflect(&shifted, Axis::Level), Direction::Forward)
        }
        Direction::Inverse => {
            if p.s < Rational::from((1, 2)) {
                return Err(Error::domain("upper_map", format!("s = {} < 1/2", p.s)));
            }
            let unsheared = strip_shear(p, Direction::Inverse)?;
            vertical_shift(&reflect(&unsheared, Axis::Level), Direction::Inverse)
        }
    }
}

/// The lower map `J x [-1, 0] -> J x [-1, -1/2]`: the upper map conjugated
/// by the vertical flip.
pub fn lower_map(p: &SquarePoint, direction: Direction) -> Result<SquarePoint> {
    match direction {
        Direction::Forward if p.s > 0 => Err(Error::domain("lower_map", format!("s = {} > 0", p.s))),
        Direction::Inverse if p.s > Rational::from((-1, 2)) => {
            Err(Error::domain("lower_map", format!("s = {} > -1/2", p.s)))
        }
        _ => {
            let up = upper_map(&reflect(p, Axis::Vertical), direction)?;
            Ok(reflect(&up, Axis::Vertical))
        }
    }
}

/// The square homeomorphism: upper map on `s >= 0`, mirrored shift on
/// `[-1/2, 0)`, inverse lower map below `-1/2`.
pub fn homeomorphism(p: &SquarePoint, direction: Direction) -> Result<SquarePoint> {
    check_j("homeomorphism", &p.r)?;
    check_j("homeomorphism", &p.s)?;
    match direction {
        Direction::Forward => match RegionTag::forward(&p.s) {
            RegionTag::R0 => upper_map(p, Direction::Forward),
            RegionTag::DMinus1 => vertical_shift(&reflect(p, Axis::Level), Direction::Forward),
            _ => lower_map(p, Direction::Inverse),
        },
        Direction::Inverse => match RegionTag::inverse(&p.s) {
            RegionTag::R1 => upper_map(p, Direction::Inverse),
            RegionTag::D0 => Ok(reflect(&vertical_shift(p, Direction::Inverse)?, Axis::Level)),
            _ => lower_map(p, Direction::Forward),
        },
    }
}

/// Identifies the affine (or bilinear) cell of the square map containing
/// `p`: points with equal cells are mapped by one smooth formula.
pub fn cell_of(p: &SquarePoint) -> Result<Vec<i64>> {
    let mut cell = Vec::with_capacity(5);
    let tag = RegionTag::forward(&p.s);
    cell.push(tag as i64);
    // the height piece of the base shift
    cell.push(level_shift_function().segment_of(&p.s)? as i64);
    let (mirror, top) = match tag {
        RegionTag::R0 => (Rational::from(-&p.r), level_shift(&p.s, Direction::Forward)?),
        RegionTag::RMinus2 => (p.r.clone(), Rational::from(-&p.s)),
        _ => return Ok(cell),
    };
    let d = strip_locate(&top)?;
    cell.push(d.level.min(i64::MAX as u64) as i64);
    cell.push(d.zone as i64);
    let slice = fiber_slice(&top)?;
    let along = match tag {
        RegionTag::R0 => mirror,
        // inverse direction: locate the preimage segment on the y side
        _ => slice.eval_inverse(&mirror)?,
    };
    cell.push(slice.segment_of(&along)? as i64);
    Ok(cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn pt(r: (i64, i64), s: (i64, i64)) -> SquarePoint {
        SquarePoint::ratio(r, s).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng) -> SquarePoint {
        let mut c = || {
            let d: i64 = rng.gen_range(1..100_000);
            q(rng.gen_range(-d..=d), d)
        };
        SquarePoint::new(c(), c()).unwrap()
    }

    #[test]
    fn level_shift_examples() {
        assert_eq!(level_shift(&q(0, 1), Direction::Forward).unwrap(), q(1, 2));
        assert_eq!(level_shift(&q(-3, 4), Direction::Forward).unwrap(), q(-1, 2));
        assert_eq!(level_shift(&q(1, 1), Direction::Forward).unwrap(), q(1, 1));
        assert!(level_shift(&q(5, 4), Direction::Forward).is_err());
    }

    #[test]
    fn level_shift_matches_its_pl_form() {
        let f = level_shift_function();
        for k in -64..=64 {
            let s = q(k, 64);
            for dir in [Direction::Forward, Direction::Inverse] {
                assert_eq!(level_shift(&s, dir).unwrap(), f.apply(&s, dir).unwrap());
            }
            if s > -1 && s < 1 {
                assert!(level_shift(&s, Direction::Forward).unwrap() > s);
            }
        }
    }

    #[test]
    fn vertical_shift_examples() {
        assert_eq!(vertical_shift(&pt((1, 4), (0, 1)), Direction::Forward).unwrap(), pt((1, 4), (1, 2)));
        assert_eq!(vertical_shift(&pt((-1, 1), (-1, 1)), Direction::Forward).unwrap(), pt((-1, 1), (-1, 1)));
        assert_eq!(vertical_shift(&pt((0, 1), (3, 4)), Direction::Inverse).unwrap(), pt((0, 1), (1, 2)));
    }

    #[test]
    fn reflection_examples_and_commutation() {
        assert_eq!(reflect(&pt((1, 3), (1, 4)), Axis::Level), pt((-1, 3), (1, 4)));
        assert_eq!(reflect(&pt((0, 1), (0, 1)), Axis::Level), pt((0, 1), (0, 1)));
        assert_eq!(reflect(&pt((1, 3), (1, 4)), Axis::Vertical), pt((1, 3), (-1, 4)));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let p = random_point(&mut rng);
            let a = reflect(&vertical_shift(&p, Direction::Forward).unwrap(), Axis::Level);
            let b = vertical_shift(&reflect(&p, Axis::Level), Direction::Forward).unwrap();
            assert_eq!(a, b);
            let c = reflect(&vertical_shift(&p, Direction::Forward).unwrap(), Axis::Vertical);
            let d = vertical_shift(&reflect(&p, Axis::Vertical), Direction::Inverse).unwrap();
            assert_eq!(c, d);
            assert_eq!(reflect(&reflect(&p, Axis::Vertical), Axis::Vertical), p);
        }
    }

    #[test]
    fn shear_examples() {
        assert_eq!(shear(1, &q(-1, 2), Direction::Forward).unwrap(), q(1, 2));
        assert_eq!(shear(1, &q(0, 1), Direction::Forward).unwrap(), q(2, 3));
        assert_eq!(shear(3, &q(1, 1), Direction::Forward).unwrap(), q(1, 1));
        assert!(shear(0, &q(0, 1), Direction::Forward).is_err());
    }

    #[test]
    fn shear_meets_its_constraints() {
        for n in 1..=12u64 {
            let b = shear_span(n);
            let step = Rational::from(&b * 2u32) / n;
            let f = shear_function(n).unwrap();
            // n translations carry -b to b
            let mut x = Rational::from(-&b);
            for _ in 0..n {
                x = f.eval(&x).unwrap();
            }
            assert_eq!(x, b, "n = {n}");
            for k in -999..=999 {
                let r = q(k, 1000);
                let moved = Rational::from(f.eval(&r).unwrap() - &r);
                assert!(moved > 0 && moved <= step, "n = {n}, r = {r}");
                if r >= Rational::from(-&b) && r <= Rational::from(&b - &step) {
                    assert_eq!(moved, step);
                }
            }
        }
    }

    #[test]
    fn line_rule_examples() {
        assert!(line_rule(3).unwrap().is_identity());
        assert_eq!(line_rule(2).unwrap(), shear_function(1).unwrap());
        assert!(line_rule(1).unwrap().is_identity());
        assert_eq!(line_rule(12).unwrap(), shear_function(3).unwrap());
        assert!(line_rule(0).is_err());
    }

    #[test]
    fn strip_shear_examples() {
        let id = |p: SquarePoint| strip_shear(&p, Direction::Forward).unwrap();
        assert_eq!(id(pt((1, 3), (5, 8))), pt((1, 3), (5, 8)));
        assert_eq!(id(pt((0, 1), (13, 16))), pt((2, 3), (13, 16)));
        assert_eq!(id(pt((1, 4), (29, 32))), pt((1, 4), (29, 32)));
        assert!(strip_shear(&pt((0, 1), (1, 4)), Direction::Forward).is_err());
    }

    #[test]
    fn slices_are_continuous_at_zone_seams() {
        for i in 2..40u64 {
            let (_, lo, mid, _) = crate::strips::level_bounds(i).unwrap();
            // blend bottom equals the rule below, blend top equals own rule
            let bottom = fiber_slice(&lo).unwrap();
            let below = if i == 2 { PlFunction::identity() } else { line_rule(i - 1).unwrap() };
            assert_eq!(bottom, below, "level {i} bottom");
            assert_eq!(fiber_slice(&mid).unwrap(), line_rule(i).unwrap(), "level {i} mid");
            // just below mid the blend is close to the own rule
            let eps = pow2(-(i as i64) - 40);
            let near = fiber_slice(&Rational::from(&mid - &eps)).unwrap();
            assert!(near.is_strictly_increasing());
        }
    }

    #[test]
    fn slices_are_increasing_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let d: i64 = rng.gen_range(2..1_000_000);
            let s = q(rng.gen_range(d / 2..=d), d);
            let slice = fiber_slice(&s).unwrap();
            assert!(slice.is_strictly_increasing());
            assert_eq!(slice.knots()[0], (q(-1, 1), q(-1, 1)));
        }
    }

    #[test]
    fn upper_map_examples() {
        assert_eq!(upper_map(&pt((0, 1), (0, 1)), Direction::Forward).unwrap(), pt((0, 1), (1, 2)));
        assert_eq!(upper_map(&pt((1, 1), (1, 3)), Direction::Forward).unwrap(), pt((-1, 1), (2, 3)));
        assert_eq!(upper_map(&pt((1, 4), (1, 4)), Direction::Forward).unwrap(), pt((-1, 4), (5, 8)));
        assert!(upper_map(&pt((0, 1), (-1, 4)), Direction::Forward).is_err());
    }

    #[test]
    fn upper_map_agrees_with_mirrored_shift_on_core_and_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let d: i64 = rng.gen_range(1..10_000);
            let r = q(rng.gen_range(-d..=d), d);
            let s = q(rng.gen_range(0..=d), 2 * d); // in [0, 1/2]
            let p = SquarePoint::new(r, s).unwrap();
            let expected = vertical_shift(&reflect(&p, Axis::Level), Direction::Forward).unwrap();
            assert_eq!(upper_map(&p, Direction::Forward).unwrap(), expected);
        }
        for k in 0..=64 {
            let s = q(k, 64);
            for r in [q(-1, 1), q(1, 1)] {
                let p = SquarePoint::new(r, s.clone()).unwrap();
                let expected = vertical_shift(&reflect(&p, Axis::Level), Direction::Forward).unwrap();
                assert_eq!(upper_map(&p, Direction::Forward).unwrap(), expected);
            }
        }
    }

    #[test]
    fn lower_map_examples() {
        assert_eq!(lower_map(&pt((0, 1), (-1, 4)), Direction::Forward).unwrap(), pt((0, 1), (-5, 8)));
        assert_eq!(lower_map(&pt((0, 1), (0, 1)), Direction::Forward).unwrap(), pt((0, 1), (-1, 2)));
        assert_eq!(lower_map(&pt((1, 1), (-1, 1)), Direction::Forward).unwrap(), pt((-1, 1), (-1, 1)));
    }

    #[test]
    fn homeomorphism_examples() {
        let f = |p: SquarePoint| homeomorphism(&p, Direction::Forward).unwrap();
        assert_eq!(f(pt((0, 1), (0, 1))), pt((0, 1), (1, 2)));
        assert_eq!(f(pt((0, 1), (-3, 4))), pt((0, 1), (-1, 2)));
        assert_eq!(f(pt((3, 5), (1, 1))), pt((-3, 5), (1, 1)));
    }

    #[test]
    fn seams_agree() {
        for k in -32..=32 {
            let r = q(k, 32);
            // s = 0: upper map versus mirrored shift
            let p = SquarePoint::new(r.clone(), q(0, 1)).unwrap();
            assert_eq!(
                upper_map(&p, Direction::Forward).unwrap(),
                vertical_shift(&reflect(&p, Axis::Level), Direction::Forward).unwrap()
            );
            // s = -1/2: mirrored shift versus inverse lower map
            let p = SquarePoint::new(r, q(-1, 2)).unwrap();
            assert_eq!(
                vertical_shift(&reflect(&p, Axis::Level), Direction::Forward).unwrap(),
                lower_map(&p, Direction::Inverse).unwrap()
            );
            assert_eq!(vertical_shift(&reflect(&p, Axis::Level), Direction::Forward).unwrap().s(), &q(0, 1));
        }
    }

    #[test]
    fn exact_round_trip_and_normally_rising() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..2000 {
            let p = random_point(&mut rng);
            let image = homeomorphism(&p, Direction::Forward).unwrap();
            assert_eq!(image.s(), &level_shift(p.s(), Direction::Forward).unwrap());
            assert_eq!(homeomorphism(&image, Direction::Inverse).unwrap(), p);
            let pre = homeomorphism(&p, Direction::Inverse).unwrap();
            assert_eq!(homeomorphism(&pre, Direction::Forward).unwrap(), p);
        }
    }

    #[test]
    fn boundary_edges_are_two_periodic() {
        for k in -50..=50 {
            let r = q(k, 50);
            for s in [q(1, 1), q(-1, 1)] {
                let p = SquarePoint::new(r.clone(), s).unwrap();
                let once = homeomorphism(&p, Direction::Forward).unwrap();
                assert_eq!(once, reflect(&p, Axis::Level));
                assert_eq!(homeomorphism(&once, Direction::Forward).unwrap(), p);
            }
        }
    }

    #[test]
    fn cells_are_stable_inside_pieces() {
        let a = cell_of(&pt((1, 3), (1, 5))).unwrap();
        let b = cell_of(&pt((1, 3) , (1, 5))).unwrap();
        assert_eq!(a, b);
        assert_ne!(cell_of(&pt((0, 1), (1, 5))).unwrap(), cell_of(&pt((0, 1), (-1, 5))).unwrap());
    }
}
