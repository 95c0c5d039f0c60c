//! The boundary-collapse map of the square and its inverse off the slits.
//!
//! The map acts on the right half `[0, 1] x [-1, 1]` and is extended to the
//! left half by the mirror `(r, s) -> (-r, s)`. On the right half it is a
//! composition of three charts:
//!
//! 1. a polar chart around `v6 = (1, 0)`: fan angle `alpha` in `[0, pi]`
//!    (`0` points down the right edge, `pi` up it) and relative radius
//!    `rho = max(1 - r, |s|)` in `[0, 1]`;
//! 2. a cone map between the rectangles `[0, pi] x [0, 1]` and
//!    `[0, 2 pi] x [0, 1]`, built from a pinned homeomorphism of their
//!    boundaries;
//! 3. a polar chart around `v0 = (1/2, 0)` with angle `theta` in
//!    `[0, 2 pi]` measured from the slit `[v0, v6]` and relative radius
//!    `max(2 |r - 1/2|, |s|)`.
//!
//! The pins send the fiber `{0} x J` to itself pointwise, the right edge to
//! `v0`, the segments of the top and bottom edges next to the right corners
//! onto the two sides of the slit, and the rest of those edges around the
//! boundary. Every pin is symmetric under `(alpha, theta) -> (pi - alpha,
//! 2 pi - theta)`, which is what makes the map commute with the vertical
//! flip.

use rug::float::Constant;
use rug::ops::NegAssign;

use crate::error::{Error, Result};
use crate::numerics::{angle_normalize, BigFloat, PlanePoint, Precision, Rational};
use crate::square_map::SquarePoint;

/// Polar coordinates around `v6`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartU {
    pub alpha: BigFloat,
    pub rho: BigFloat,
}

/// Polar coordinates around `v0`, cut along the slit `[v0, v6]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartV {
    pub theta: BigFloat,
    pub rho: BigFloat,
}

/// Centre of a polar chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Center {
    /// `(1, 0)`, the source chart.
    V6,
    /// `(1/2, 0)`, the target chart.
    V0,
}

#[derive(Clone, Debug)]
enum SourceSide {
    /// `rho = 1`
    Top(BigFloat),
    /// `rho = 0` (the point `v6`)
    Bottom(BigFloat),
    /// `alpha = 0` (lower half of the right edge)
    Left(BigFloat),
    /// `alpha = pi` (upper half of the right edge)
    Right(BigFloat),
}

#[derive(Clone, Debug)]
enum TargetSide {
    /// `rho' = 1`
    Top(BigFloat),
    /// `rho' = 0` (the point `v0`)
    Bottom(BigFloat),
    /// `theta = 0` (upper side of the slit)
    Left(BigFloat),
    /// `theta = 2 pi` (lower side of the slit)
    Right(BigFloat),
}

/// The collapse map at a fixed working precision.
#[derive(Clone, Debug)]
pub struct Collapse {
    prec: Precision,
    pi: BigFloat,
    half_pi: BigFloat,
    two_pi: BigFloat,
    eighth_pi: BigFloat,
    quarter_pi: BigFloat,
    three_quarter_pi: BigFloat,
    seven_eighth_pi: BigFloat,
    two_thirds_pi: BigFloat,
    four_thirds_pi: BigFloat,
    /// `arctan 2`, the angle from `v0` to `v2`.
    atan_two: BigFloat,
    v0: PlanePoint,
    v6: PlanePoint,
}

impl Collapse {
    pub fn new(prec: Precision) -> Self {
        let bits = prec.bits();
        let pi = BigFloat::with_val(bits, Constant::Pi);
        let f = |v: BigFloat| v;
        Collapse {
            prec,
            half_pi: f(pi.clone() / 2u32),
            two_pi: f(pi.clone() * 2u32),
            eighth_pi: f(pi.clone() / 8u32),
            quarter_pi: f(pi.clone() / 4u32),
            three_quarter_pi: f(pi.clone() * 3u32 / 4u32),
            seven_eighth_pi: f(pi.clone() * 7u32 / 8u32),
            two_thirds_pi: f(pi.clone() * 2u32 / 3u32),
            four_thirds_pi: f(pi.clone() * 4u32 / 3u32),
            atan_two: BigFloat::with_val(bits, 2).atan(),
            v0: PlanePoint::from_f64(prec, 0.5, 0.0),
            v6: PlanePoint::from_f64(prec, 1.0, 0.0),
            pi,
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn pi(&self) -> &BigFloat {
        &self.pi
    }

    fn val<T>(&self, v: T) -> BigFloat
    where
        BigFloat: rug::Assign<T>,
    {
        BigFloat::with_val(self.prec.bits(), v)
    }

    fn num(&self, v: f64) -> BigFloat {
        self.prec.float(v)
    }

    fn clamp(&self, v: BigFloat, lo: &BigFloat, hi: &BigFloat) -> BigFloat {
        if v < *lo {
            lo.clone()
        } else if v > *hi {
            hi.clone()
        } else {
            v
        }
    }

    fn clamp_unit(&self, v: BigFloat) -> BigFloat {
        let (zero, one) = (self.num(0.0), self.num(1.0));
        self.clamp(v, &zero, &one)
    }

    /// Unit direction of the ray with the given chart angle, and the scale
    /// `1 / exit distance` of that ray (the sup-norm radius of the rectangle
    /// relative to the centre).
    fn ray(&self, center: Center, angle: &BigFloat) -> (BigFloat, BigFloat, BigFloat) {
        let (sin, cos) = angle.clone().sin_cos(self.num(0.0));
        match center {
            Center::V6 => {
                // direction (-sin a, -cos a), rectangle half-widths (1, 1)
                let mut dx = sin.clone();
                dx.neg_assign();
                let mut dy = cos.clone();
                dy.neg_assign();
                let scale = sin.max(&cos.abs());
                (dx, dy, scale)
            }
            Center::V0 => {
                // direction (cos t, sin t), rectangle half-widths (1/2, 1)
                let scale = (cos.clone().abs() * 2u32).max(&sin.clone().abs());
                (cos, sin, scale)
            }
        }
    }

    fn center_point(&self, center: Center) -> &PlanePoint {
        match center {
            Center::V6 => &self.v6,
            Center::V0 => &self.v0,
        }
    }

    /// Where the ray from `center` at `angle` leaves the rectangle
    /// `[0, 1] x [-1, 1]`.
    pub fn exit_point(&self, center: Center, angle: &BigFloat) -> Result<PlanePoint> {
        let max = match center {
            Center::V6 => &self.pi,
            Center::V0 => &self.two_pi,
        };
        if angle.is_sign_negative() && !angle.is_zero() || *angle > *max {
            return Err(Error::domain("exit_point", format!("angle {angle} out of range")));
        }
        Ok(self.along_ray(center, angle, &self.num(1.0)))
    }

    fn along_ray(&self, center: Center, angle: &BigFloat, rho: &BigFloat) -> PlanePoint {
        let (dx, dy, scale) = self.ray(center, angle);
        let c = self.center_point(center);
        let k = BigFloat::with_val(self.prec.bits(), rho / &scale);
        PlanePoint::new(
            BigFloat::with_val(self.prec.bits(), &c.x + &dx * &k),
            BigFloat::with_val(self.prec.bits(), &c.y + &dy * &k),
        )
    }

    /// Source chart: `(alpha, rho)` of a point of the right half.
    pub fn chart_s(&self, x: &PlanePoint) -> Result<ChartU> {
        let bits = self.prec.bits();
        let gap = BigFloat::with_val(bits, 1 - &x.x);
        if gap.is_zero() && x.y.is_zero() {
            return Err(Error::degenerate("chart_s", "the centre v6 has no direction"));
        }
        let mut down = BigFloat::with_val(bits, &x.y);
        down.neg_assign();
        let alpha = BigFloat::with_val(bits, gap.atan2_ref(&down));
        let rho = self.clamp_unit(gap.max(&BigFloat::with_val(bits, x.y.abs_ref())));
        Ok(ChartU { alpha, rho })
    }

    pub fn chart_s_inv(&self, u: &ChartU) -> PlanePoint {
        let alpha = self.clamp(u.alpha.clone(), &self.num(0.0), &self.pi);
        let p = self.along_ray(Center::V6, &alpha, &self.clamp_unit(u.rho.clone()));
        self.clamp_to_right_half(p)
    }

    /// Target chart: `(theta, rho')` of a point of the right half off the
    /// slit `[v0, v6]`.
    pub fn chart_t(&self, y: &PlanePoint) -> Result<ChartV> {
        let bits = self.prec.bits();
        if y.y.is_zero() && y.x >= 0.5 {
            return Err(Error::OnSlit(y.to_string()));
        }
        let theta = angle_normalize(y, &self.v0)?;
        let off = BigFloat::with_val(bits, &y.x - 0.5f64).abs() * 2u32;
        let rho = self.clamp_unit(off.max(&BigFloat::with_val(bits, y.y.abs_ref())));
        Ok(ChartV {
            theta: BigFloat::with_val(bits, theta),
            rho,
        })
    }

    pub fn chart_t_inv(&self, v: &ChartV) -> PlanePoint {
        let theta = self.clamp(v.theta.clone(), &self.num(0.0), &self.two_pi);
        let p = self.along_ray(Center::V0, &theta, &self.clamp_unit(v.rho.clone()));
        self.clamp_to_right_half(p)
    }

    fn clamp_to_right_half(&self, p: PlanePoint) -> PlanePoint {
        let (zero, one, minus_one) = (self.num(0.0), self.num(1.0), self.num(-1.0));
        PlanePoint::new(self.clamp(p.x, &zero, &one), self.clamp(p.y, &minus_one, &one))
    }

    fn source_side(&self, u: &ChartU) -> Result<SourceSide> {
        if u.rho == 1 {
            Ok(SourceSide::Top(u.alpha.clone()))
        } else if u.rho.is_zero() {
            Ok(SourceSide::Bottom(u.alpha.clone()))
        } else if u.alpha.is_zero() {
            Ok(SourceSide::Left(u.rho.clone()))
        } else if u.alpha == self.pi {
            Ok(SourceSide::Right(u.rho.clone()))
        } else {
            Err(Error::domain("boundary_reparam", "point is not on the chart boundary"))
        }
    }

    fn target_side(&self, v: &ChartV) -> Result<TargetSide> {
        if v.rho == 1 {
            Ok(TargetSide::Top(v.theta.clone()))
        } else if v.rho.is_zero() {
            Ok(TargetSide::Bottom(v.theta.clone()))
        } else if v.theta.is_zero() {
            Ok(TargetSide::Left(v.rho.clone()))
        } else if v.theta == self.two_pi {
            Ok(TargetSide::Right(v.rho.clone()))
        } else {
            Err(Error::domain("boundary_reparam", "point is not on the chart boundary"))
        }
    }

    /// The pinned homeomorphism between the two chart boundaries.
    pub fn boundary_reparam(&self, b: &ChartU) -> Result<ChartV> {
        let side = self.source_side(b)?;
        Ok(self.target_of(self.lambda(&side)))
    }

    /// Inverse of [`Collapse::boundary_reparam`].
    pub fn boundary_reparam_inv(&self, b: &ChartV) -> Result<ChartU> {
        let side = self.target_side(b)?;
        Ok(self.source_of(self.lambda_inv(&side)))
    }

    fn target_of(&self, side: TargetSide) -> ChartV {
        let bits = self.prec.bits();
        match side {
            TargetSide::Top(theta) => ChartV { theta, rho: self.num(1.0) },
            TargetSide::Bottom(theta) => ChartV { theta, rho: self.num(0.0) },
            TargetSide::Left(rho) => ChartV { theta: BigFloat::new(bits), rho },
            TargetSide::Right(rho) => ChartV { theta: self.two_pi.clone(), rho },
        }
    }

    fn source_of(&self, side: SourceSide) -> ChartU {
        let bits = self.prec.bits();
        match side {
            SourceSide::Top(alpha) => ChartU { alpha, rho: self.num(1.0) },
            SourceSide::Bottom(alpha) => ChartU { alpha, rho: self.num(0.0) },
            SourceSide::Left(rho) => ChartU { alpha: BigFloat::new(bits), rho },
            SourceSide::Right(rho) => ChartU { alpha: self.pi.clone(), rho },
        }
    }

    fn lambda(&self, side: &SourceSide) -> TargetSide {
        match side {
            SourceSide::Top(alpha) => {
                let alpha = self.clamp(alpha.clone(), &self.num(0.0), &self.pi);
                if alpha <= self.eighth_pi {
                    // bottom edge next to v4 -> lower side of the slit
                    TargetSide::Right(self.clamp_unit(self.val(alpha * 8u32 / &self.pi)))
                } else if alpha <= self.quarter_pi {
                    // theta runs affinely from 2 pi down to pi + atan 2 (v8)
                    let frac = self.val((alpha - &self.eighth_pi) / &self.eighth_pi);
                    let span = self.val(&self.pi - &self.atan_two);
                    TargetSide::Top(self.val(&self.two_pi - frac * span))
                } else if alpha <= self.three_quarter_pi {
                    // the fiber {0} x J, fixed pointwise
                    let slope = self.val(alpha - &self.half_pi).tan() * 2u32;
                    TargetSide::Top(self.val(&self.pi - slope.atan()))
                } else if alpha <= self.seven_eighth_pi {
                    // theta runs affinely from pi - atan 2 (v7) down to 0
                    let frac = self.val((alpha - &self.three_quarter_pi) / &self.eighth_pi);
                    let span = self.val(&self.pi - &self.atan_two);
                    TargetSide::Top(self.val(span.clone() - frac * span))
                } else {
                    // top edge next to v2 -> upper side of the slit
                    TargetSide::Left(self.clamp_unit(self.val((self.val(&self.pi - alpha)) * 8u32 / &self.pi)))
                }
            }
            SourceSide::Right(rho) => {
                TargetSide::Bottom(self.val(self.val(1 - rho.clone()) * &self.two_thirds_pi))
            }
            SourceSide::Bottom(alpha) => {
                let frac = self.val(1 - self.val(alpha.clone() / &self.pi));
                TargetSide::Bottom(self.val(&self.two_thirds_pi + frac * &self.two_thirds_pi))
            }
            SourceSide::Left(rho) => {
                TargetSide::Bottom(self.val(&self.four_thirds_pi + rho.clone() * &self.two_thirds_pi))
            }
        }
    }

    fn lambda_inv(&self, side: &TargetSide) -> SourceSide {
        let upper_v8 = self.val(&self.pi + &self.atan_two);
        let lower_v7 = self.val(&self.pi - &self.atan_two);
        match side {
            TargetSide::Right(rho) => SourceSide::Top(self.val(rho.clone() * &self.eighth_pi)),
            TargetSide::Left(rho) => SourceSide::Top(self.val(&self.pi - self.val(rho.clone() * &self.eighth_pi))),
            TargetSide::Top(theta) => {
                let theta = self.clamp(theta.clone(), &self.num(0.0), &self.two_pi);
                if theta >= upper_v8 {
                    let frac = self.val(self.val(&self.two_pi - theta) / self.val(&self.pi - &self.atan_two));
                    SourceSide::Top(self.val(&self.eighth_pi + frac * &self.eighth_pi))
                } else if theta >= lower_v7 {
                    let slope = self.val(self.val(&self.pi - theta).tan() / 2u32);
                    SourceSide::Top(self.val(&self.half_pi + slope.atan()))
                } else {
                    let frac = self.val(1 - self.val(theta / &lower_v7));
                    SourceSide::Top(self.val(&self.three_quarter_pi + frac * &self.eighth_pi))
                }
            }
            TargetSide::Bottom(theta) => {
                let theta = self.clamp(theta.clone(), &self.num(0.0), &self.two_pi);
                if theta <= self.two_thirds_pi {
                    SourceSide::Right(self.clamp_unit(self.val(1 - self.val(theta / &self.two_thirds_pi))))
                } else if theta <= self.four_thirds_pi {
                    let frac = self.val(self.val(theta - &self.two_thirds_pi) / &self.two_thirds_pi);
                    SourceSide::Bottom(self.clamp(self.val(self.val(1 - frac) * &self.pi), &self.num(0.0), &self.pi))
                } else {
                    let frac = self.val(self.val(theta - &self.four_thirds_pi) / &self.two_thirds_pi);
                    SourceSide::Left(self.clamp_unit(frac))
                }
            }
        }
    }

    /// Cone extension of the boundary pins from the centre `(pi/2, 1/2)` of
    /// the source rectangle to the centre `(pi, 1/2)` of the target.
    pub fn cone_map(&self, u: &ChartU) -> ChartV {
        let half = self.num(0.5);
        let alpha = self.clamp(u.alpha.clone(), &self.num(0.0), &self.pi);
        let rho = self.clamp_unit(u.rho.clone());
        let da = self.val(&alpha - &self.half_pi);
        let dr = self.val(&rho - &half);
        let a = self.val(da.clone() / &self.half_pi);
        let b = self.val(dr.clone() * 2u32);
        let t = self.val(a.clone().abs()).max(&self.val(b.clone().abs()));
        if t.is_zero() {
            return ChartV {
                theta: self.pi.clone(),
                rho: half,
            };
        }
        let side = if self.val(a.clone().abs()) >= self.val(b.clone().abs()) {
            let rb = self.clamp_unit(self.val(&half + self.val(dr / &t)));
            if a.is_sign_positive() {
                SourceSide::Right(rb)
            } else {
                SourceSide::Left(rb)
            }
        } else {
            let ab = self.clamp(self.val(&self.half_pi + self.val(da / &t)), &self.num(0.0), &self.pi);
            if b.is_sign_positive() {
                SourceSide::Top(ab)
            } else {
                SourceSide::Bottom(ab)
            }
        };
        let target = self.target_of(self.lambda(&side));
        ChartV {
            theta: self.val(&self.pi + self.val(self.val(target.theta - &self.pi) * &t)),
            rho: self.val(&half + self.val(self.val(target.rho - &half) * &t)),
        }
    }

    /// Inverse of [`Collapse::cone_map`].
    pub fn cone_map_inv(&self, v: &ChartV) -> ChartU {
        let half = self.num(0.5);
        let theta = self.clamp(v.theta.clone(), &self.num(0.0), &self.two_pi);
        let rho = self.clamp_unit(v.rho.clone());
        let dt = self.val(&theta - &self.pi);
        let dr = self.val(&rho - &half);
        let a = self.val(dt.clone() / &self.pi);
        let b = self.val(dr.clone() * 2u32);
        let t = self.val(a.clone().abs()).max(&self.val(b.clone().abs()));
        if t.is_zero() {
            return ChartU {
                alpha: self.half_pi.clone(),
                rho: half,
            };
        }
        let side = if self.val(a.clone().abs()) >= self.val(b.clone().abs()) {
            let rb = self.clamp_unit(self.val(&half + self.val(dr / &t)));
            if a.is_sign_positive() {
                TargetSide::Right(rb)
            } else {
                TargetSide::Left(rb)
            }
        } else {
            let tb = self.clamp(self.val(&self.pi + self.val(dt / &t)), &self.num(0.0), &self.two_pi);
            if b.is_sign_positive() {
                TargetSide::Top(tb)
            } else {
                TargetSide::Bottom(tb)
            }
        };
        let source = self.source_of(self.lambda_inv(&side));
        ChartU {
            alpha: self.val(&self.half_pi + self.val(self.val(source.alpha - &self.half_pi) * &t)),
            rho: self.val(&half + self.val(self.val(source.rho - &half) * &t)),
        }
    }

    fn check_square(&self, op: &'static str, x: &PlanePoint) -> Result<()> {
        let inside = |v: &BigFloat| v.is_finite() && *v >= -1 && *v <= 1;
        if !inside(&x.x) || !inside(&x.y) {
            return Err(Error::domain(op, format!("{x} outside J^2")));
        }
        Ok(())
    }

    /// The collapse map on a big-float point of `J^2`.
    pub fn xi(&self, x: &PlanePoint) -> Result<PlanePoint> {
        self.check_square("xi", x)?;
        let x = x.rounded(self.prec);
        if x.x.is_sign_negative() && !x.x.is_zero() {
            return Ok(self.xi_right(&x.mirrored())?.mirrored());
        }
        self.xi_right(&x)
    }

    fn xi_right(&self, x: &PlanePoint) -> Result<PlanePoint> {
        if x.x == 1 {
            // the whole right edge collapses onto v0
            return Ok(self.v0.clone());
        }
        let u = self.chart_s(x)?;
        let v = self.cone_map(&u);
        Ok(self.chart_t_inv(&v))
    }

    /// The collapse map on an exact point, converted at this precision.
    pub fn xi_square(&self, p: &SquarePoint) -> PlanePoint {
        let x = PlanePoint::from_rationals(self.prec, p.r(), p.s());
        self.xi(&x).expect("exact points lie in the square")
    }

    /// Whether `y` lies in the open square minus the two slits, the image
    /// of the open square.
    pub fn in_image_of_interior(&self, y: &PlanePoint) -> bool {
        let open = |v: &BigFloat| v.is_finite() && *v > -1 && *v < 1;
        open(&y.x) && open(&y.y) && !(y.y.is_zero() && BigFloat::with_val(self.prec.bits(), y.x.abs_ref()) >= 0.5)
    }

    /// The unique preimage of a point of the open square off the slits.
    pub fn xi_inv(&self, y: &PlanePoint) -> Result<PlanePoint> {
        let open = |v: &BigFloat| v.is_finite() && *v > -1 && *v < 1;
        if !open(&y.x) || !open(&y.y) {
            return Err(Error::domain("xi_inv", format!("{y} outside the open square")));
        }
        let y = y.rounded(self.prec);
        if y.y.is_zero() && BigFloat::with_val(self.prec.bits(), y.x.abs_ref()) >= 0.5 {
            return Err(Error::OnSlit(y.to_string()));
        }
        if y.x.is_sign_negative() && !y.x.is_zero() {
            return Ok(self.xi_inv_right(&y.mirrored())?.mirrored());
        }
        self.xi_inv_right(&y)
    }

    fn xi_inv_right(&self, y: &PlanePoint) -> Result<PlanePoint> {
        let v = self.chart_t(y)?;
        let u = self.cone_map_inv(&v);
        Ok(self.chart_s_inv(&u))
    }

    /// `xi_inv` followed by the exact conversion of the (dyadic) result.
    pub fn xi_inv_exact(&self, y: &PlanePoint) -> Result<SquarePoint> {
        let x = self.xi_inv(y)?;
        let r = crate::numerics::float_to_rational(&x.x)?;
        let s = crate::numerics::float_to_rational(&x.y)?;
        SquarePoint::new(r.clamp(&Rational::from(-1), &Rational::from(1)), s.clamp(&Rational::from(-1), &Rational::from(1)))
    }
}

impl Default for Collapse {
    fn default() -> Self {
        Collapse::new(Precision::DEFAULT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TIGHT: f64 = 1e-60;

    fn ctx() -> Collapse {
        Collapse::default()
    }

    fn pp(x: f64, y: f64) -> PlanePoint {
        PlanePoint::from_f64(Precision::DEFAULT, x, y)
    }

    fn close(a: &PlanePoint, b: &PlanePoint, tol: f64) -> bool {
        a.distance(b) < tol
    }

    fn near(a: &BigFloat, b: &BigFloat, tol: f64) -> bool {
        BigFloat::with_val(a.prec(), a - b).abs() < tol
    }

    #[test]
    fn exit_point_examples() {
        let c = ctx();
        let half_pi = BigFloat::with_val(256, c.pi() / 2u32);
        assert!(close(&c.exit_point(Center::V6, &half_pi).unwrap(), &pp(0.0, 0.0), TIGHT));
        assert!(close(&c.exit_point(Center::V0, &half_pi).unwrap(), &pp(0.5, 1.0), TIGHT));
        let to_v7 = BigFloat::with_val(256, 1).atan2(&BigFloat::with_val(256, -0.5));
        assert!(close(&c.exit_point(Center::V0, &to_v7).unwrap(), &pp(0.0, 1.0), TIGHT));
        let corner = BigFloat::with_val(256, c.pi() / 4u32);
        assert!(close(&c.exit_point(Center::V6, &corner).unwrap(), &pp(0.0, -1.0), TIGHT));
        assert!(c.exit_point(Center::V6, &BigFloat::with_val(256, 4)).is_err());
    }

    #[test]
    fn source_chart_examples() {
        let c = ctx();
        let pi = c.pi().clone();
        let u = c.chart_s(&pp(0.5, 0.5)).unwrap();
        assert!(near(&u.alpha, &(BigFloat::with_val(256, &pi * 3u32) / 4u32), TIGHT));
        assert!(near(&u.rho, &BigFloat::with_val(256, 0.5), TIGHT));
        let u = c.chart_s(&pp(0.25, 0.0)).unwrap();
        assert!(near(&u.alpha, &BigFloat::with_val(256, &pi / 2u32), TIGHT));
        assert!(near(&u.rho, &BigFloat::with_val(256, 0.75), TIGHT));
        let back = c.chart_s_inv(&ChartU {
            alpha: BigFloat::with_val(256, &pi / 2u32),
            rho: BigFloat::with_val(256, 1),
        });
        assert!(close(&back, &pp(0.0, 0.0), TIGHT));
        assert!(c.chart_s(&pp(1.0, 0.0)).is_err());
    }

    #[test]
    fn target_chart_examples() {
        let c = ctx();
        let pi = c.pi().clone();
        let v = c.chart_t(&pp(0.5, 0.5)).unwrap();
        assert!(near(&v.theta, &BigFloat::with_val(256, &pi / 2u32), TIGHT));
        assert!(near(&v.rho, &BigFloat::with_val(256, 0.5), TIGHT));
        let v = c.chart_t(&pp(0.0, 1.0)).unwrap();
        assert!((v.theta.to_f64() - 1f64.atan2(-0.5)).abs() < 1e-12);
        assert_eq!(v.rho, 1);
        let back = c.chart_t_inv(&ChartV {
            theta: pi.clone(),
            rho: BigFloat::with_val(256, 2) / 3u32,
        });
        assert!(close(&back, &PlanePoint::new(BigFloat::with_val(256, 1) / 6u32, BigFloat::new(256)), TIGHT));
        assert!(matches!(c.chart_t(&pp(0.75, 0.0)), Err(Error::OnSlit(_))));
    }

    #[test]
    fn boundary_pins() {
        let c = ctx();
        let pi = c.pi().clone();
        let at = |alpha: BigFloat, rho: f64| ChartU { alpha, rho: BigFloat::with_val(256, rho) };
        let v = c.boundary_reparam(&at(BigFloat::with_val(256, &pi / 2u32), 1.0)).unwrap();
        assert!(near(&v.theta, &pi, TIGHT) && v.rho == 1);
        let v = c.boundary_reparam(&at(BigFloat::with_val(256, &pi / 8u32), 1.0)).unwrap();
        assert!(near(&v.theta, &BigFloat::with_val(256, &pi * 2u32), TIGHT));
        assert!(near(&v.rho, &BigFloat::with_val(256, 1), TIGHT));
        let v = c.boundary_reparam(&at(pi.clone(), 0.5)).unwrap();
        assert!(near(&v.theta, &BigFloat::with_val(256, &pi / 3u32), TIGHT) && v.rho.is_zero());
        assert!(c.boundary_reparam(&at(BigFloat::with_val(256, 1), 0.5)).is_err());
    }

    #[test]
    fn boundary_pins_are_continuous_and_invertible() {
        let c = ctx();
        let pi = c.pi().clone();
        // walk the source boundary and check the image moves continuously
        let mut samples = Vec::new();
        let n = 4000;
        for k in 0..=n {
            let alpha = BigFloat::with_val(256, &pi * k as u32) / n as u32;
            samples.push(ChartU { alpha, rho: BigFloat::with_val(256, 1) });
        }
        for k in 0..=n {
            let rho = BigFloat::with_val(256, n - k) / n as u32;
            samples.push(ChartU { alpha: pi.clone(), rho });
        }
        for k in 0..=n {
            let alpha = BigFloat::with_val(256, &pi * (n - k) as u32) / n as u32;
            samples.push(ChartU { alpha, rho: BigFloat::new(256) });
        }
        for k in 0..=n {
            let rho = BigFloat::with_val(256, k) / n as u32;
            samples.push(ChartU { alpha: BigFloat::new(256), rho });
        }
        let mut prev: Option<ChartV> = None;
        for u in &samples {
            let v = c.boundary_reparam(u).unwrap();
            let back = c.boundary_reparam_inv(&v).unwrap();
            assert!(near(&back.alpha, &u.alpha, 1e-60) && near(&back.rho, &u.rho, 1e-60), "{u:?}");
            if let Some(p) = prev {
                let jump = (p.theta.to_f64() - v.theta.to_f64()).abs() + (p.rho.to_f64() - v.rho.to_f64()).abs();
                assert!(jump < 0.01, "jump {jump} at {u:?}");
            }
            prev = Some(v);
        }
    }

    #[test]
    fn boundary_pins_are_mirror_symmetric() {
        let c = ctx();
        let pi = c.pi().clone();
        for k in 0..=200u32 {
            let alpha = BigFloat::with_val(256, &pi * k) / 200u32;
            let mirrored = BigFloat::with_val(256, &pi - &alpha);
            let a = c.boundary_reparam(&ChartU { alpha, rho: BigFloat::with_val(256, 1) }).unwrap();
            let b = c.boundary_reparam(&ChartU { alpha: mirrored, rho: BigFloat::with_val(256, 1) }).unwrap();
            let sum = BigFloat::with_val(256, &a.theta + &b.theta);
            assert!(near(&sum, &BigFloat::with_val(256, &pi * 2u32), 1e-60));
            assert!(near(&a.rho, &b.rho, 1e-60));
        }
    }

    #[test]
    fn cone_examples() {
        let c = ctx();
        let pi = c.pi().clone();
        let u = |rho: f64| ChartU { alpha: BigFloat::with_val(256, &pi / 2u32), rho: BigFloat::with_val(256, rho) };
        for rho in [0.5, 0.75, 0.25] {
            let v = c.cone_map(&u(rho));
            assert!(near(&v.theta, &pi, TIGHT), "rho {rho}");
            assert!(near(&v.rho, &BigFloat::with_val(256, rho), TIGHT), "rho {rho}");
        }
    }

    #[test]
    fn cone_round_trip() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..2000 {
            let alpha = BigFloat::with_val(256, c.pi() * rng.gen::<f64>());
            let rho = BigFloat::with_val(256, rng.gen::<f64>());
            let u = ChartU { alpha, rho };
            let back = c.cone_map_inv(&c.cone_map(&u));
            assert!(near(&back.alpha, &u.alpha, 1e-30) && near(&back.rho, &u.rho, 1e-30));
        }
    }

    #[test]
    fn xi_examples() {
        let c = ctx();
        assert!(close(&c.xi(&pp(0.5, 0.0)).unwrap(), &pp(0.25, 0.0), 1e-30));
        let third = BigFloat::with_val(256, 1) / 3u32;
        assert!(close(&c.xi(&PlanePoint::new(BigFloat::with_val(256, 1), third)).unwrap(), &pp(0.5, 0.0), 1e-30));
        let s = crate::numerics::parse_float("-0.7", Precision::DEFAULT).unwrap();
        let x = PlanePoint::new(BigFloat::new(256), s);
        assert!(close(&c.xi(&x).unwrap(), &x, 1e-30));
    }

    #[test]
    fn xi_inv_examples() {
        let c = ctx();
        assert!(close(&c.xi_inv(&pp(0.25, 0.0)).unwrap(), &pp(0.5, 0.0), 1e-30));
        assert!(close(&c.xi_inv(&pp(0.0, 0.5)).unwrap(), &pp(0.0, 0.5), 1e-30));
        let sixth = PlanePoint::new(BigFloat::with_val(256, 1) / 6u32, BigFloat::new(256));
        let third = PlanePoint::new(BigFloat::with_val(256, 1) / 3u32, BigFloat::new(256));
        assert!(close(&c.xi_inv(&sixth).unwrap(), &third, 1e-30));
        assert!(matches!(c.xi_inv(&pp(0.75, 0.0)), Err(Error::OnSlit(_))));
        assert!(matches!(c.xi_inv(&pp(-0.5, 0.0)), Err(Error::OnSlit(_))));
        assert!(c.xi_inv(&pp(0.2, 1.0)).is_err());
    }

    #[test]
    fn edges_collapse_as_pinned() {
        let c = ctx();
        let v0 = pp(0.5, 0.0);
        let v9 = pp(-0.5, 0.0);
        for k in 0..=20 {
            let s = -1.0 + k as f64 / 10.0;
            assert!(close(&c.xi(&pp(1.0, s)).unwrap(), &v0, 1e-30));
            assert!(close(&c.xi(&pp(-1.0, s)).unwrap(), &v9, 1e-30));
        }
        // corners and edge midpoints
        assert!(close(&c.xi(&pp(1.0, 1.0)).unwrap(), &v0, 1e-30));
        assert!(close(&c.xi(&pp(0.0, 1.0)).unwrap(), &pp(0.0, 1.0), 1e-30));
        // the top-edge split point lands on v6
        let split = 1.0 - (std::f64::consts::PI / 8.0).tan();
        let y = c.xi(&pp(split, 1.0)).unwrap();
        assert!(y.distance(&pp(1.0, 0.0)) < 1e-12);
    }

    #[test]
    fn fixes_the_fiber_and_halves_the_axis() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..300 {
            let s = rng.gen_range(-1.0..=1.0);
            let x = pp(0.0, s);
            assert!(close(&c.xi(&x).unwrap(), &x, 1e-60), "fiber {s}");
            let r = rng.gen_range(-1.0..=1.0);
            assert!(close(&c.xi(&pp(r, 0.0)).unwrap(), &pp(r / 2.0, 0.0), 1e-60), "axis {r}");
        }
    }

    #[test]
    fn commutes_with_both_reflections() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..1000 {
            let x = pp(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            let y = c.xi(&x).unwrap();
            assert!(close(&c.xi(&x.flipped()).unwrap(), &y.flipped(), 1e-60));
            assert!(close(&c.xi(&x.mirrored()).unwrap(), &y.mirrored(), 1e-60));
        }
    }

    /// Arc-length position along v7 -> v2 -> v6 -> v0.
    fn path_position(y: &PlanePoint) -> f64 {
        let [x, s] = y.to_f64();
        if (s - 1.0).abs() < 1e-40 {
            x
        } else if (x - 1.0).abs() < 1e-40 {
            2.0 - s
        } else {
            assert!(s.abs() < 1e-40 && x >= 0.5, "{y} off the path");
            3.0 - x
        }
    }

    #[test]
    fn top_right_edge_runs_along_the_collapse_path() {
        let c = ctx();
        let mut last = -1.0;
        for k in 0..=1000 {
            let x = pp(k as f64 / 1000.0, 1.0);
            let pos = path_position(&c.xi(&x).unwrap());
            assert!(pos > last || k == 1000 && pos >= last, "k = {k}: {pos} after {last}");
            last = pos;
        }
        assert!((last - 2.5).abs() < 1e-12);
    }

    #[test]
    fn right_half_interior_round_trips() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..2000 {
            let x = pp(rng.gen_range(-0.999..0.999), rng.gen_range(-0.999..0.999));
            let y = c.xi(&x).unwrap();
            assert!(c.in_image_of_interior(&y), "{x} -> {y}");
            let back = c.xi_inv(&y).unwrap();
            assert!(close(&back, &x, 1e-40), "{x} -> {y} -> {back}");
        }
    }
}
