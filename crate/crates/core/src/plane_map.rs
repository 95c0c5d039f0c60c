//! The plane maps: the tangent chart between the open square and the plane,
//! the square map `g` obtained by pushing `f` through the collapse, and the
//! plane homeomorphism `h` obtained by pushing `g` through the tangent chart.
//!
//! Orbits of `h` are computed by lifting: a seed is pulled back to the exact
//! square once, iterated there with rational arithmetic, and every iterate is
//! pushed out through the collapse and the tangent chart. Late iterates hug
//! the boundary of the square very closely, so each push-out runs at a
//! precision widened by the number of bits needed to resolve the iterate's
//! distance to the boundary, and the result is rounded back to the base
//! precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::NegAssign;

use crate::collapse_map::Collapse;
use crate::error::{Error, Result};
use crate::numerics::{float_to_rational, resolution_bits, BigFloat, Direction, PlanePoint, Precision};
use crate::square_map::{homeomorphism, SquarePoint};

/// Guard bits added on top of every precision estimate.
const GUARD_BITS: u32 = 64;

/// Where a plane point lives once pulled back to the square.
#[derive(Clone, Debug, PartialEq)]
pub enum Lift {
    /// On one of the two rays `|r| >= 1, s = 0`, where `h` is `(r, 0) -> (-r, 0)`.
    Ray(PlanePoint),
    /// An exact interior point of the square.
    Square(SquarePoint),
}

/// Whether `x` lies on one of the rays `(-inf, -1] x {0}` or `[1, inf) x {0}`.
pub fn on_rays(x: &PlanePoint) -> bool {
    x.y.is_zero() && x.x.is_finite() && (x.x >= 1 || x.x <= -1)
}

/// Whether a point of the square lies on the boundary or on one of the two
/// slits, where `g` is the level reflection.
pub fn on_quotient_locus(x: &PlanePoint) -> bool {
    let ax = x.x.clone().abs();
    let ay = x.y.clone().abs();
    ax == 1 || ay == 1 || (x.y.is_zero() && ax >= 0.5)
}

/// `tan(pi v / 2)` for `|v| < 1`, accurate near `+-1` through the cotangent.
fn tan_half_pi(v: &BigFloat, bits: u32) -> BigFloat {
    let pi = BigFloat::with_val(bits, Constant::Pi);
    let av = BigFloat::with_val(bits, v.abs_ref());
    if av <= 0.5 {
        let arg = BigFloat::with_val(bits, v * &pi) / 2u32;
        arg.tan()
    } else {
        let gap = BigFloat::with_val(bits, 1 - &av);
        let arg = BigFloat::with_val(bits, gap * &pi) / 2u32;
        let mut out = arg.cot();
        if v.is_sign_negative() {
            out.neg_assign();
        }
        out
    }
}

/// `(2 / pi) atan(v)`, accurate near `+-1` through the reciprocal.
fn atan_scaled(v: &BigFloat, bits: u32) -> BigFloat {
    let pi = BigFloat::with_val(bits, Constant::Pi);
    let av = BigFloat::with_val(bits, v.abs_ref());
    if av <= 1 {
        BigFloat::with_val(bits, v.atan_ref()) * 2u32 / pi
    } else {
        let inner = BigFloat::with_val(bits, av.recip()).atan() * 2u32 / pi;
        let mut out = BigFloat::with_val(bits, 1 - inner);
        if v.is_sign_negative() {
            out.neg_assign();
        }
        out
    }
}

/// Bits needed on top of `base` to pull `x` back through the tangent chart
/// without collapsing it onto the boundary.
fn magnitude_bits(x: &PlanePoint) -> u32 {
    let exp = |v: &BigFloat| v.get_exp().unwrap_or(0).max(0) as u32;
    exp(&x.x).max(exp(&x.y))
}

/// The plane maps at a base precision, with a cache of collapse contexts at
/// widened precisions.
#[derive(Clone, Debug)]
pub struct PlaneMaps {
    base: Precision,
    cache: Arc<Mutex<HashMap<u32, Arc<Collapse>>>>,
}

impl PlaneMaps {
    pub fn new(base: Precision) -> Self {
        PlaneMaps {
            base,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn precision(&self) -> Precision {
        self.base
    }

    /// The collapse context at the base precision.
    pub fn collapse(&self) -> Arc<Collapse> {
        self.collapse_at(self.base.bits())
    }

    /// A collapse context with at least `bits` of precision; widths are
    /// rounded up to a multiple of 64 so contexts are shared.
    pub fn collapse_at(&self, bits: u32) -> Arc<Collapse> {
        let bits = bits.max(self.base.bits()).div_ceil(64) * 64;
        let mut cache = self.cache.lock().expect("collapse cache poisoned");
        cache
            .entry(bits)
            .or_insert_with(|| Arc::new(Collapse::new(Precision::new(bits).expect("precision in range"))))
            .clone()
    }

    /// The tangent chart `(r, s) -> (tan(pi r / 2), tan(pi s / 2))` from the
    /// open square onto the plane (`Forward`), or its inverse. Works at the
    /// precision of the input, or the base precision if that is wider.
    pub fn tangent_chart(&self, p: &PlanePoint, direction: Direction) -> Result<PlanePoint> {
        let bits = p.prec().max(self.base.bits());
        match direction {
            Direction::Forward => {
                let open = |v: &BigFloat| v.is_finite() && *v > -1 && *v < 1;
                if !open(&p.x) || !open(&p.y) {
                    return Err(Error::domain("tangent_chart", format!("{p} not in the open square")));
                }
                Ok(PlanePoint::new(tan_half_pi(&p.x, bits), tan_half_pi(&p.y, bits)))
            }
            Direction::Inverse => {
                if !p.is_finite() {
                    return Err(Error::domain("tangent_chart", format!("{p} is not finite")));
                }
                Ok(PlanePoint::new(atan_scaled(&p.x, bits), atan_scaled(&p.y, bits)))
            }
        }
    }

    /// The square map `g`: the level reflection on the boundary and the
    /// slits, the collapse-conjugate of `f^{+-1}` elsewhere.
    pub fn g_map(&self, x: &PlanePoint, direction: Direction) -> Result<PlanePoint> {
        let collapse = self.collapse_at(x.prec());
        self.g_with(&collapse, x, direction)
    }

    fn g_with(&self, collapse: &Collapse, x: &PlanePoint, direction: Direction) -> Result<PlanePoint> {
        let inside = |v: &BigFloat| v.is_finite() && *v >= -1 && *v <= 1;
        if !inside(&x.x) || !inside(&x.y) {
            return Err(Error::domain("g_map", format!("{x} outside J^2")));
        }
        if on_quotient_locus(x) {
            return Ok(x.mirrored().rounded(collapse.precision()));
        }
        let w = collapse.xi_inv_exact(x)?;
        let fw = homeomorphism(&w, direction)?;
        Ok(collapse.xi_square(&fw))
    }

    /// The plane homeomorphism `h`, evaluated by direct composition. The
    /// lifted orbit is the accurate tool for long horizons; this is for
    /// single steps and cross-checks.
    pub fn h_map(&self, x: &PlanePoint, direction: Direction) -> Result<PlanePoint> {
        if !x.is_finite() {
            return Err(Error::domain("h_map", format!("{x} is not finite")));
        }
        if on_rays(x) {
            return Ok(x.mirrored());
        }
        let bits = x.prec().max(self.base.bits()) + magnitude_bits(x) + GUARD_BITS;
        let collapse = self.collapse_at(bits);
        let wide = x.rounded(collapse.precision());
        let y = self.tangent_chart(&wide, Direction::Inverse)?;
        let gy = self.g_with(&collapse, &y, direction)?;
        Ok(self.tangent_chart(&gy, Direction::Forward)?.rounded(self.base))
    }

    /// Pulls a plane point back to the exact square (the dyadic rational
    /// nearest the big-float preimage), or recognises a ray point.
    pub fn lift(&self, x: &PlanePoint) -> Result<Lift> {
        if !x.is_finite() {
            return Err(Error::domain("lift", format!("{x} is not finite")));
        }
        if on_rays(x) {
            return Ok(Lift::Ray(x.clone()));
        }
        let bits = x.prec().max(self.base.bits()) + magnitude_bits(x) + GUARD_BITS;
        let collapse = self.collapse_at(bits);
        let y = self.tangent_chart(&x.rounded(collapse.precision()), Direction::Inverse)?;
        Ok(Lift::Square(collapse.xi_inv_exact(&y)?))
    }

    /// Working precision that resolves the distance from `w` to the boundary.
    pub fn precision_for(&self, w: &SquarePoint) -> u32 {
        self.base.bits() + resolution_bits(&w.boundary_gap()) + GUARD_BITS
    }

    /// The collapse image of an exact point, at widened precision, rounded
    /// back to the base precision.
    pub fn push_to_square(&self, w: &SquarePoint) -> PlanePoint {
        self.push_to_square_wide(w).rounded(self.base)
    }

    fn push_to_square_wide(&self, w: &SquarePoint) -> PlanePoint {
        let collapse = self.collapse_at(self.precision_for(w));
        collapse.xi_square(w)
    }

    /// The plane point `psi(xi(w))` of an exact interior point.
    pub fn push_to_plane(&self, w: &SquarePoint) -> Result<PlanePoint> {
        if !w.is_interior() {
            return Err(Error::domain("push_to_plane", "boundary points have no plane image"));
        }
        let y = self.push_to_square_wide(w);
        Ok(self.tangent_chart(&y, Direction::Forward)?.rounded(self.base))
    }

    /// Exact iterates `f^n(w)` for `n` in `lo..=hi`.
    pub fn square_orbit(&self, w: &SquarePoint, lo: i64, hi: i64) -> Result<Vec<(i64, SquarePoint)>> {
        if lo > hi {
            return Err(Error::domain("square_orbit", format!("empty range {lo}..{hi}")));
        }
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        if lo < 0 {
            let mut back = Vec::new();
            let mut p = w.clone();
            for n in (lo..0).rev() {
                p = homeomorphism(&p, Direction::Inverse).map_err(|e| escape(n, e))?;
                if n <= hi {
                    back.push((n, p.clone()));
                }
            }
            back.reverse();
            out.extend(back);
        }
        if hi >= 0 {
            let mut p = w.clone();
            for n in 0..=hi {
                if n > 0 {
                    p = homeomorphism(&p, Direction::Forward).map_err(|e| escape(n, e))?;
                }
                if n >= lo {
                    out.push((n, p.clone()));
                }
            }
        }
        Ok(out)
    }

    /// The orbit segment `h^n(x)`, `n` in `lo..=hi`, through the exact lift.
    pub fn h_orbit_lifted(&self, x: &PlanePoint, lo: i64, hi: i64) -> Result<Vec<(i64, PlanePoint)>> {
        if lo > hi {
            return Err(Error::domain("h_orbit_lifted", format!("empty range {lo}..{hi}")));
        }
        match self.lift(x)? {
            Lift::Ray(p) => Ok((lo..=hi)
                .map(|n| (n, if n.rem_euclid(2) == 0 { p.clone() } else { p.mirrored() }))
                .collect()),
            Lift::Square(w) => {
                let exact = self.square_orbit(&w, lo, hi)?;
                exact
                    .par_iter()
                    .map(|(n, p)| self.push_to_plane(p).map(|q| (*n, q)).map_err(|e| escape(*n, e)))
                    .collect()
            }
        }
    }
}

impl Default for PlaneMaps {
    fn default() -> Self {
        PlaneMaps::new(Precision::DEFAULT)
    }
}

fn escape(step: i64, e: Error) -> Error {
    match e {
        Error::Escape { .. } => e,
        other => Error::Escape {
            step,
            reason: other.to_string(),
        },
    }
}

/// The reference map `(x, y) -> (-x, y - |x| + 1)` for `|x| < 1` and
/// `(x, y) -> (-x, y)` otherwise: a vertical push composed with a mirror.
/// It has no fixed point, yet the orbit of the origin walks off to infinity.
pub fn example_shift_reflection(x: &PlanePoint, direction: Direction) -> PlanePoint {
    let bits = x.prec();
    match direction {
        Direction::Forward => {
            let ax = BigFloat::with_val(bits, x.x.abs_ref());
            let mut nx = x.x.clone();
            nx.neg_assign();
            if ax < 1 {
                PlanePoint::new(nx, BigFloat::with_val(bits, &x.y - ax) + 1u32)
            } else {
                PlanePoint::new(nx, x.y.clone())
            }
        }
        Direction::Inverse => {
            let au = BigFloat::with_val(bits, x.x.abs_ref());
            let mut nx = x.x.clone();
            nx.neg_assign();
            if au < 1 {
                PlanePoint::new(nx, BigFloat::with_val(bits, &x.y + au) - 1u32)
            } else {
                PlanePoint::new(nx, x.y.clone())
            }
        }
    }
}

/// Converts an exact reported coordinate back to a rational, for callers
/// that need to re-enter the exact core.
pub fn plane_to_square(x: &PlanePoint) -> Result<SquarePoint> {
    SquarePoint::new(float_to_rational(&x.x)?, float_to_rational(&x.y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::parse_rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pp(x: f64, y: f64) -> PlanePoint {
        PlanePoint::from_f64(Precision::DEFAULT, x, y)
    }

    fn close(a: &PlanePoint, b: &PlanePoint, tol: f64) -> bool {
        a.distance(b) < tol
    }

    #[test]
    fn tangent_chart_examples() {
        let m = PlaneMaps::default();
        let fwd = |x, y| m.tangent_chart(&pp(x, y), Direction::Forward).unwrap();
        assert!(close(&fwd(0.5, 0.0), &pp(1.0, 0.0), 1e-60));
        assert!(close(&fwd(0.0, 0.0), &pp(0.0, 0.0), 1e-60));
        assert!(close(&fwd(-0.5, 0.5), &pp(-1.0, 1.0), 1e-60));
        assert!(m.tangent_chart(&pp(1.0, 0.0), Direction::Forward).is_err());
    }

    #[test]
    fn tangent_chart_round_trips_near_the_edge() {
        let m = PlaneMaps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let x = pp(rng.gen_range(-0.999..0.999), rng.gen_range(-0.999..0.999));
            let y = m.tangent_chart(&x, Direction::Forward).unwrap();
            let back = m.tangent_chart(&y, Direction::Inverse).unwrap();
            assert!(close(&back, &x, 1e-60));
        }
        // 1 - 2^-200 maps to roughly 2^200 and back with full relative accuracy
        let near = BigFloat::with_val(512, 1) - BigFloat::with_val(512, BigFloat::i_exp(1, -200));
        let x = PlanePoint::new(near.clone(), BigFloat::new(512));
        let y = m.tangent_chart(&x, Direction::Forward).unwrap();
        assert!(y.x > BigFloat::with_val(64, BigFloat::i_exp(1, 199)));
        let back = m.tangent_chart(&y, Direction::Inverse).unwrap();
        let gap = BigFloat::with_val(512, 1 - &back.x);
        let rel = (gap.to_f64() / 2f64.powi(-200) - 1.0).abs();
        assert!(rel < 1e-100, "relative error {rel}");
    }

    #[test]
    fn g_examples() {
        let m = PlaneMaps::default();
        let g = |x, y| m.g_map(&pp(x, y), Direction::Forward).unwrap();
        assert!(close(&g(0.75, 0.0), &pp(-0.75, 0.0), 1e-60));
        assert!(close(&g(0.0, 0.0), &pp(0.0, 0.5), 1e-30));
        assert!(close(&g(0.0, 1.0), &pp(0.0, 1.0), 1e-60));
        assert!(close(&g(-1.0, 0.3), &pp(1.0, 0.3), 1e-60));
    }

    #[test]
    fn g_inverse_undoes_g() {
        let m = PlaneMaps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = pp(rng.gen_range(-0.95..0.95), rng.gen_range(-0.95..0.95));
            let y = m.g_map(&x, Direction::Forward).unwrap();
            let back = m.g_map(&y, Direction::Inverse).unwrap();
            assert!(close(&back, &x, 1e-25), "{x} -> {y} -> {back}");
        }
    }

    #[test]
    fn h_examples() {
        let m = PlaneMaps::default();
        assert_eq!(m.h_map(&pp(5.0, 0.0), Direction::Forward).unwrap(), pp(-5.0, 0.0));
        let twice = m
            .h_map(&m.h_map(&pp(5.0, 0.0), Direction::Forward).unwrap(), Direction::Forward)
            .unwrap();
        assert_eq!(twice, pp(5.0, 0.0));
        assert!(close(&m.h_map(&pp(0.0, 0.0), Direction::Forward).unwrap(), &pp(0.0, 1.0), 1e-30));
        assert!(close(&m.h_map(&pp(0.0, 0.0), Direction::Inverse).unwrap(), &pp(0.0, -1.0), 1e-30));
    }

    #[test]
    fn lifted_orbit_examples() {
        let m = PlaneMaps::default();
        let orbit = m.h_orbit_lifted(&pp(0.0, 0.0), 0, 2).unwrap();
        let tan_3pi_8 = 1.0 + 2f64.sqrt();
        let expected = [pp(0.0, 0.0), pp(0.0, 1.0), pp(0.0, tan_3pi_8)];
        for ((n, p), e) in orbit.iter().zip(&expected) {
            assert!(close(p, e, 1e-12), "n = {n}: {p}");
        }
        let ray = m.h_orbit_lifted(&pp(2.0, 0.0), 0, 1).unwrap();
        assert_eq!(ray[0].1, pp(2.0, 0.0));
        assert_eq!(ray[1].1, pp(-2.0, 0.0));
        let back = m.h_orbit_lifted(&pp(0.0, 0.0), -1, -1).unwrap();
        assert_eq!(back.len(), 1);
        assert!(close(&back[0].1, &pp(0.0, -1.0), 1e-30));
    }

    #[test]
    fn lifted_orbit_agrees_with_direct_steps() {
        let m = PlaneMaps::default();
        let seed = pp(0.3, -0.8);
        let lifted = m.h_orbit_lifted(&seed, -3, 3).unwrap();
        let mut p = seed.clone();
        for (n, q) in lifted.iter().filter(|(n, _)| *n >= 0) {
            assert!(close(&p, q, 1e-20), "n = {n}: {p} vs {q}");
            p = m.h_map(&p, Direction::Forward).unwrap();
        }
        let mut p = seed;
        for (n, q) in lifted.iter().rev().filter(|(n, _)| *n <= 0) {
            assert!(close(&p, q, 1e-20), "n = {n}: {p} vs {q}");
            p = m.h_map(&p, Direction::Inverse).unwrap();
        }
    }

    #[test]
    fn reference_map_examples() {
        let g = |x, y| example_shift_reflection(&pp(x, y), Direction::Forward);
        assert_eq!(g(0.0, 0.0), pp(0.0, 1.0));
        assert_eq!(g(2.0, 7.0), pp(-2.0, 7.0));
        assert_eq!(g(0.5, 0.0), pp(-0.5, 0.5));
        for (x, y) in [(0.25, 3.0), (-0.9, -1.0), (4.0, 1.5)] {
            let p = pp(x, y);
            assert_eq!(example_shift_reflection(&example_shift_reflection(&p, Direction::Forward), Direction::Inverse), p);
        }
    }

    #[test]
    fn locus_and_rays() {
        assert!(on_rays(&pp(1.0, 0.0)) && on_rays(&pp(-7.5, 0.0)));
        assert!(!on_rays(&pp(0.99, 0.0)) && !on_rays(&pp(2.0, 1e-300)));
        assert!(on_quotient_locus(&pp(0.5, 0.0)) && on_quotient_locus(&pp(0.1, -1.0)));
        assert!(!on_quotient_locus(&pp(0.49, 0.0)));
        let w = plane_to_square(&pp(0.25, -0.5)).unwrap();
        assert_eq!(w.r(), &parse_rational("1/4").unwrap());
    }
}
