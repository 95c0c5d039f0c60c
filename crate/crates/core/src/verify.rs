//! The verification battery behind the `verify` command.
//!
//! Every check returns a verdict together with the data it was judged on.
//! Checks marked as not asserted are measurements: they are recorded in the
//! report but do not affect its verdict.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::collapse_map::{ChartU, Collapse};
use crate::dynamics::{
    boundedness_certificate, ladder_witness, displacement_scan, hausdorff, limit_estimate, orbit,
    orientation_probe, orientation_probe_plane, plane_linspace, random_interior_seeds, random_square_points,
    semiconjugacy_probe, square_cell_centers, stable_entry, Certificate, Evidence, ExactMap, MapId, Outcome,
    PlaneMap, ReferenceMap, Region, Side, Sign,
};
use crate::dynamics::random_dyadic;
use crate::error::{Error, Result};
use crate::numerics::{BigFloat, Direction, PlanePoint, Precision, Rational, Tolerances};
use crate::plane_map::{example_shift_reflection, PlaneMaps};
use crate::square_map::{homeomorphism, level_shift, reflect, vertical_shift, Axis, SquarePoint};

const CORNERS_TOP: [[f64; 2]; 2] = [[-1.0, 1.0], [1.0, 1.0]];
const CORNERS_BOTTOM: [[f64; 2]; 2] = [[-1.0, -1.0], [1.0, -1.0]];
const RAY_ENDS: [[f64; 2]; 2] = [[-1.0, 0.0], [1.0, 0.0]];

/// Which group of checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// The exact square map and the reference map.
    Core,
    /// The collapse chart and the square quotient map.
    Xi,
    /// The plane homeomorphism.
    Plane,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Xi => "xi",
            Suite::Plane => "plane",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::Core, Suite::Xi, Suite::Plane, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?} (core, xi, plane, all)")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub suite: Suite,
    pub pass: bool,
    /// Whether the verdict counts towards the report.
    pub asserted: bool,
    pub elapsed_ms: f64,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub precision: u32,
    pub tolerances: Tolerances,
    pub sampler_seed: u64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = match (c.asserted, c.pass) {
                (false, _) => "INFO",
                (true, true) => "PASS",
                (true, false) => "FAIL",
            };
            out.push_str(&format!("{verdict} {:<6} {:<28} {:>9.1} ms\n", c.suite.name(), c.name, c.elapsed_ms));
        }
        out.push_str(&format!("suite {}: {}\n", self.suite, if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

/// Settings shared by every check.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub precision: Precision,
    pub tolerances: Tolerances,
    pub sampler_seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            precision: Precision::DEFAULT,
            tolerances: Tolerances::default(),
            sampler_seed: 0x5eed,
        }
    }
}

struct Context {
    maps: PlaneMaps,
    collapse: Arc<Collapse>,
    tolerances: Tolerances,
    seed: u64,
}

impl Context {
    /// An independent stream for the check numbered `k`.
    fn stream(&self, k: u64) -> u64 {
        self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k)
    }

    fn point(&self, x: &Rational, y: &Rational) -> PlanePoint {
        PlanePoint::from_rationals(self.maps.precision(), x, y)
    }
}

type Outcomes = Result<(bool, Value)>;

struct Check {
    name: &'static str,
    suite: Suite,
    asserted: bool,
    run: fn(&Context) -> Outcomes,
}

const CHECKS: &[Check] = &[
    Check { name: "boundary_identity", suite: Suite::Core, asserted: true, run: boundary_identity },
    Check { name: "normally_rising", suite: Suite::Core, asserted: true, run: normally_rising },
    Check { name: "convergence_ladder", suite: Suite::Core, asserted: true, run: convergence_ladder },
    Check { name: "square_limit_sets", suite: Suite::Core, asserted: true, run: square_limit_sets },
    Check { name: "square_displacement", suite: Suite::Core, asserted: true, run: square_displacement },
    Check { name: "square_orientation", suite: Suite::Core, asserted: true, run: square_orientation },
    Check { name: "reference_map", suite: Suite::Core, asserted: true, run: reference_map },
    Check { name: "xi_fiber_and_axis", suite: Suite::Xi, asserted: true, run: xi_fiber_and_axis },
    Check { name: "xi_edge_collapse", suite: Suite::Xi, asserted: true, run: xi_edge_collapse },
    Check { name: "xi_symmetry", suite: Suite::Xi, asserted: true, run: xi_symmetry },
    Check { name: "xi_round_trip", suite: Suite::Xi, asserted: true, run: xi_round_trip },
    Check { name: "cone_round_trip", suite: Suite::Xi, asserted: true, run: cone_round_trip },
    Check { name: "xi_orientation", suite: Suite::Xi, asserted: false, run: xi_orientation },
    Check { name: "g_seam_aligned", suite: Suite::Xi, asserted: true, run: g_seam_aligned },
    Check { name: "g_seam_plain", suite: Suite::Xi, asserted: false, run: g_seam_plain },
    Check { name: "ray_structure", suite: Suite::Plane, asserted: true, run: ray_structure },
    Check { name: "plane_convergence", suite: Suite::Plane, asserted: true, run: plane_convergence },
    Check { name: "plane_displacement", suite: Suite::Plane, asserted: true, run: plane_displacement },
    Check { name: "plane_orientation", suite: Suite::Plane, asserted: true, run: plane_orientation },
    Check { name: "semiconjugacy", suite: Suite::Plane, asserted: true, run: semiconjugacy },
    Check { name: "boundedness", suite: Suite::Plane, asserted: true, run: boundedness },
    Check { name: "excursion", suite: Suite::Plane, asserted: false, run: excursion },
];

/// Names of the checks a suite runs, in order.
pub fn check_names(suite: Suite) -> Vec<&'static str> {
    CHECKS.iter().filter(|c| suite == Suite::All || c.suite == suite).map(|c| c.name).collect()
}

/// Runs every check of `suite`. Errors inside a check are failures of that
/// check, not of the run.
pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<VerificationReport> {
    config.tolerances.validate()?;
    let maps = PlaneMaps::new(config.precision);
    let ctx = Context {
        collapse: maps.collapse(),
        maps,
        tolerances: config.tolerances.clone(),
        seed: config.sampler_seed,
    };
    let mut checks = Vec::new();
    for check in CHECKS.iter().filter(|c| suite == Suite::All || c.suite == suite) {
        let start = Instant::now();
        let (pass, detail) = match (check.run)(&ctx) {
            Ok(v) => v,
            Err(e) => (false, json!({ "error": e.to_string() })),
        };
        checks.push(CheckResult {
            name: check.name.into(),
            suite: check.suite,
            pass,
            asserted: check.asserted,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            detail,
        });
    }
    let pass = checks.iter().filter(|c| c.asserted).all(|c| c.pass);
    Ok(VerificationReport {
        suite,
        precision: config.precision.bits(),
        tolerances: config.tolerances.clone(),
        sampler_seed: config.sampler_seed,
        checks,
        pass,
    })
}

fn cert_json(c: &Certificate) -> Value {
    serde_json::to_value(c).unwrap_or(Value::Null)
}

fn as_f64(v: &BigFloat) -> f64 {
    v.to_f64()
}

// ---------------------------------------------------------------------------
// core

fn boundary_identity(ctx: &Context) -> Outcomes {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.stream(1));
    let (one, minus_one) = (Rational::from(1), Rational::from(-1));
    let points: Vec<SquarePoint> = (0..1000)
        .map(|k| {
            let t = random_dyadic(&mut rng, -1.0, 1.0);
            let (r, s) = match k % 4 {
                0 => (t, one.clone()),
                1 => (t, minus_one.clone()),
                2 => (one.clone(), t),
                _ => (minus_one.clone(), t),
            };
            SquarePoint::new(r, s)
        })
        .collect::<Result<_>>()?;
    let results = points
        .par_iter()
        .map(|p| -> Result<(bool, bool)> {
            let fp = homeomorphism(p, Direction::Forward)?;
            let expected = reflect(&vertical_shift(p, Direction::Forward)?, Axis::Level);
            let horizontal = p.s().clone().abs() == 1;
            let cycle = !horizontal || homeomorphism(&fp, Direction::Forward)? == *p;
            Ok((fp == expected, cycle))
        })
        .collect::<Result<Vec<_>>>()?;
    let mismatches = results.iter().filter(|r| !r.0).count();
    let broken_cycles = results.iter().filter(|r| !r.1).count();
    Ok((
        mismatches == 0 && broken_cycles == 0,
        json!({ "samples": points.len(), "mismatches": mismatches, "broken_two_cycles": broken_cycles }),
    ))
}

fn normally_rising(ctx: &Context) -> Outcomes {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.stream(2));
    let points: Vec<SquarePoint> = (0..10_000)
        .map(|_| {
            let mut q = || {
                let d: i64 = rng.gen_range(1..=1000);
                Rational::from((rng.gen_range(-d..=d), d))
            };
            SquarePoint::new(q(), q())
        })
        .collect::<Result<_>>()?;
    let results = points
        .par_iter()
        .map(|p| -> Result<(bool, bool)> {
            let fp = homeomorphism(p, Direction::Forward)?;
            let rising = *fp.s() == level_shift(p.s(), Direction::Forward)?;
            let back = homeomorphism(&fp, Direction::Inverse)? == *p;
            Ok((rising, back))
        })
        .collect::<Result<Vec<_>>>()?;
    let not_rising = results.iter().filter(|r| !r.0).count();
    let not_inverted = results.iter().filter(|r| !r.1).count();
    Ok((
        not_rising == 0 && not_inverted == 0,
        json!({ "samples": points.len(), "not_rising": not_rising, "not_inverted": not_inverted }),
    ))
}

fn convergence_ladder(ctx: &Context) -> Outcomes {
    let quarter = SquarePoint::ratio((0, 1), (1, 4))?;
    let cert = ladder_witness(&quarter, 5)?;
    let Evidence::Ladder(e) = &cert.evidence else {
        return Err(Error::domain("convergence_ladder", "unexpected evidence"));
    };
    let r = |i: u64| e.ladder.iter().find(|(j, _)| *j == i).map(|(_, v)| v.clone());
    let exact = r(2).as_deref() == Some("2/3") && r(4).as_deref() == Some("8/9") && r(6).as_deref() == Some("35/36");
    let m = 2f64.powi(-10);
    let seeds = random_square_points(25, (-1.0 + m, 1.0 - m), (m, 0.5), ctx.stream(3));
    let random: Vec<Certificate> = seeds.par_iter().map(|s| ladder_witness(s, 5)).collect::<Result<_>>()?;
    let random_pass = random.iter().filter(|c| c.pass).count();
    Ok((
        cert.pass && exact && random_pass == seeds.len(),
        json!({
            "quarter_seed": cert_json(&cert),
            "r2_r4_r6": [r(2), r(4), r(6)],
            "random_seeds": seeds.len(),
            "random_passed": random_pass,
        }),
    ))
}

fn square_limit_sets(ctx: &Context) -> Outcomes {
    let seeds = random_interior_seeds(25, ctx.stream(4));
    let f = ExactMap::square();
    let rows = seeds
        .par_iter()
        .map(|s| -> Result<(f64, f64, bool)> {
            let omega = limit_estimate(&f, s, Side::Omega, &ctx.tolerances)?;
            let alpha = limit_estimate(&f, s, Side::Alpha, &ctx.tolerances)?;
            let tol = ctx.tolerances.limitset;
            Ok((
                hausdorff(&omega.candidates, &CORNERS_TOP),
                hausdorff(&alpha.candidates, &CORNERS_BOTTOM),
                omega.matches(&CORNERS_TOP, tol) && alpha.matches(&CORNERS_BOTTOM, tol),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_omega = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let worst_alpha = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let passed = rows.iter().filter(|r| r.2).count();
    Ok((
        passed == seeds.len(),
        json!({
            "seeds": seeds.len(),
            "passed": passed,
            "window": Side::Omega.window(ctx.tolerances.horizon),
            "worst_omega_distance": worst_omega,
            "worst_alpha_distance": worst_alpha,
        }),
    ))
}

fn square_displacement(_: &Context) -> Outcomes {
    let cert = displacement_scan(&ExactMap::square(), &square_cell_centers(200, 200), Region::SQUARE, [200, 200]);
    Ok((cert.pass, cert_json(&cert)))
}

fn square_orientation(ctx: &Context) -> Outcomes {
    let f = orientation_probe(&ExactMap::square(), 1000, 20, Sign::Negative, ctx.stream(5))?;
    let shift = orientation_probe(&ExactMap::new(MapId::VerticalShift)?, 10, 20, Sign::Positive, ctx.stream(6))?;
    let mirror = orientation_probe(&ExactMap::new(MapId::Mirror)?, 10, 20, Sign::Negative, ctx.stream(7))?;
    Ok((
        f.pass && shift.pass && mirror.pass,
        json!({ "f": cert_json(&f), "f02": cert_json(&shift), "reflect": cert_json(&mirror) }),
    ))
}

fn reference_map(ctx: &Context) -> Outcomes {
    let prec = ctx.maps.precision();
    let region = Region::centered(2.0);
    let cert = displacement_scan(&ReferenceMap, &plane_linspace(&region, 100, 100, prec), region, [100, 100]);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.stream(8));
    let mut not_involutive = 0;
    for _ in 0..1000 {
        let mut x = random_dyadic(&mut rng, 1.0, 100.0);
        if rng.gen_bool(0.5) {
            x = -x;
        }
        let y = random_dyadic(&mut rng, -100.0, 100.0);
        let p = ctx.point(&x, &y);
        let twice = example_shift_reflection(&example_shift_reflection(&p, Direction::Forward), Direction::Forward);
        if twice != p {
            not_involutive += 1;
        }
    }
    let origin = PlanePoint::from_f64(prec, 0.0, 0.0);
    let o = orbit(&ReferenceMap, &origin, 0, 100)?;
    let climbs = o.points.iter().all(|(n, p)| p.x.is_zero() && p.y == *n);
    Ok((
        cert.pass && not_involutive == 0 && climbs,
        json!({ "displacement": cert_json(&cert), "involution_failures": not_involutive, "origin_climbs": climbs }),
    ))
}

// ---------------------------------------------------------------------------
// collapse chart and quotient map

fn uniform_points(ctx: &Context, k: u64, count: usize, r: (f64, f64), s: (f64, f64)) -> Vec<PlanePoint> {
    random_square_points(count, r, s, ctx.stream(k))
        .iter()
        .map(|p| ctx.point(p.r(), p.s()))
        .collect()
}

fn xi_fiber_and_axis(ctx: &Context) -> Outcomes {
    let c = &ctx.collapse;
    let prec = ctx.maps.precision();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.stream(9));
    let zero = Rational::new();
    let (mut fiber, mut axis) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let s = random_dyadic(&mut rng, -1.0, 1.0);
        let p = ctx.point(&zero, &s);
        fiber = fiber.max(as_f64(&c.xi(&p)?.distance(&p)));
        let r = random_dyadic(&mut rng, -1.0, 1.0);
        let half = PlanePoint::from_rationals(prec, &Rational::from(&r / 2u32), &zero);
        axis = axis.max(as_f64(&c.xi(&ctx.point(&r, &zero))?.distance(&half)));
    }
    let tol = ctx.tolerances.commutation;
    Ok((fiber <= tol && axis <= tol, json!({ "samples": 1000, "fiber_error": fiber, "axis_error": axis })))
}

/// Arc-length position along v7 -> v2 -> v6 -> v0, or `None` off that path.
fn collapse_path_position(y: &PlanePoint) -> Option<f64> {
    let [x, s] = y.to_f64();
    let eps = 1e-40;
    if (s - 1.0).abs() < eps && (0.0..=1.0).contains(&x) {
        Some(x)
    } else if (x - 1.0).abs() < eps {
        Some(2.0 - s)
    } else if s.abs() < eps && x >= 0.5 - eps {
        Some(3.0 - x)
    } else {
        None
    }
}

fn xi_edge_collapse(ctx: &Context) -> Outcomes {
    let c = &ctx.collapse;
    let prec = ctx.maps.precision();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.stream(10));
    let (v0, v9) = (PlanePoint::from_f64(prec, 0.5, 0.0), PlanePoint::from_f64(prec, -0.5, 0.0));
    let (one, minus_one) = (Rational::from(1), Rational::from(-1));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = random_dyadic(&mut rng, -1.0, 1.0);
        worst = worst.max(as_f64(&c.xi(&ctx.point(&one, &s))?.distance(&v0)));
        worst = worst.max(as_f64(&c.xi(&ctx.point(&minus_one, &s))?.distance(&v9)));
    }
    let mut last = f64::NEG_INFINITY;
    let mut monotone = true;
    let mut off_path = 0;
    for k in 0..=1000 {
        let x = Rational::from((k, 1000));
        match collapse_path_position(&c.xi(&ctx.point(&x, &one))?) {
            Some(pos) => {
                if pos < last || (pos == last && k < 1000) {
                    monotone = false;
                }
                last = pos;
            }
            None => off_path += 1,
        }
    }
    let ends = (last - 2.5).abs() < 1e-12;
    Ok((
        worst <= ctx.tolerances.commutation && monotone && off_path == 0 && ends,
        json!({
            "edge_samples": 100,
            "edge_error": worst,
            "path_samples": 1001,
            "path_monotone": monotone,
            "off_path": off_path,
            "path_end": last,
        }),
    ))
}

fn xi_symmetry(ctx: &Context) -> Outcomes {
    let c = &ctx.collapse;
    let points = uniform_points(ctx, 11, 10_000, (-1.0, 1.0), (-1.0, 1.0));
    let errors = points
        .par_iter()
        .map(|p| -> Result<(f64, f64)> {
            let y = c.xi(p)?;
            let level = c.xi(&p.mirrored())?.distance(&y.mirrored());
            let vertical = c.xi(&p.flipped())?.distance(&y.flipped());
            Ok((as_f64(&level), as_f64(&vertical)))
        })
        .collect::<Result<Vec<_>>>()?;
    let level = errors.iter().map(|e| e.0).fold(0.0, f64::max);
    let vertical = errors.iter().map(|e| e.1).fold(0.0, f64::max);
    let tol = ctx.tolerances.commutation;
    Ok((
        level <= tol && vertical <= tol,
        json!({ "samples": points.len(), "level_error": level, "vertical_error": vertical }),
    ))
}

fn xi_round_trip(ctx: &Context) -> Outcomes {
    let c = &ctx.collapse;
    let m = 1e-3;
    let points = uniform_points(ctx, 12, 10_000, (-1.0 + m, 1.0 - m), (-1.0 + m, 1.0 - m));
    let rows = points
        .par_iter()
        .map(|p| -> Result<(f64, bool)> {
            let y = c.xi(p)?;
            let inside = c.in_image_of_interior(&y);
            Ok((as_f64(&c.xi_inv(&y)?.distance(p)), inside))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let on_slit = rows.iter().filter(|r| !r.1).count();
    Ok((
        worst <= ctx.tolerances.chart_roundtrip && on_slit == 0,
        json!({ "samples": points.len(), "margin": m, "error": worst, "images_off_interior": on_slit }),
    ))
}

fn cone_round_trip(ctx: &Context) -> Outcomes {
    let c = &ctx.collapse;
    let bits = ctx.maps.precision().bits();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.stream(13));
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let t = BigFloat::with_val(bits, random_dyadic(&mut rng, 0.0, 1.0));
        let u = ChartU {
            alpha: BigFloat::with_val(bits, c.pi() * t),
            rho: BigFloat::with_val(bits, random_dyadic(&mut rng, 0.0, 1.0)),
        };
        let back = c.cone_map_inv(&c.cone_map(&u));
        let da = BigFloat::with_val(bits, &back.alpha - &u.alpha).abs();
        let dr = BigFloat::with_val(bits, &back.rho - &u.rho).abs();
        worst = worst.max(as_f64(&da)).max(as_f64(&dr));
    }
    Ok((worst <= ctx.tolerances.commutation, json!({ "samples": 1000, "error": worst })))
}

fn xi_orientation(ctx: &Context) -> Outcomes {
    let c = &ctx.collapse;
    let bits = ctx.maps.precision().bits();
    let leg = Rational::from((1, 1u64 << 20));
    let m = 2f64.powi(-10);
    let base = random_square_points(200, (-1.0 + m, 1.0 - 2.0 * m), (-1.0 + m, 1.0 - 2.0 * m), ctx.stream(14));
    let (mut negative, mut positive) = (0, 0);
    for p in &base {
        let a = ctx.point(p.r(), p.s());
        let b = ctx.point(&Rational::from(p.r() + &leg), p.s());
        let d = ctx.point(p.r(), &Rational::from(p.s() + &leg));
        let (fa, fb, fd) = (c.xi(&a)?, c.xi(&b)?, c.xi(&d)?);
        let ux = BigFloat::with_val(bits, &fb.x - &fa.x);
        let uy = BigFloat::with_val(bits, &fb.y - &fa.y);
        let vx = BigFloat::with_val(bits, &fd.x - &fa.x);
        let vy = BigFloat::with_val(bits, &fd.y - &fa.y);
        let area = BigFloat::with_val(bits, &ux * &vy) - BigFloat::with_val(bits, &uy * &vx);
        if area.is_sign_negative() {
            negative += 1;
        } else if !area.is_zero() {
            positive += 1;
        }
    }
    Ok((true, json!({ "samples": base.len(), "preserved": positive, "reversed": negative })))
}

/// Distances `|g(3/4, sign 2^-k) - (-3/4, 0)|` for the given `k`.
pub fn seam_profile(maps: &PlaneMaps, sign: i32, ks: impl IntoIterator<Item = u32>) -> Result<Vec<(u32, f64)>> {
    let prec = maps.precision();
    let target = PlanePoint::from_f64(prec, -0.75, 0.0);
    ks.into_iter()
        .map(|k| {
            let y = Rational::from((sign as i64, 1)) * crate::numerics::pow2(-(k as i64));
            let p = PlanePoint::from_rationals(prec, &Rational::from((3, 4)), &y);
            let g = maps.g_map(&p, Direction::Forward)?;
            Ok((k, g.distance(&target).to_f64()))
        })
        .collect()
}

/// Final error below `1e-6` and strictly decreasing over the last 5 terms.
pub fn seam_converges(profile: &[(u32, f64)]) -> bool {
    let Some(last) = profile.last() else {
        return false;
    };
    let tail = &profile[profile.len().saturating_sub(5)..];
    last.1 < 1e-6 && tail.windows(2).all(|w| w[1].1 < w[0].1)
}

/// Along `(3/4, +2^-k)` the approach is exponential for even `k`, along
/// `(3/4, -2^-k)` for odd `k`: those terms stay in shear-free zones after
/// pulling back.
fn g_seam_aligned(ctx: &Context) -> Outcomes {
    let above = seam_profile(&ctx.maps, 1, (2..=64).step_by(2))?;
    let below = seam_profile(&ctx.maps, -1, (1..=63).step_by(2))?;
    Ok((
        seam_converges(&above) && seam_converges(&below),
        json!({ "above_even_k": above, "below_odd_k": below }),
    ))
}

fn g_seam_plain(ctx: &Context) -> Outcomes {
    let above = seam_profile(&ctx.maps, 1, 1..=64)?;
    let below = seam_profile(&ctx.maps, -1, 1..=64)?;
    let pass = seam_converges(&above) && seam_converges(&below);
    Ok((pass, json!({ "above": above, "below": below })))
}

// ---------------------------------------------------------------------------
// plane homeomorphism

fn ray_structure(ctx: &Context) -> Outcomes {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.stream(15));
    let zero = Rational::new();
    let mut samples = vec![Rational::from(1), Rational::from(-1)];
    while samples.len() < 1000 {
        let mut r = random_dyadic(&mut rng, 1.0, 1e3);
        if rng.gen_bool(0.5) {
            r = -r;
        }
        samples.push(r);
    }
    let mut failures = 0;
    for r in &samples {
        let p = ctx.point(r, &zero);
        let hp = ctx.maps.h_map(&p, Direction::Forward)?;
        let back = ctx.maps.h_map(&hp, Direction::Forward)?;
        if hp != ctx.point(&Rational::from(-r), &zero) || back != p {
            failures += 1;
        }
    }
    Ok((failures == 0, json!({ "samples": samples.len(), "failures": failures })))
}

/// First `N` such that the lifted orbit of `seed` stays within `radius` of
/// the ray ends for `run` consecutive steps after `N`, searching up to
/// `max_n` steps in the direction of `side`.
pub fn entry_time(maps: &PlaneMaps, seed: &PlanePoint, side: Side, radius: f64, run: usize, max_n: i64) -> Result<Option<i64>> {
    let mut span = 512i64;
    loop {
        let span_now = span.min(max_n + run as i64);
        let pts = match side {
            Side::Omega => maps.h_orbit_lifted(seed, 0, span_now)?,
            Side::Alpha => {
                let mut p = maps.h_orbit_lifted(seed, -span_now, 0)?;
                p.reverse();
                p
            }
        };
        let seq: Vec<(i64, [f64; 2])> = pts.iter().map(|(n, p)| (n.abs(), p.to_f64())).collect();
        if let Some(n) = stable_entry(&seq, &RAY_ENDS, radius, run) {
            if n <= max_n {
                return Ok(Some(n));
            }
        }
        if span_now >= max_n + run as i64 {
            return Ok(None);
        }
        span *= 4;
    }
}

fn plane_convergence(ctx: &Context) -> Outcomes {
    let origin = PlanePoint::from_f64(ctx.maps.precision(), 0.0, 0.0);
    let forward = entry_time(&ctx.maps, &origin, Side::Omega, 0.05, 200, 5000)?;
    let backward = entry_time(&ctx.maps, &origin, Side::Alpha, 0.05, 200, 5000)?;
    Ok((
        forward.is_some() && backward.is_some(),
        json!({ "radius": 0.05, "run": 200, "forward_entry": forward, "backward_entry": backward }),
    ))
}

fn plane_displacement(ctx: &Context) -> Outcomes {
    let prec = ctx.maps.precision();
    let h = PlaneMap(ctx.maps.clone());
    let region = Region::centered(3.0);
    let grid = displacement_scan(&h, &plane_linspace(&region, 300, 300, prec), region, [300, 300]);
    let far = Region::centered(70.0);
    let points = uniform_points(ctx, 16, 1000, (-1.0, 1.0), (-1.0, 1.0))
        .into_iter()
        .map(|p| PlanePoint::new(p.x * 70u32, p.y * 70u32))
        .collect::<Vec<_>>();
    let random = displacement_scan(&h, &points, far, [1000, 1]);
    Ok((grid.pass && random.pass, json!({ "grid": cert_json(&grid), "random": cert_json(&random) })))
}

fn plane_orientation(ctx: &Context) -> Outcomes {
    let cert = orientation_probe_plane(&ctx.maps, Region::centered(3.0), 1000, 20, ctx.stream(17))?;
    Ok((cert.pass, cert_json(&cert)))
}

fn semiconjugacy(ctx: &Context) -> Outcomes {
    let mut seeds = vec![SquarePoint::ratio((0, 1), (1, 4))?];
    seeds.extend(random_interior_seeds(4, ctx.stream(18)));
    let cert = semiconjugacy_probe(&ctx.maps, &seeds, &ctx.tolerances)?;
    let all_match = match &cert.evidence {
        Evidence::Semiconjugacy(e) => e.rows.iter().all(|r| r.outcome == Outcome::Match),
        _ => false,
    };
    Ok((cert.pass && all_match, cert_json(&cert)))
}

fn boundedness(ctx: &Context) -> Outcomes {
    let prec = ctx.maps.precision();
    let interior = boundedness_certificate(&ctx.maps, &PlanePoint::from_f64(prec, 0.0, 0.0), 300, &ctx.tolerances)?;
    let ray = boundedness_certificate(&ctx.maps, &PlanePoint::from_f64(prec, 2.0, 0.0), 300, &ctx.tolerances)?;
    Ok((interior.pass && ray.pass, json!({ "origin": cert_json(&interior), "ray_seed": cert_json(&ray) })))
}

/// Largest `log10 |h^n(0, 0)|` over `|n| <= 300`.
fn excursion(ctx: &Context) -> Outcomes {
    let origin = PlanePoint::from_f64(ctx.maps.precision(), 0.0, 0.0);
    let pts = ctx.maps.h_orbit_lifted(&origin, -300, 300)?;
    let (n, norm) = pts
        .iter()
        .map(|(n, p)| (*n, p.norm()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or_else(|| Error::domain("excursion", "empty orbit"))?;
    let log10 = norm.clone().log10().to_f64();
    Ok((
        log10 > 3.0,
        json!({ "sup_norm": crate::numerics::format_float(&norm), "sup_log10": log10, "at": n, "threshold_log10": 3.0 }),
    ))
}
