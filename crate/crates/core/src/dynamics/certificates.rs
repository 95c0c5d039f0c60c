use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::limits::hausdorff;
use super::{Coordinates, Dynamics, LimitEstimate, MapId, Side};
use crate::error::{Error, Result};
use crate::numerics::{pow2, BigFloat, Direction, PlanePoint, Precision, Rational, Tolerances};
use crate::plane_map::{Lift, PlaneMaps};
use crate::square_map::{cell_of, homeomorphism, shear_span, upper_map, SquarePoint};
use crate::strips::{block_index, f01_pow, thickness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Ladder,
    Boundedness,
    #[serde(rename = "fixedpointfree")]
    FixedPointFree,
    Orientation,
    Conjugacy,
}

/// A check together with everything needed to re-judge it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub evidence: Evidence,
    pub pass: bool,
}

impl Certificate {
    fn new(evidence: Evidence) -> Self {
        let kind = match &evidence {
            Evidence::Ladder(_) => CertificateKind::Ladder,
            Evidence::Displacement(_) => CertificateKind::FixedPointFree,
            Evidence::Orientation(_) => CertificateKind::Orientation,
            Evidence::Boundedness(_) => CertificateKind::Boundedness,
            Evidence::Semiconjugacy(_) => CertificateKind::Conjugacy,
        };
        let pass = evidence.passes();
        Certificate { kind, evidence, pass }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    Ladder(LadderEvidence),
    Displacement(DisplacementEvidence),
    Orientation(OrientationEvidence),
    Boundedness(BoundednessEvidence),
    Semiconjugacy(SemiconjugacyEvidence),
}

impl Evidence {
    /// The verdict, as a function of the evidence alone.
    pub fn passes(&self) -> bool {
        match self {
            Evidence::Ladder(e) => {
                e.heights_exact && e.monotone && e.rungs.iter().all(|r| !r.precondition || r.holds)
            }
            Evidence::Displacement(e) => e.failures == 0 && e.fixed == 0 && e.min > 0.0,
            Evidence::Orientation(e) => {
                let wrong = match e.expected {
                    Sign::Negative => e.positive,
                    Sign::Positive => e.negative,
                };
                wrong == 0 && e.degenerate == 0 && e.negative + e.positive == e.samples
            }
            Evidence::Boundedness(e) => {
                e.ray
                    || (e.interior
                        && e.omega_square.as_ref().is_some_and(|l| l.matches(&CORNERS_TOP, e.tolerance))
                        && e.alpha_square.as_ref().is_some_and(|l| l.matches(&CORNERS_BOTTOM, e.tolerance))
                        && e.omega_plane.as_ref().is_some_and(|l| l.matches(&RAY_ENDS, e.tolerance))
                        && e.alpha_plane.as_ref().is_some_and(|l| l.matches(&RAY_ENDS, e.tolerance)))
            }
            Evidence::Semiconjugacy(e) => {
                let conclusive = e.rows.iter().filter(|r| r.outcome == Outcome::Match).count();
                conclusive > 0 && e.rows.iter().all(|r| r.outcome != Outcome::Mismatch)
            }
        }
    }
}

const CORNERS_TOP: [[f64; 2]; 2] = [[-1.0, 1.0], [1.0, 1.0]];
const CORNERS_BOTTOM: [[f64; 2]; 2] = [[-1.0, -1.0], [1.0, -1.0]];
const RAY_ENDS: [[f64; 2]; 2] = [[-1.0, 0.0], [1.0, 0.0]];

// ---------------------------------------------------------------------------
// ladder

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub m: u64,
    /// `k(m)`, the first level of block `m`.
    pub start: u64,
    pub start_r: String,
    pub end: u64,
    pub end_r: String,
    /// `b_m = 1 - 2^-m`.
    pub bound: String,
    /// `r_{k(m)} > -b_m`
    pub precondition: bool,
    /// `r_{k(m) + 2m} > b_m`
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderEvidence {
    pub seed: [String; 2],
    /// `min { n >= 1 : a_n <= s }`
    pub mu: u64,
    pub m_max: u64,
    /// `(i, r_i)` up to the last rung.
    pub ladder: Vec<(u64, String)>,
    pub rungs: Vec<LadderRung>,
    /// Even-index monotonicity is checked from `k(mu)` through this index.
    pub monotone_from: u64,
    pub monotone_until: u64,
    pub monotone: bool,
    pub heights_exact: bool,
}

/// Index through which even-index monotonicity is checked, at least.
const MONOTONE_HORIZON: u64 = 200;

/// Quantitative witness of the forward convergence of the upper map for a
/// seed in the lower half of the upper band: even-index abscissae never
/// decrease, and each block of shears lifts the abscissa past `1 - 2^-m`.
pub fn ladder_witness(seed: &SquarePoint, m_max: u64) -> Result<Certificate> {
    let (r0, s0) = (seed.r(), seed.s());
    if *r0 <= -1 || *r0 >= 1 || *s0 <= 0 || *s0 > Rational::from((1, 2)) {
        return Err(Error::domain("ladder_witness", "seed needs r in (-1, 1) and s in (0, 1/2]"));
    }
    let mut mu = 1u64;
    while thickness(mu) > *s0 {
        mu += 1;
    }
    let m_max = m_max.max(mu);
    let ladder_end = block_index(m_max)? + 2 * m_max;
    let monotone_from = block_index(mu)?;
    let horizon = ladder_end.max(MONOTONE_HORIZON).max(monotone_from + 2);

    let mut rs: Vec<Rational> = Vec::with_capacity(horizon as usize + 1);
    let mut heights_exact = true;
    let mut p = seed.clone();
    for i in 0..=horizon {
        if i > 0 {
            p = upper_map(&p, Direction::Forward)?;
        }
        heights_exact &= *p.s() == f01_pow(s0, i as i64)?;
        rs.push(p.r().clone());
    }
    let mut monotone = true;
    let mut j = monotone_from + monotone_from % 2;
    while j + 2 <= horizon {
        monotone &= rs[j as usize] <= rs[j as usize + 2];
        j += 2;
    }
    let mut rungs = Vec::new();
    for m in (mu + 1)..=m_max {
        let start = block_index(m)?;
        let end = start + 2 * m;
        let b = shear_span(m);
        let start_r = &rs[start as usize];
        let end_r = &rs[end as usize];
        rungs.push(LadderRung {
            m,
            start,
            start_r: start_r.to_string(),
            end,
            end_r: end_r.to_string(),
            bound: b.to_string(),
            precondition: *start_r > Rational::from(-&b),
            holds: *end_r > b,
        });
    }
    let ladder = rs
        .iter()
        .take(ladder_end as usize + 1)
        .enumerate()
        .map(|(i, r)| (i as u64, r.to_string()))
        .collect();
    Ok(Certificate::new(Evidence::Ladder(LadderEvidence {
        seed: [r0.to_string(), s0.to_string()],
        mu,
        m_max,
        ladder,
        rungs,
        monotone_from,
        monotone_until: horizon,
        monotone,
        heights_exact,
    })))
}

// ---------------------------------------------------------------------------
// displacement

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Region {
    pub const SQUARE: Region = Region {
        x0: -1.0,
        x1: 1.0,
        y0: -1.0,
        y1: 1.0,
    };

    pub fn centered(half: f64) -> Self {
        Region {
            x0: -half,
            x1: half,
            y0: -half,
            y1: half,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementEvidence {
    pub map: MapId,
    pub region: Region,
    pub grid: [usize; 2],
    pub samples: usize,
    pub min: f64,
    pub argmin: [f64; 2],
    /// Grid points mapped exactly to themselves.
    pub fixed: usize,
    /// Grid points where the map failed to evaluate.
    pub failures: usize,
}

/// Centres of an `nx x ny` grid of cells tiling the square, as exact points.
pub fn square_cell_centers(nx: usize, ny: usize) -> Vec<SquarePoint> {
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let r = Rational::from(((2 * i + 1) as i64, nx as i64)) - 1;
            let s = Rational::from(((2 * j + 1) as i64, ny as i64)) - 1;
            out.push(SquarePoint::new(r, s).expect("cell centres lie in the square"));
        }
    }
    out
}

/// `nx x ny` evenly spaced points of `region`, corners included.
pub fn plane_linspace(region: &Region, nx: usize, ny: usize, prec: Precision) -> Vec<PlanePoint> {
    let coord = |a: f64, b: f64, k: usize, n: usize| {
        if n < 2 {
            return prec.float(a);
        }
        let span = BigFloat::with_val(prec.bits(), b - a);
        BigFloat::with_val(prec.bits(), span * k as u32 / (n - 1) as u32) + a
    };
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            out.push(PlanePoint::new(coord(region.x0, region.x1, i, nx), coord(region.y0, region.y1, j, ny)));
        }
    }
    out
}

/// Minimum displacement of `map` over a sample of points, in parallel.
/// Passes iff no sample is fixed (equality is exact for exact maps).
pub fn displacement_scan<D>(map: &D, points: &[D::Point], region: Region, grid: [usize; 2]) -> Certificate
where
    D: Dynamics,
    D::Point: PartialEq + Displacement,
{
    let results: Vec<Option<(f64, bool, [f64; 2])>> = points
        .par_iter()
        .map(|p| {
            map.step(p, Direction::Forward)
                .ok()
                .map(|q| (p.displacement(&q), q == *p, p.coords()))
        })
        .collect();
    let mut min = f64::INFINITY;
    let mut argmin = [f64::NAN; 2];
    let (mut fixed, mut failures) = (0, 0);
    for r in results {
        match r {
            None => failures += 1,
            Some((d, same, at)) => {
                if same {
                    fixed += 1;
                }
                if d < min {
                    min = d;
                    argmin = at;
                }
            }
        }
    }
    Certificate::new(Evidence::Displacement(DisplacementEvidence {
        map: map.id(),
        region,
        grid,
        samples: points.len(),
        min,
        argmin,
        fixed,
        failures,
    }))
}

/// Distance between two points of the same kind, as a float.
pub trait Displacement {
    fn displacement(&self, other: &Self) -> f64;
}

impl Displacement for SquarePoint {
    fn displacement(&self, other: &Self) -> f64 {
        // exact squared distance, rounded once
        self.distance_sq(other).to_f64().sqrt()
    }
}

impl Displacement for PlanePoint {
    fn displacement(&self, other: &Self) -> f64 {
        self.distance(other).to_f64()
    }
}

// ---------------------------------------------------------------------------
// orientation

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Positive,
}

/// Where orientation samples are drawn from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum OrientationSampler {
    /// Dyadic points of the square at least `margin` from its boundary.
    Square { margin: f64 },
    /// Dyadic points of a plane region.
    Plane { region: Region },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientationEvidence {
    pub map: MapId,
    pub sampler: OrientationSampler,
    pub sampler_seed: u64,
    /// The triangle legs are `2^-leg_exp`.
    pub leg_exp: u32,
    pub expected: Sign,
    pub samples: usize,
    pub negative: usize,
    pub positive: usize,
    pub degenerate: usize,
    /// Draws rejected for straddling a seam of the map.
    pub redraws: usize,
}

/// Bits of the random dyadics used as sample coordinates.
const SAMPLE_BITS: u32 = 30;

pub(crate) fn random_dyadic(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Rational {
    let scale = 1u64 << SAMPLE_BITS;
    let lo_k = (lo * scale as f64).ceil() as i64;
    let hi_k = (hi * scale as f64).floor() as i64;
    Rational::from((rng.gen_range(lo_k..=hi_k), scale as i64))
}

/// `count` seeded dyadic points of `[r0, r1] x [s0, s1]`.
pub fn random_square_points(count: usize, r: (f64, f64), s: (f64, f64), sampler_seed: u64) -> Vec<SquarePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampler_seed);
    (0..count)
        .map(|_| {
            let a = random_dyadic(&mut rng, r.0, r.1);
            let b = random_dyadic(&mut rng, s.0, s.1);
            SquarePoint::new(a, b).expect("sample ranges lie in the square")
        })
        .collect()
}

/// `count` seeded interior points at distance at least `2^-10` from the
/// boundary.
pub fn random_interior_seeds(count: usize, sampler_seed: u64) -> Vec<SquarePoint> {
    let m = 2f64.powi(-10);
    random_square_points(count, (-1.0 + m, 1.0 - m), (-1.0 + m, 1.0 - m), sampler_seed)
}

fn signed_area_exact(a: &SquarePoint, b: &SquarePoint, c: &SquarePoint) -> Ordering {
    let ux = Rational::from(b.r() - a.r());
    let uy = Rational::from(b.s() - a.s());
    let vx = Rational::from(c.r() - a.r());
    let vy = Rational::from(c.s() - a.s());
    (ux * vy).cmp(&(uy * vx))
}

fn signed_area_float(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> Ordering {
    let prec = a.prec().max(b.prec()).max(c.prec());
    let ux = BigFloat::with_val(prec, &b.x - &a.x);
    let uy = BigFloat::with_val(prec, &b.y - &a.y);
    let vx = BigFloat::with_val(prec, &c.x - &a.x);
    let vy = BigFloat::with_val(prec, &c.y - &a.y);
    let area = BigFloat::with_val(prec, &ux * &vy) - BigFloat::with_val(prec, &uy * &vx);
    area.cmp0().unwrap_or(Ordering::Equal)
}

fn tally(sign: Ordering, neg: &mut usize, pos: &mut usize, degenerate: &mut usize) {
    match sign {
        Ordering::Less => *neg += 1,
        Ordering::Greater => *pos += 1,
        Ordering::Equal => *degenerate += 1,
    }
}

/// Signed areas of images of the small triangles `(x, x + l e1, x + l e2)`
/// under an exact map of the square, with `l = 2^-leg_exp`. Triangles that
/// straddle two cells of the square homeomorphism are redrawn.
pub fn orientation_probe<D>(map: &D, samples: usize, leg_exp: u32, expected: Sign, sampler_seed: u64) -> Result<Certificate>
where
    D: Dynamics<Point = SquarePoint>,
{
    let margin = 2f64.powi(-10);
    let leg = pow2(-(leg_exp as i64));
    let mut rng = ChaCha8Rng::seed_from_u64(sampler_seed);
    let (mut negative, mut positive, mut degenerate, mut redraws) = (0, 0, 0, 0);
    let mut taken = 0;
    while taken < samples {
        let r = random_dyadic(&mut rng, -1.0 + margin, 1.0 - 2.0 * margin);
        let s = random_dyadic(&mut rng, -1.0 + margin, 1.0 - 2.0 * margin);
        let a = SquarePoint::new(r.clone(), s.clone())?;
        let b = SquarePoint::new(Rational::from(&r + &leg), s.clone())?;
        let c = SquarePoint::new(r, Rational::from(&s + &leg))?;
        let cell = cell_of(&a)?;
        if cell_of(&b)? != cell || cell_of(&c)? != cell {
            redraws += 1;
            continue;
        }
        let fa = map.step(&a, Direction::Forward)?;
        let fb = map.step(&b, Direction::Forward)?;
        let fc = map.step(&c, Direction::Forward)?;
        tally(signed_area_exact(&fa, &fb, &fc), &mut negative, &mut positive, &mut degenerate);
        taken += 1;
    }
    Ok(Certificate::new(Evidence::Orientation(OrientationEvidence {
        map: map.id(),
        sampler: OrientationSampler::Square { margin },
        sampler_seed,
        leg_exp,
        expected,
        samples,
        negative,
        positive,
        degenerate,
        redraws,
    })))
}

/// The orientation probe for the plane homeomorphism, through the lift:
/// triangles whose lifted vertices straddle two cells of the square
/// homeomorphism, or touch the rays, are redrawn.
pub fn orientation_probe_plane(
    maps: &PlaneMaps,
    region: Region,
    samples: usize,
    leg_exp: u32,
    sampler_seed: u64,
) -> Result<Certificate> {
    let prec = maps.precision();
    let leg = pow2(-(leg_exp as i64));
    let mut rng = ChaCha8Rng::seed_from_u64(sampler_seed);
    let mut draws = Vec::with_capacity(samples);
    while draws.len() < samples * 2 {
        let x = random_dyadic(&mut rng, region.x0, region.x1);
        let y = random_dyadic(&mut rng, region.y0, region.y1);
        draws.push((x, y));
    }
    let image = |x: &Rational, y: &Rational| -> Result<Option<(Vec<i64>, PlanePoint)>> {
        let p = PlanePoint::from_rationals(prec, x, y);
        match maps.lift(&p)? {
            Lift::Ray(_) => Ok(None),
            Lift::Square(w) => {
                let cell = cell_of(&w)?;
                Ok(Some((cell, maps.push_to_plane(&homeomorphism(&w, Direction::Forward)?)?)))
            }
        }
    };
    let judged: Vec<Option<Ordering>> = draws
        .par_iter()
        .map(|(x, y)| {
            let a = image(x, y)?;
            let b = image(&Rational::from(x + &leg), y)?;
            let c = image(x, &Rational::from(y + &leg))?;
            Ok(match (a, b, c) {
                (Some((ca, fa)), Some((cb, fb)), Some((cc, fc))) if ca == cb && ca == cc => {
                    Some(signed_area_float(&fa, &fb, &fc))
                }
                _ => None,
            })
        })
        .collect::<Result<_>>()?;
    let (mut negative, mut positive, mut degenerate, mut redraws) = (0, 0, 0, 0);
    let mut taken = 0;
    for j in judged {
        if taken == samples {
            break;
        }
        match j {
            Some(sign) => {
                tally(sign, &mut negative, &mut positive, &mut degenerate);
                taken += 1;
            }
            None => redraws += 1,
        }
    }
    Ok(Certificate::new(Evidence::Orientation(OrientationEvidence {
        map: MapId::Plane,
        sampler: OrientationSampler::Plane { region },
        sampler_seed,
        leg_exp,
        expected: Sign::Negative,
        samples,
        negative,
        positive,
        degenerate,
        redraws,
    })))
}

// ---------------------------------------------------------------------------
// boundedness

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundednessEvidence {
    pub seed: [String; 2],
    pub window: i64,
    pub tolerance: f64,
    /// The seed lies on a ray of period-two points.
    pub ray: bool,
    /// Every exact iterate of the lift stays in the open square.
    pub interior: bool,
    pub omega_square: Option<LimitEstimate>,
    pub alpha_square: Option<LimitEstimate>,
    pub omega_plane: Option<LimitEstimate>,
    pub alpha_plane: Option<LimitEstimate>,
    /// Smallest distance from a collapsed iterate to the square's boundary.
    pub margin: f64,
    /// Largest plane norm over the window, and where it occurs.
    pub sup_norm: String,
    pub sup_log10: f64,
    pub sup_index: i64,
}

/// Evidence that the orbit of `seed` under the plane homeomorphism is
/// bounded: its lift never leaves the open square and accumulates only on
/// the corner pairs, so the plane orbit accumulates only on `(+-1, 0)`.
pub fn boundedness_certificate(maps: &PlaneMaps, seed: &PlanePoint, window: i64, tolerances: &Tolerances) -> Result<Certificate> {
    let seed_strings = [crate::numerics::format_float(&seed.x), crate::numerics::format_float(&seed.y)];
    let w = match maps.lift(seed)? {
        Lift::Ray(p) => {
            let norm = p.norm();
            return Ok(Certificate::new(Evidence::Boundedness(BoundednessEvidence {
                seed: seed_strings,
                window,
                tolerance: tolerances.limitset,
                ray: true,
                interior: false,
                omega_square: None,
                alpha_square: None,
                omega_plane: None,
                alpha_plane: None,
                margin: f64::NAN,
                sup_norm: crate::numerics::format_float(&norm),
                sup_log10: norm.log10().to_f64(),
                sup_index: 0,
            })));
        }
        Lift::Square(w) => w,
    };
    let exact = maps.square_orbit(&w, -window, window)?;
    let interior = exact.iter().all(|(_, p)| p.is_interior());
    let horizon = window as u32;
    let tail = |side: Side, pts: &[(i64, [f64; 2])]| {
        let (lo, hi) = side.window(horizon);
        let t: Vec<_> = pts.iter().filter(|(n, _)| *n >= lo && *n <= hi).copied().collect();
        LimitEstimate::from_tail(side, &t, horizon, tolerances.limitset).ok()
    };
    let square_coords: Vec<(i64, [f64; 2])> = exact.iter().map(|(n, p)| (*n, p.coords())).collect();
    let collapsed: Vec<(i64, PlanePoint)> = exact.par_iter().map(|(n, p)| (*n, maps.push_to_square(p))).collect();
    let plane: Vec<(i64, PlanePoint)> = exact
        .par_iter()
        .map(|(n, p)| maps.push_to_plane(p).map(|q| (*n, q)))
        .collect::<Result<_>>()?;
    let plane_coords: Vec<(i64, [f64; 2])> = plane.iter().map(|(n, p)| (*n, p.coords())).collect();
    let margin = collapsed
        .iter()
        .map(|(_, y)| {
            let m = BigFloat::with_val(y.prec(), y.x.abs_ref()).max(&BigFloat::with_val(y.prec(), y.y.abs_ref()));
            BigFloat::with_val(y.prec(), 1 - m).to_f64()
        })
        .fold(f64::INFINITY, f64::min);
    let (sup_index, sup) = plane
        .iter()
        .map(|(n, p)| (*n, p.norm()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
        .expect("window is non-empty");
    Ok(Certificate::new(Evidence::Boundedness(BoundednessEvidence {
        seed: seed_strings,
        window,
        tolerance: tolerances.limitset,
        ray: false,
        interior,
        omega_square: tail(Side::Omega, &square_coords),
        alpha_square: tail(Side::Alpha, &square_coords),
        omega_plane: tail(Side::Omega, &plane_coords),
        alpha_plane: tail(Side::Alpha, &plane_coords),
        margin,
        sup_norm: crate::numerics::format_float(&sup),
        sup_log10: sup.clone().log10().to_f64(),
        sup_index,
    })))
}

// ---------------------------------------------------------------------------
// semiconjugacy

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Match,
    Mismatch,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyRow {
    pub seed: [String; 2],
    pub side: Side,
    /// Limit candidates of the square orbit.
    pub square: Vec<[f64; 2]>,
    /// Their images in the plane.
    pub pushed: Vec<[f64; 2]>,
    /// Limit candidates of the plane orbit of the pushed seed.
    pub plane: Vec<[f64; 2]>,
    pub distance: f64,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiconjugacyEvidence {
    pub tolerance: f64,
    pub horizon: u32,
    pub rows: Vec<ConjugacyRow>,
}

/// Compares the image of each square orbit's limit set with the limit set
/// of the plane orbit of the image seed, on both sides.
pub fn semiconjugacy_probe(maps: &PlaneMaps, seeds: &[SquarePoint], tolerances: &Tolerances) -> Result<Certificate> {
    let horizon = tolerances.horizon;
    let jobs: Vec<(&SquarePoint, Side)> = seeds.iter().flat_map(|s| [(s, Side::Omega), (s, Side::Alpha)]).collect();
    let rows = jobs
        .par_iter()
        .map(|(seed, side)| -> Result<ConjugacyRow> {
            if !seed.is_interior() {
                return Err(Error::domain("semiconjugacy_probe", "seeds must be interior"));
            }
            let (lo, hi) = side.window(horizon);
            let exact = maps.square_orbit(seed, lo, hi)?;
            let coords: Vec<(i64, [f64; 2])> = exact.iter().map(|(n, p)| (*n, p.coords())).collect();
            let square = LimitEstimate::from_tail(*side, &coords, horizon, tolerances.limitset)?;
            let pushed = square
                .representatives
                .iter()
                .map(|n| {
                    let p = &exact[(n - lo) as usize].1;
                    maps.push_to_plane(p).map(|q| q.coords())
                })
                .collect::<Result<Vec<_>>>()?;
            let x = maps.push_to_plane(seed)?;
            let pts = maps.h_orbit_lifted(&x, lo, hi)?;
            let tail: Vec<(i64, [f64; 2])> = pts.iter().map(|(n, p)| (*n, p.coords())).collect();
            let plane = LimitEstimate::from_tail(*side, &tail, horizon, tolerances.limitset)?;
            let distance = hausdorff(&pushed, &plane.candidates);
            let outcome = if !square.converged || !plane.converged {
                Outcome::Inconclusive
            } else if distance < tolerances.limitset {
                Outcome::Match
            } else {
                Outcome::Mismatch
            };
            Ok(ConjugacyRow {
                seed: [seed.r().to_string(), seed.s().to_string()],
                side: *side,
                square: square.candidates,
                pushed,
                plane: plane.candidates,
                distance,
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate::new(Evidence::Semiconjugacy(SemiconjugacyEvidence {
        tolerance: tolerances.limitset,
        horizon,
        rows,
    })))
}
