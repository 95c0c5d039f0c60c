//! Orbits, limit-set estimates and the certificates built on them.

mod certificates;
mod limits;
mod record;

pub use certificates::{
    boundedness_certificate, ladder_witness, displacement_scan, orientation_probe, orientation_probe_plane,
    plane_linspace, random_interior_seeds, random_square_points, semiconjugacy_probe, square_cell_centers, BoundednessEvidence, Certificate,
    CertificateKind, ConjugacyRow, Displacement, DisplacementEvidence, Evidence, LadderEvidence, LadderRung,
    OrientationEvidence, OrientationSampler, Outcome, Region, SemiconjugacyEvidence, Sign,
};
pub use limits::{hausdorff, limit_estimate, limit_estimate_lifted, stable_entry, LimitEstimate, Side};
pub(crate) use certificates::random_dyadic;
pub use record::{Arithmetic, OrbitMetadata, OrbitRecord, RecordPoint};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Direction, PlanePoint};
use crate::plane_map::{example_shift_reflection, PlaneMaps};
use crate::square_map::{
    homeomorphism, lower_map, reflect, strip_shear, upper_map, vertical_shift, Axis, SquarePoint,
};

/// Names of every map the crate can evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapId {
    /// The base shift of heights, on one coordinate.
    #[serde(rename = "f01")]
    LevelShift,
    /// The vertical shift of the square.
    #[serde(rename = "f02")]
    VerticalShift,
    /// One line shear, on one coordinate.
    #[serde(rename = "phi")]
    Shear,
    /// The strip shear of the upper band.
    #[serde(rename = "Phi")]
    StripShear,
    #[serde(rename = "eta")]
    Upper,
    #[serde(rename = "zeta")]
    Lower,
    /// The square homeomorphism.
    #[serde(rename = "f")]
    Square,
    /// The collapse map.
    #[serde(rename = "xi")]
    Collapse,
    /// The square quotient map.
    #[serde(rename = "g")]
    Quotient,
    /// The plane homeomorphism.
    #[serde(rename = "h")]
    Plane,
    /// The shift-and-mirror reference map of the plane.
    #[serde(rename = "example12")]
    Reference,
    /// Mirror of the square in the vertical axis.
    #[serde(rename = "reflect")]
    Mirror,
}

impl MapId {
    pub const ALL: [MapId; 12] = [
        MapId::LevelShift,
        MapId::VerticalShift,
        MapId::Shear,
        MapId::StripShear,
        MapId::Upper,
        MapId::Lower,
        MapId::Square,
        MapId::Collapse,
        MapId::Quotient,
        MapId::Plane,
        MapId::Reference,
        MapId::Mirror,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapId::LevelShift => "f01",
            MapId::VerticalShift => "f02",
            MapId::Shear => "phi",
            MapId::StripShear => "Phi",
            MapId::Upper => "eta",
            MapId::Lower => "zeta",
            MapId::Square => "f",
            MapId::Collapse => "xi",
            MapId::Quotient => "g",
            MapId::Plane => "h",
            MapId::Reference => "example12",
            MapId::Mirror => "reflect",
        }
    }

    /// Whether the map is evaluated in exact rational arithmetic.
    pub fn is_exact(self) -> bool {
        matches!(
            self,
            MapId::LevelShift
                | MapId::VerticalShift
                | MapId::Shear
                | MapId::StripShear
                | MapId::Upper
                | MapId::Lower
                | MapId::Square
                | MapId::Mirror
        )
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown map {s:?}")))
    }
}

/// A map that can be iterated in both directions.
pub trait Dynamics: Sync {
    type Point: Clone + Send + Sync + Coordinates;

    fn id(&self) -> MapId;

    fn step(&self, p: &Self::Point, direction: Direction) -> Result<Self::Point>;
}

/// Floating-point view of a point, for clustering and plotting.
pub trait Coordinates {
    fn coords(&self) -> [f64; 2];
}

impl Coordinates for SquarePoint {
    fn coords(&self) -> [f64; 2] {
        self.to_f64()
    }
}

impl Coordinates for PlanePoint {
    fn coords(&self) -> [f64; 2] {
        self.to_f64()
    }
}

/// One of the exact maps of the square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactMap(MapId);

impl ExactMap {
    pub fn new(id: MapId) -> Result<Self> {
        match id {
            MapId::VerticalShift
            | MapId::StripShear
            | MapId::Upper
            | MapId::Lower
            | MapId::Square
            | MapId::Mirror => Ok(ExactMap(id)),
            other => Err(Error::domain("ExactMap", format!("{other} is not an exact map of the square"))),
        }
    }

    /// The square homeomorphism.
    pub fn square() -> Self {
        ExactMap(MapId::Square)
    }
}

impl Dynamics for ExactMap {
    type Point = SquarePoint;

    fn id(&self) -> MapId {
        self.0
    }

    fn step(&self, p: &SquarePoint, direction: Direction) -> Result<SquarePoint> {
        match self.0 {
            MapId::VerticalShift => vertical_shift(p, direction),
            MapId::StripShear => strip_shear(p, direction),
            MapId::Upper => upper_map(p, direction),
            MapId::Lower => lower_map(p, direction),
            MapId::Square => homeomorphism(p, direction),
            MapId::Mirror => Ok(reflect(p, Axis::Level)),
            _ => unreachable!("checked in ExactMap::new"),
        }
    }
}

/// The square quotient map `g`.
#[derive(Clone, Debug, Default)]
pub struct QuotientMap(pub PlaneMaps);

impl Dynamics for QuotientMap {
    type Point = PlanePoint;

    fn id(&self) -> MapId {
        MapId::Quotient
    }

    fn step(&self, p: &PlanePoint, direction: Direction) -> Result<PlanePoint> {
        self.0.g_map(p, direction)
    }
}

/// The plane homeomorphism `h`, one direct composition per step.
#[derive(Clone, Debug, Default)]
pub struct PlaneMap(pub PlaneMaps);

impl Dynamics for PlaneMap {
    type Point = PlanePoint;

    fn id(&self) -> MapId {
        MapId::Plane
    }

    fn step(&self, p: &PlanePoint, direction: Direction) -> Result<PlanePoint> {
        self.0.h_map(p, direction)
    }
}

/// The shift-and-mirror reference map.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReferenceMap;

impl Dynamics for ReferenceMap {
    type Point = PlanePoint;

    fn id(&self) -> MapId {
        MapId::Reference
    }

    fn step(&self, p: &PlanePoint, direction: Direction) -> Result<PlanePoint> {
        Ok(example_shift_reflection(p, direction))
    }
}

/// An orbit segment `(n, map^n(seed))` for contiguous `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Orbit<P> {
    pub map: MapId,
    pub points: Vec<(i64, P)>,
}

impl<P> Orbit<P> {
    pub fn get(&self, n: i64) -> Option<&P> {
        let first = self.points.first()?.0;
        let idx = usize::try_from(n - first).ok()?;
        self.points.get(idx).map(|(_, p)| p)
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        Some((self.points.first()?.0, self.points.last()?.0))
    }
}

/// Iterates `map` from `seed` over `lo..=hi` (both may be negative).
/// Failures carry the step at which the orbit left the domain.
pub fn orbit<D: Dynamics>(map: &D, seed: &D::Point, lo: i64, hi: i64) -> Result<Orbit<D::Point>> {
    if lo > hi {
        return Err(Error::domain("orbit", format!("empty range {lo}..{hi}")));
    }
    let wrap = |n: i64, e: Error| match e {
        Error::Escape { .. } => e,
        other => Error::Escape {
            step: n,
            reason: other.to_string(),
        },
    };
    let mut points = Vec::with_capacity((hi - lo + 1) as usize);
    if lo < 0 {
        let mut back = Vec::new();
        let mut p = seed.clone();
        for n in (lo..0).rev() {
            p = map.step(&p, Direction::Inverse).map_err(|e| wrap(n, e))?;
            if n <= hi {
                back.push((n, p.clone()));
            }
        }
        back.reverse();
        points.extend(back);
    }
    if hi >= 0 {
        let mut p = seed.clone();
        for n in 0..=hi {
            if n > 0 {
                p = map.step(&p, Direction::Forward).map_err(|e| wrap(n, e))?;
            }
            if n >= lo {
                points.push((n, p.clone()));
            }
        }
    }
    Ok(Orbit { map: map.id(), points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Precision, Rational};

    fn sq(r: (i64, i64), s: (i64, i64)) -> SquarePoint {
        SquarePoint::ratio(r, s).unwrap()
    }

    #[test]
    fn map_names_round_trip() {
        for m in MapId::ALL {
            assert_eq!(m.name().parse::<MapId>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("Eta".parse::<MapId>().is_err());
    }

    #[test]
    fn square_orbit_examples() {
        let f = ExactMap::square();
        let o = orbit(&f, &sq((0, 1), (0, 1)), 0, 2).unwrap();
        let expected = [sq((0, 1), (0, 1)), sq((0, 1), (1, 2)), sq((0, 1), (3, 4))];
        assert_eq!(o.points.iter().map(|(_, p)| p.clone()).collect::<Vec<_>>(), expected);
        let top = sq((1, 3), (1, 1));
        let o = orbit(&f, &top, 0, 2).unwrap();
        assert_eq!(o.get(1), Some(&sq((-1, 3), (1, 1))));
        assert_eq!(o.get(2), Some(&top));
    }

    #[test]
    fn orbits_are_contiguous_and_compose() {
        let f = ExactMap::square();
        let seed = sq((1, 5), (-2, 7));
        let o = orbit(&f, &seed, -6, 9).unwrap();
        assert_eq!(o.range(), Some((-6, 9)));
        for w in o.points.windows(2) {
            assert_eq!(w[1].0, w[0].0 + 1);
            assert_eq!(f.step(&w[0].1, Direction::Forward).unwrap(), w[1].1);
        }
        assert_eq!(o.get(0), Some(&seed));
        let tail = orbit(&f, &seed, 3, 4).unwrap();
        assert_eq!(tail.points[0].1, *o.get(3).unwrap());
    }

    #[test]
    fn reference_orbit_climbs() {
        let seed = PlanePoint::from_f64(Precision::DEFAULT, 0.0, 0.0);
        let o = orbit(&ReferenceMap, &seed, 0, 3).unwrap();
        let ys: Vec<f64> = o.points.iter().map(|(_, p)| p.y.to_f64()).collect();
        assert_eq!(ys, vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn orbit_reports_escape_step() {
        let f = ExactMap::square();
        let seed = SquarePoint::new(Rational::from(1), Rational::from(1)).unwrap();
        assert!(orbit(&f, &seed, 0, 3).is_ok());
        assert!(matches!(orbit(&f, &seed, 2, 1), Err(Error::Domain { .. })));
        assert!(ExactMap::new(MapId::Plane).is_err());
    }
}
