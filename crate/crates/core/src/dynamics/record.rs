use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{MapId, Orbit};
use crate::error::{Error, Result};
use crate::numerics::{parse_float, parse_rational, BigFloat, PlanePoint, Precision, Tolerances};
use crate::square_map::SquarePoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Bigfloat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordPoint {
    pub n: i64,
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitMetadata {
    pub precision: u32,
    pub tolerances: Tolerances,
    pub sampler_seed: Option<u64>,
}

/// Serialized orbit segment. Exact coordinates are `p/q` strings; big-float
/// coordinates carry enough decimal digits to read back to the same value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub map: MapId,
    pub seed: [String; 2],
    pub arithmetic: Arithmetic,
    pub points: Vec<RecordPoint>,
    pub metadata: OrbitMetadata,
}

/// Decimal digits that read back to exactly `v` at its own precision.
fn lossless(v: &BigFloat) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.to_string_radix(10, None)
}

impl OrbitRecord {
    pub fn from_exact(orbit: &Orbit<SquarePoint>, seed: &SquarePoint, metadata: OrbitMetadata) -> Self {
        let points = orbit
            .points
            .iter()
            .map(|(n, p)| RecordPoint {
                n: *n,
                x: p.r().to_string(),
                y: p.s().to_string(),
            })
            .collect();
        OrbitRecord {
            map: orbit.map,
            seed: [seed.r().to_string(), seed.s().to_string()],
            arithmetic: Arithmetic::Exact,
            points,
            metadata,
        }
    }

    pub fn from_plane(map: MapId, points: &[(i64, PlanePoint)], seed: &PlanePoint, metadata: OrbitMetadata) -> Self {
        let points = points
            .iter()
            .map(|(n, p)| RecordPoint {
                n: *n,
                x: lossless(&p.x),
                y: lossless(&p.y),
            })
            .collect();
        OrbitRecord {
            map,
            seed: [lossless(&seed.x), lossless(&seed.y)],
            arithmetic: Arithmetic::Bigfloat,
            points,
            metadata,
        }
    }

    /// The abscissa of the point at index `n`.
    pub fn abscissa(&self, n: i64) -> Option<&str> {
        self.points.iter().find(|p| p.n == n).map(|p| p.x.as_str())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: OrbitRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        rec.check_contiguous()?;
        Ok(rec)
    }

    fn check_contiguous(&self) -> Result<()> {
        for w in self.points.windows(2) {
            if w[1].n != w[0].n + 1 {
                return Err(Error::Parse(format!("orbit indices jump from {} to {}", w[0].n, w[1].n)));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,x,y\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.n, p.x, p.y);
        }
        out
    }

    pub fn exact_points(&self) -> Result<Vec<(i64, SquarePoint)>> {
        if self.arithmetic != Arithmetic::Exact {
            return Err(Error::Parse("record holds big-float points".into()));
        }
        self.points
            .iter()
            .map(|p| Ok((p.n, SquarePoint::new(parse_rational(&p.x)?, parse_rational(&p.y)?)?)))
            .collect()
    }

    pub fn exact_seed(&self) -> Result<SquarePoint> {
        SquarePoint::new(parse_rational(&self.seed[0])?, parse_rational(&self.seed[1])?)
    }

    pub fn plane_points(&self) -> Result<Vec<(i64, PlanePoint)>> {
        let prec = Precision::new(self.metadata.precision)?;
        self.points
            .iter()
            .map(|p| Ok((p.n, PlanePoint::new(parse_float(&p.x, prec)?, parse_float(&p.y, prec)?))))
            .collect()
    }

    pub fn plane_seed(&self) -> Result<PlanePoint> {
        let prec = Precision::new(self.metadata.precision)?;
        Ok(PlanePoint::new(parse_float(&self.seed[0], prec)?, parse_float(&self.seed[1], prec)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{orbit, ExactMap};
    use crate::plane_map::PlaneMaps;

    fn meta(precision: u32) -> OrbitMetadata {
        OrbitMetadata {
            precision,
            tolerances: Tolerances::default(),
            sampler_seed: None,
        }
    }

    #[test]
    fn exact_records_round_trip() {
        let seed = SquarePoint::ratio((1, 3), (-5, 7)).unwrap();
        let o = orbit(&ExactMap::square(), &seed, -4, 6).unwrap();
        let rec = OrbitRecord::from_exact(&o, &seed, meta(256));
        let back = OrbitRecord::from_json(&rec.to_json().unwrap()).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.exact_points().unwrap(), o.points);
        assert_eq!(back.abscissa(0), Some("1/3"));
        assert!(rec.to_csv().starts_with("n,x,y\n-4,"));
    }

    #[test]
    fn plane_records_round_trip() {
        let maps = PlaneMaps::default();
        let seed = PlanePoint::from_f64(Precision::DEFAULT, 0.25, -0.5);
        let pts = maps.h_orbit_lifted(&seed, -2, 3).unwrap();
        let rec = OrbitRecord::from_plane(MapId::Plane, &pts, &seed, meta(256));
        let back = OrbitRecord::from_json(&rec.to_json().unwrap()).unwrap();
        assert_eq!(back.plane_points().unwrap(), pts);
        assert_eq!(back.plane_seed().unwrap(), seed);
    }

    #[test]
    fn gaps_are_rejected() {
        let seed = SquarePoint::ratio((0, 1), (0, 1)).unwrap();
        let o = orbit(&ExactMap::square(), &seed, 0, 3).unwrap();
        let mut rec = OrbitRecord::from_exact(&o, &seed, meta(256));
        rec.points.remove(1);
        assert!(OrbitRecord::from_json(&rec.to_json().unwrap()).is_err());
    }
}
