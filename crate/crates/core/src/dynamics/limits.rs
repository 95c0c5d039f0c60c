use serde::{Deserialize, Serialize};

use super::{orbit, Coordinates, Dynamics};
use crate::error::{Error, Result};
use crate::numerics::{PlanePoint, Tolerances};
use crate::plane_map::PlaneMaps;

/// Forward (`Omega`) or backward (`Alpha`) limit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Omega,
    Alpha,
}

impl Side {
    /// The tail window `[3H/4, H]` (or its negative) of a horizon `H`.
    pub fn window(self, horizon: u32) -> (i64, i64) {
        let h = horizon as i64;
        let lo = h - h / 4;
        match self {
            Side::Omega => (lo, h),
            Side::Alpha => (-h, -lo),
        }
    }
}

/// Limit points read off the tail of an orbit.
///
/// Tails are split by parity of the index; each parity class is expected to
/// settle on a single point. The latest iterate of each class stands in for
/// its target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub side: Side,
    pub candidates: Vec<[f64; 2]>,
    /// Index of the iterate standing in for each candidate.
    pub representatives: Vec<i64>,
    /// Largest distance from a window iterate to its candidate.
    pub distances: Vec<f64>,
    pub horizon: u32,
    pub window: (i64, i64),
    pub converged: bool,
    pub even_target: [f64; 2],
    pub odd_target: [f64; 2],
    pub tolerance: f64,
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Hausdorff distance between two finite point sets (infinite if one is
/// empty and the other is not).
pub fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let one_way = |p: &[[f64; 2]], q: &[[f64; 2]]| {
        p.iter()
            .map(|x| q.iter().map(|y| dist(*x, *y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

impl LimitEstimate {
    /// Clusters a tail `(n, point)` given in any order.
    pub fn from_tail(side: Side, tail: &[(i64, [f64; 2])], horizon: u32, tolerance: f64) -> Result<Self> {
        let latest = |parity: i64| {
            tail.iter()
                .filter(|(n, _)| n.rem_euclid(2) == parity)
                .max_by_key(|(n, _)| match side {
                    Side::Omega => *n,
                    Side::Alpha => -*n,
                })
                .copied()
        };
        let (Some(even), Some(odd)) = (latest(0), latest(1)) else {
            return Err(Error::domain("limit_estimate", "tail needs both parities"));
        };
        let spread = |parity: i64, target: [f64; 2]| {
            tail.iter()
                .filter(|(n, _)| n.rem_euclid(2) == parity)
                .map(|(_, p)| dist(*p, target))
                .fold(0.0, |acc: f64, d| if d.is_nan() { f64::INFINITY } else { acc.max(d) })
        };
        let (de, do_) = (spread(0, even.1), spread(1, odd.1));
        let converged = de < tolerance && do_ < tolerance;
        let window = (
            tail.iter().map(|t| t.0).min().unwrap_or(0),
            tail.iter().map(|t| t.0).max().unwrap_or(0),
        );
        let (candidates, representatives, distances) = if dist(even.1, odd.1) < tolerance {
            (vec![even.1], vec![even.0], vec![de.max(do_)])
        } else {
            (vec![even.1, odd.1], vec![even.0, odd.0], vec![de, do_])
        };
        Ok(LimitEstimate {
            side,
            candidates,
            representatives,
            distances,
            horizon,
            window,
            converged,
            even_target: even.1,
            odd_target: odd.1,
            tolerance,
        })
    }

    /// Converged and within `tolerance` of `expected` in the Hausdorff sense.
    pub fn matches(&self, expected: &[[f64; 2]], tolerance: f64) -> bool {
        self.converged && hausdorff(&self.candidates, expected) < tolerance
    }
}

/// Limit estimate of an orbit of `map`, over the tail window of the
/// configured horizon.
pub fn limit_estimate<D: Dynamics>(
    map: &D,
    seed: &D::Point,
    side: Side,
    tolerances: &Tolerances,
) -> Result<LimitEstimate> {
    let (lo, hi) = side.window(tolerances.horizon);
    let o = orbit(map, seed, lo, hi)?;
    let tail: Vec<(i64, [f64; 2])> = o.points.iter().map(|(n, p)| (*n, p.coords())).collect();
    LimitEstimate::from_tail(side, &tail, tolerances.horizon, tolerances.limitset)
}

/// Limit estimate of an orbit of the plane homeomorphism, through the
/// exact lift.
pub fn limit_estimate_lifted(
    maps: &PlaneMaps,
    seed: &PlanePoint,
    side: Side,
    tolerances: &Tolerances,
) -> Result<LimitEstimate> {
    let (lo, hi) = side.window(tolerances.horizon);
    let pts = maps.h_orbit_lifted(seed, lo, hi)?;
    let tail: Vec<(i64, [f64; 2])> = pts.iter().map(|(n, p)| (*n, p.coords())).collect();
    LimitEstimate::from_tail(side, &tail, tolerances.horizon, tolerances.limitset)
}

/// The first index `N` of `sequence` (in the given order) such that the
/// points at `N` and the `run` points after it all lie within `radius` of
/// one of `targets`.
pub fn stable_entry(sequence: &[(i64, [f64; 2])], targets: &[[f64; 2]], radius: f64, run: usize) -> Option<i64> {
    let mut start = None;
    let mut count = 0usize;
    for (n, p) in sequence {
        let near = targets.iter().any(|t| dist(*p, *t) < radius);
        if near {
            if count == 0 {
                start = Some(*n);
            }
            count += 1;
            if count > run {
                return start;
            }
        } else {
            count = 0;
            start = None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::ExactMap;
    use crate::numerics::Precision;
    use crate::square_map::SquarePoint;

    const V1: [f64; 2] = [-1.0, 1.0];
    const V2: [f64; 2] = [1.0, 1.0];
    const V3: [f64; 2] = [-1.0, -1.0];
    const V4: [f64; 2] = [1.0, -1.0];

    #[test]
    fn square_limits_are_corner_pairs() {
        let f = ExactMap::square();
        let seed = SquarePoint::ratio((0, 1), (1, 4)).unwrap();
        let tol = Tolerances::default();
        let omega = limit_estimate(&f, &seed, Side::Omega, &tol).unwrap();
        assert!(omega.matches(&[V1, V2], 1e-3), "{omega:?}");
        assert!(dist(omega.even_target, V2) < 1e-3);
        let alpha = limit_estimate(&f, &seed, Side::Alpha, &tol).unwrap();
        assert!(alpha.matches(&[V3, V4], 1e-3), "{alpha:?}");
        assert_eq!(omega.window, (300, 400));
    }

    #[test]
    fn plane_limits_are_the_ray_ends() {
        let maps = PlaneMaps::default();
        let seed = PlanePoint::from_f64(Precision::DEFAULT, 0.0, 0.0);
        let tol = Tolerances::default();
        let omega = limit_estimate_lifted(&maps, &seed, Side::Omega, &tol).unwrap();
        assert!(omega.matches(&[[-1.0, 0.0], [1.0, 0.0]], 1e-3), "{omega:?}");
    }

    #[test]
    fn non_convergence_is_reported() {
        let tail: Vec<(i64, [f64; 2])> = (0..20).map(|n| (n, [n as f64, 0.0])).collect();
        let est = LimitEstimate::from_tail(Side::Omega, &tail, 20, 1e-3).unwrap();
        assert!(!est.converged);
        assert!(LimitEstimate::from_tail(Side::Omega, &tail[..1], 20, 1e-3).is_err());
    }

    #[test]
    fn stable_entry_finds_the_first_run() {
        let seq: Vec<(i64, [f64; 2])> = (0..10)
            .map(|n| (n, if n == 3 || n >= 5 { [1.0, 0.0] } else { [5.0, 0.0] }))
            .collect();
        assert_eq!(stable_entry(&seq, &[[1.0, 0.0]], 0.1, 3), Some(5));
        assert_eq!(stable_entry(&seq, &[[1.0, 0.0]], 0.1, 5), None);
    }

    #[test]
    fn hausdorff_basics() {
        assert_eq!(hausdorff(&[V1, V2], &[V2, V1]), 0.0);
        assert_eq!(hausdorff(&[V1], &[V1, V2]), 2.0);
        assert!(hausdorff(&[], &[V1]).is_infinite());
    }
}
