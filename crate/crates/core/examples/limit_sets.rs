//! Limit-set estimates: corners of the square for the square map, the two
//! ray ends for the plane map, on both sides.

use bounded_orbit::dynamics::{limit_estimate, limit_estimate_lifted, ExactMap, Side};
use bounded_orbit::numerics::{PlanePoint, Precision, Tolerances};
use bounded_orbit::plane_map::PlaneMaps;
use bounded_orbit::square_map::SquarePoint;

fn main() -> bounded_orbit::Result<()> {
    let tol = Tolerances::default();
    let seed = SquarePoint::parse("1/3,-2/7")?;
    for side in [Side::Omega, Side::Alpha] {
        let e = limit_estimate(&ExactMap::square(), &seed, side, &tol)?;
        println!("f, {side:?} of {seed}: {:?} converged {}", e.candidates, e.converged);
    }
    let maps = PlaneMaps::new(Precision::DEFAULT);
    let x = PlanePoint::from_f64(maps.precision(), 0.0, 0.0);
    for side in [Side::Omega, Side::Alpha] {
        let e = limit_estimate_lifted(&maps, &x, side, &tol)?;
        println!("h, {side:?} of {x}: {:?} converged {}", e.candidates, e.converged);
    }
    Ok(())
}
