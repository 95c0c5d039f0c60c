//! An orbit of the plane homeomorphism through its exact lift, next to
//! the naive iteration of the same map.

use bounded_orbit::numerics::{Direction, PlanePoint, Precision};
use bounded_orbit::plane_map::PlaneMaps;

fn main() -> bounded_orbit::Result<()> {
    let maps = PlaneMaps::new(Precision::DEFAULT);
    let seed = PlanePoint::from_f64(maps.precision(), 0.3, -0.4);
    let lifted = maps.h_orbit_lifted(&seed, -6, 12)?;
    let mut naive = seed.clone();
    for (n, p) in &lifted {
        if *n > 0 {
            naive = maps.h_map(&naive, Direction::Forward)?;
        }
        let [x, y] = p.to_f64();
        let drift = if *n >= 0 { format!("{:.1e}", naive.distance(p).to_f64()) } else { "-".into() };
        println!("n = {n:>3}: ({x:>10.6}, {y:>10.6})   naive drift {drift}");
    }
    Ok(())
}
