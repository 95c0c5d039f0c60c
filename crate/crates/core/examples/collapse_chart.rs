//! The collapse of the square onto itself: fixed fiber, halved axis,
//! collapsed edges, and the round trip on the interior.

use bounded_orbit::collapse_map::Collapse;
use bounded_orbit::numerics::{parse_rational, PlanePoint, Precision};

fn main() -> bounded_orbit::Result<()> {
    let prec = Precision::DEFAULT;
    let c = Collapse::new(prec);
    let at = |x: &str, y: &str| -> bounded_orbit::Result<PlanePoint> {
        Ok(PlanePoint::from_rationals(prec, &parse_rational(x)?, &parse_rational(y)?))
    };
    let points = [("0", "3/10"), ("3/5", "0"), ("1", "7/10"), ("1", "-1/5"), ("1/2", "1/2"), ("-1/4", "9/10")];
    for (x, y) in points {
        let p = at(x, y)?;
        let y = c.xi(&p)?;
        print!("xi{} = {}", p, y);
        if c.in_image_of_interior(&y) && p.x.clone().abs() < 1 && p.y.clone().abs() < 1 {
            let back = c.xi_inv(&y)?;
            print!("   round trip error {:.2e}", back.distance(&p).to_f64());
        }
        println!();
    }
    Ok(())
}
