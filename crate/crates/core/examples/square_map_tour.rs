//! The square map on a handful of exact points: images, preimages and the
//! case data the evaluator picked.

use bounded_orbit::numerics::Direction;
use bounded_orbit::square_map::{cell_of, homeomorphism, RegionTag, SquarePoint};

fn main() -> bounded_orbit::Result<()> {
    for text in ["0,1/4", "1/2,-1/3", "-7/8,3/4", "1,0", "0,-1", "3/5,999/1000"] {
        let p = SquarePoint::parse(text)?;
        let fwd = homeomorphism(&p, Direction::Forward)?;
        let back = homeomorphism(&p, Direction::Inverse)?;
        println!("p = {p}");
        println!("  f(p)    = {fwd}   region {:?}", RegionTag::forward(p.s()));
        println!("  f^-1(p) = {back}");
        println!("  cell    = {:?}", cell_of(&p)?);
        assert_eq!(homeomorphism(&fwd, Direction::Inverse)?, p);
    }
    Ok(())
}
