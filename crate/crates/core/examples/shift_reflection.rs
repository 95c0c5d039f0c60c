//! The reference shift-reflection: an involution off the middle strip
//! whose orbit of the origin climbs forever.

use bounded_orbit::numerics::{Direction, PlanePoint, Precision};
use bounded_orbit::plane_map::example_shift_reflection;

fn main() {
    let prec = Precision::DEFAULT;
    let mut p = PlanePoint::from_f64(prec, 0.0, 0.0);
    for n in 1..=5 {
        p = example_shift_reflection(&p, Direction::Forward);
        println!("G^{n}(0, 0) = {p}");
    }
    let q = PlanePoint::from_f64(prec, 1.5, -0.25);
    let once = example_shift_reflection(&q, Direction::Forward);
    let twice = example_shift_reflection(&once, Direction::Forward);
    println!("G{q} = {once}, G^2{q} = {twice}");
    let r = PlanePoint::from_f64(prec, 0.5, 0.0);
    println!("G{r} = {}", example_shift_reflection(&r, Direction::Forward));
}
