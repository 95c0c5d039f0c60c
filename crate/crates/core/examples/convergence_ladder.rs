//! The convergence ladder for a seed in the lower half of the upper band:
//! even abscissae climb, and every block pushes them past `1 - 2^-m`.

use bounded_orbit::dynamics::{ladder_witness, Evidence};
use bounded_orbit::square_map::SquarePoint;

fn main() -> bounded_orbit::Result<()> {
    let seed = SquarePoint::parse("0,1/4")?;
    let cert = ladder_witness(&seed, 6)?;
    let Evidence::Ladder(e) = &cert.evidence else { unreachable!() };
    println!("seed {seed}, entry block mu = {}", e.mu);
    for (i, r) in e.ladder.iter().filter(|(i, _)| i % 2 == 0).take(12) {
        println!("  r_{i:<3} = {r}");
    }
    for rung in &e.rungs {
        println!(
            "  block {}: r_{} = {}  ->  r_{} = {}  (bound {}, holds {})",
            rung.m, rung.start, rung.start_r, rung.end, rung.end_r, rung.bound, rung.holds
        );
    }
    println!("pass: {}", cert.pass);
    Ok(())
}
