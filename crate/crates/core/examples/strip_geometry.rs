//! Where heights fall in the strip decomposition of the upper band, and
//! the picture of it written to `strips.svg`.

use bounded_orbit::geometry::scene;
use bounded_orbit::numerics::{parse_rational, Precision};
use bounded_orbit::strips::{block_index, strip_locate, thickness};

fn main() -> bounded_orbit::Result<()> {
    for n in 1..=5 {
        println!("block {n}: starts at level k = {}, thickness a = {}", block_index(n)?, thickness(n));
    }
    for text in ["1/2", "5/8", "13/16", "29/32", "0.99", "0.9999"] {
        let d = strip_locate(&parse_rational(text)?)?;
        println!("s = {text:>6}: level {} {:?} (block {:?}) [{}, {}, {}]", d.level, d.zone, d.n, d.lo, d.mid, d.hi);
    }
    let svg = scene(8, Precision::DEFAULT)?.to_svg();
    std::fs::write("strips.svg", &svg).map_err(|e| bounded_orbit::Error::Io(e.to_string()))?;
    println!("wrote strips.svg ({} bytes)", svg.len());
    Ok(())
}
