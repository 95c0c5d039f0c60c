//! Block decomposition of the upper band `J x [1/2, 1]`.
//!
//! Level `i >= 1` is the strip `J x [1 - 2^-i, 1 - 2^-(i+1)]`, the image of
//! `J x [0, 1/2]` under `i` vertical shifts. Level 1 is left untouched; every
//! level `i >= 2` splits at `mid` into a lower blend zone and an upper shear
//! zone. Levels are grouped into blocks: block `n` holds the `2n + 2` levels
//! `n(n+1) ..= (n+1)(n+2) - 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{pow2, Rational};

/// Zone of a height inside the upper band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Zone {
    /// Level 1, `[1/2, 3/4]`, kept fixed.
    D1Core,
    /// `[mid, hi)` of a level `i >= 2`: one fixed rule per horizontal line.
    BZone,
    /// `[lo, mid)` of a level `i >= 2`: affine blend of the neighbouring rules.
    FZone,
    /// The top edge `s = 1`.
    TopLine,
}

/// Where a height of the upper band sits in the decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripDescriptor {
    pub level: u64,
    pub zone: Zone,
    /// Block index `n(i)`; `None` for [`Zone::D1Core`] and [`Zone::TopLine`].
    pub n: Option<u64>,
    pub lo: Rational,
    pub mid: Rational,
    pub hi: Rational,
}

/// Horizontal bands of the square used by the case splits of the square map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Band {
    /// `J x [0, 1]`
    R0,
    /// `J x [1/2, 1]`
    R1,
    /// `J x [0, 1/2]`
    D0,
    /// `J x [-1, 0]`
    RMinus1,
    /// `J x [-1, -1/2]`
    RMinus2,
    /// `J x [-1/2, 0]`
    DMinus1,
}

impl Band {
    pub fn bounds(self) -> (Rational, Rational) {
        let h = |n, d| Rational::from((n, d));
        match self {
            Band::R0 => (h(0, 1), h(1, 1)),
            Band::R1 => (h(1, 2), h(1, 1)),
            Band::D0 => (h(0, 1), h(1, 2)),
            Band::RMinus1 => (h(-1, 1), h(0, 1)),
            Band::RMinus2 => (h(-1, 1), h(-1, 2)),
            Band::DMinus1 => (h(-1, 2), h(0, 1)),
        }
    }

    /// Closed membership.
    pub fn contains(self, s: &Rational) -> bool {
        let (lo, hi) = self.bounds();
        lo <= *s && *s <= hi
    }
}

/// The thickness sequence `a_n = 2^-(n+1)`: `a_1 = 1/4`, strictly
/// decreasing to zero.
pub fn thickness(n: u64) -> Rational {
    pow2(-(n as i64) - 1)
}

/// `k(n) = n (n + 1)`, the first level of block `n`.
pub fn block_index(n: u64) -> Result<u64> {
    if n < 1 {
        return Err(Error::domain("block_index", "n must be at least 1"));
    }
    n.checked_mul(n + 1)
        .ok_or_else(|| Error::domain("block_index", format!("n = {n} overflows")))
}

/// `n(i) = max { m : k(m) <= i }`, the block containing level `i >= 2`.
pub fn block_of(i: u64) -> Result<u64> {
    if i < 2 {
        return Err(Error::domain("block_of", format!("level {i} < 2")));
    }
    // floor((sqrt(4i + 1) - 1) / 2), then correct for rounding
    let mut m = ((4 * i as u128 + 1).isqrt() as u64 - 1) / 2;
    while (m + 1) * (m + 2) <= i {
        m += 1;
    }
    while m * (m + 1) > i {
        m -= 1;
    }
    Ok(m)
}

/// The `i`-fold iterate of the base shift on heights (negative `i` iterates
/// the inverse).
pub fn f01_pow(s: &Rational, i: i64) -> Result<Rational> {
    if *s < -1 || *s > 1 {
        return Err(Error::domain("f01_pow", format!("s = {s} outside J")));
    }
    if i >= 0 && *s >= 0 {
        // 1 - (1 - s) 2^-i
        let mut gap = Rational::from(1 - s);
        gap >>= i as u32;
        return Ok(1 - gap);
    }
    let direction = if i >= 0 {
        crate::numerics::Direction::Forward
    } else {
        crate::numerics::Direction::Inverse
    };
    let mut v = s.clone();
    for _ in 0..i.unsigned_abs() {
        v = crate::square_map::level_shift(&v, direction)?;
    }
    Ok(v)
}

/// Exact bounds of level `i >= 2` (zone not yet decided).
pub fn level_bounds(i: u64) -> Result<(u64, Rational, Rational, Rational)> {
    let n = block_of(i)?;
    let lo = 1 - pow2(-(i as i64));
    let hi = 1 - pow2(-(i as i64) - 1);
    let mut gap = Rational::from(1 - thickness(n));
    gap >>= i as u32;
    let mid = 1 - gap;
    Ok((n, lo, mid, hi))
}

/// Level of a height `s` in `(3/4, 1)`: the unique `i >= 2` with
/// `1 - 2^-i <= s < 1 - 2^-(i+1)`.
fn level_of(s: &Rational) -> u64 {
    let d = Rational::from(1 - s);
    // 2^-(i+1) < d <= 2^-i
    let guess = (d.denom().significant_bits() as i64 - d.numer().significant_bits() as i64).max(2);
    let mut i = guess as u64;
    while i > 2 && pow2(-(i as i64)) < d {
        i -= 1;
    }
    while pow2(-(i as i64) - 1) >= d {
        i += 1;
    }
    i
}

/// Locates a height of the upper band. Seams resolve upward: the top of
/// level `i` is the bottom of level `i + 1`'s blend zone.
pub fn strip_locate(s: &Rational) -> Result<StripDescriptor> {
    let half = Rational::from((1, 2));
    if *s < half || *s > 1 {
        return Err(Error::domain("strip_locate", format!("s = {s} outside [1/2, 1]")));
    }
    if *s == 1 {
        let one = Rational::from(1);
        return Ok(StripDescriptor {
            level: u64::MAX,
            zone: Zone::TopLine,
            n: None,
            lo: one.clone(),
            mid: one.clone(),
            hi: one,
        });
    }
    let three_quarters = Rational::from((3, 4));
    if *s <= three_quarters {
        return Ok(StripDescriptor {
            level: 1,
            zone: Zone::D1Core,
            n: None,
            lo: half.clone(),
            mid: half,
            hi: three_quarters,
        });
    }
    let level = level_of(s);
    let (n, lo, mid, hi) = level_bounds(level)?;
    let zone = if *s < mid { Zone::FZone } else { Zone::BZone };
    Ok(StripDescriptor {
        level,
        zone,
        n: Some(n),
        lo,
        mid,
        hi,
    })
}

/// One row of the strip table exported by the `geometry` command.
#[derive(Clone, Debug, Serialize)]
pub struct StripRow {
    pub i: u64,
    pub zone: Zone,
    pub n: Option<u64>,
    pub lo: String,
    pub mid: String,
    pub hi: String,
}

/// Strip table for levels `1 ..= max_level`: level 1 as one core row, each
/// later level as an F row followed by a B row.
pub fn strip_table(max_level: u64) -> Result<Vec<StripRow>> {
    let mut rows = vec![StripRow {
        i: 1,
        zone: Zone::D1Core,
        n: None,
        lo: "1/2".into(),
        mid: "1/2".into(),
        hi: "3/4".into(),
    }];
    for i in 2..=max_level {
        let (n, lo, mid, hi) = level_bounds(i)?;
        for zone in [Zone::FZone, Zone::BZone] {
            rows.push(StripRow {
                i,
                zone,
                n: Some(n),
                lo: lo.to_string(),
                mid: mid.to_string(),
                hi: hi.to_string(),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn block_index_examples() {
        assert_eq!(block_index(1).unwrap(), 2);
        assert_eq!(block_index(2).unwrap(), 6);
        assert_eq!(block_index(3).unwrap(), 12);
        assert!(block_index(0).is_err());
    }

    #[test]
    fn block_of_examples() {
        for i in 2..=5 {
            assert_eq!(block_of(i).unwrap(), 1);
        }
        for i in 6..=11 {
            assert_eq!(block_of(i).unwrap(), 2);
        }
        for i in 12..=19 {
            assert_eq!(block_of(i).unwrap(), 3);
        }
        assert!(block_of(1).is_err());
    }

    #[test]
    fn blocks_partition_levels() {
        for n in 1..=50u64 {
            let k = block_index(n).unwrap();
            assert_eq!(k % 2, 0);
            assert_eq!(block_of(k).unwrap(), n);
            assert_eq!(block_index(n + 1).unwrap(), k + 2 * n + 2);
            assert_eq!(block_of(k + 2 * n + 1).unwrap(), n);
        }
    }

    #[test]
    fn f01_pow_examples() {
        assert_eq!(f01_pow(&q(0, 1), 2).unwrap(), q(3, 4));
        assert_eq!(f01_pow(&q(1, 4), 2).unwrap(), q(13, 16));
        assert_eq!(f01_pow(&q(0, 1), -2).unwrap(), q(-3, 4));
        assert_eq!(f01_pow(&q(-3, 4), 2).unwrap(), q(0, 1));
        assert!(f01_pow(&q(2, 1), 1).is_err());
    }

    #[test]
    fn strip_locate_examples() {
        let d = strip_locate(&q(13, 16)).unwrap();
        assert_eq!((d.level, d.zone, d.n), (2, Zone::BZone, Some(1)));
        assert_eq!((d.lo, d.mid, d.hi), (q(3, 4), q(13, 16), q(7, 8)));

        assert_eq!(strip_locate(&q(5, 8)).unwrap().zone, Zone::D1Core);

        let d = strip_locate(&q(29, 32)).unwrap();
        assert_eq!((d.level, d.zone, d.n), (3, Zone::BZone, Some(1)));
        assert_eq!(d.mid, q(29, 32));

        assert_eq!(strip_locate(&q(1, 1)).unwrap().zone, Zone::TopLine);
        assert!(strip_locate(&q(1, 4)).is_err());
    }

    #[test]
    fn seams_resolve_upward() {
        // top of level 2 is the F bottom of level 3
        let d = strip_locate(&q(7, 8)).unwrap();
        assert_eq!((d.level, d.zone), (3, Zone::FZone));
        assert_eq!(d.lo, q(7, 8));
    }

    #[test]
    fn random_heights_tile_the_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let den: i64 = rng.gen_range(4..1_000_000);
            let num: i64 = rng.gen_range(den / 2..den);
            let s = q(num, den);
            let d = strip_locate(&s).unwrap();
            match d.zone {
                Zone::D1Core => assert!(s <= q(3, 4)),
                Zone::FZone => assert!(d.lo <= s && s < d.mid),
                Zone::BZone => assert!(d.mid <= s && s < d.hi),
                Zone::TopLine => unreachable!(),
            }
        }
    }

    #[test]
    fn consecutive_levels_share_seams() {
        for i in 2..200 {
            let (_, lo, mid, hi) = level_bounds(i).unwrap();
            assert!(lo < mid && mid < hi, "level {i}");
            let (_, next_lo, _, _) = level_bounds(i + 1).unwrap();
            assert_eq!(hi, next_lo);
            assert_eq!(lo, f01_pow(&q(0, 1), i as i64).unwrap());
            assert_eq!(hi, f01_pow(&q(1, 2), i as i64).unwrap());
            assert_eq!(mid, f01_pow(&thickness(block_of(i).unwrap()), i as i64).unwrap());
        }
    }

    #[test]
    fn sweep_covers_without_overlap() {
        let rows = strip_table(12).unwrap();
        let mut prev_hi = q(1, 2);
        for row in rows {
            let lo = Rational::from(Rational::parse(&row.lo).unwrap());
            let mid = Rational::from(Rational::parse(&row.mid).unwrap());
            let hi = Rational::from(Rational::parse(&row.hi).unwrap());
            match row.zone {
                Zone::D1Core => {
                    assert_eq!(lo, prev_hi);
                    prev_hi = hi;
                }
                Zone::FZone => {
                    assert_eq!(lo, prev_hi);
                    prev_hi = mid;
                }
                Zone::BZone => {
                    assert_eq!(mid, prev_hi);
                    prev_hi = hi;
                }
                Zone::TopLine => unreachable!(),
            }
        }
        assert_eq!(prev_hi, 1 - pow2(-13));
    }
}
