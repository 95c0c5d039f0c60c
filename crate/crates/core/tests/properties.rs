use proptest::prelude::*;

use bounded_orbit::collapse_map::Collapse;
use bounded_orbit::dynamics::{ladder_witness, orbit, ExactMap};
use bounded_orbit::numerics::{Direction, PlanePoint, Precision, Rational};
use bounded_orbit::plane_map::PlaneMaps;
use bounded_orbit::square_map::{homeomorphism, SquarePoint};

const PREC: Precision = Precision::DEFAULT;

/// Rationals `n / d` in `[-1, 1]`.
fn unit() -> impl Strategy<Value = Rational> {
    (1i64..=4096).prop_flat_map(|d| (-d..=d).prop_map(move |n| Rational::from((n, d))))
}

/// Rationals strictly inside `(-1, 1)`, kept `1/4096` away from the ends.
fn open_unit() -> impl Strategy<Value = Rational> {
    (-4095i64..=4095).prop_map(|n| Rational::from((n, 4096)))
}

fn square() -> impl Strategy<Value = SquarePoint> {
    (unit(), unit()).prop_map(|(r, s)| SquarePoint::new(r, s).unwrap())
}

fn f01(s: &Rational) -> Rational {
    let half = Rational::from((1, 2));
    if *s <= -half.clone() {
        Rational::from(s * 2u32) + 1u32
    } else if *s <= 0 {
        Rational::from(s + &half)
    } else {
        Rational::from(s + 1u32) / 2u32
    }
}

fn gap(a: &PlanePoint, b: &PlanePoint) -> f64 {
    a.distance(b).to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn square_map_is_a_bijection(p in square()) {
        let fp = homeomorphism(&p, Direction::Forward).unwrap();
        prop_assert_eq!(homeomorphism(&fp, Direction::Inverse).unwrap(), p.clone());
        let bp = homeomorphism(&p, Direction::Inverse).unwrap();
        prop_assert_eq!(homeomorphism(&bp, Direction::Forward).unwrap(), p);
    }

    #[test]
    fn heights_follow_the_base_shift(p in square()) {
        let fp = homeomorphism(&p, Direction::Forward).unwrap();
        prop_assert_eq!(fp.s(), &f01(p.s()));
    }

    #[test]
    fn orbit_segments_compose(p in square(), a in -20i64..0, b in 1i64..20) {
        let f = ExactMap::square();
        let whole = orbit(&f, &p, a, b).unwrap();
        let mid = whole.get(b / 2).unwrap().clone();
        let tail = orbit(&f, &mid, 0, b - b / 2).unwrap();
        for (k, q) in &tail.points {
            prop_assert_eq!(whole.get(b / 2 + k).unwrap(), q);
        }
        let back = orbit(&f, whole.get(a).unwrap(), 0, -a).unwrap();
        prop_assert_eq!(back.get(-a).unwrap(), &p);
    }

    #[test]
    fn orbits_are_deterministic(p in square()) {
        let f = ExactMap::square();
        prop_assert_eq!(orbit(&f, &p, -10, 10).unwrap(), orbit(&f, &p, -10, 10).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tangent_chart_round_trips(r in open_unit(), s in open_unit()) {
        let maps = PlaneMaps::new(PREC);
        let x = PlanePoint::from_rationals(PREC, &r, &s);
        let y = maps.tangent_chart(&x, Direction::Forward).unwrap();
        let back = maps.tangent_chart(&y, Direction::Inverse).unwrap();
        prop_assert!(gap(&back, &x) < 1e-60);
    }

    #[test]
    fn collapse_commutes_with_both_reflections(r in unit(), s in unit()) {
        let c = Collapse::new(PREC);
        let x = PlanePoint::from_rationals(PREC, &r, &s);
        let y = c.xi(&x).unwrap();
        prop_assert!(gap(&c.xi(&x.mirrored()).unwrap(), &y.mirrored()) < 1e-60);
        prop_assert!(gap(&c.xi(&x.flipped()).unwrap(), &y.flipped()) < 1e-60);
    }

    #[test]
    fn collapse_round_trips_inside(r in open_unit(), s in open_unit()) {
        let c = Collapse::new(PREC);
        let x = PlanePoint::from_rationals(PREC, &r, &s);
        prop_assert!(gap(&c.xi_inv(&c.xi(&x).unwrap()).unwrap(), &x) < 1e-60);
    }

    #[test]
    fn ladder_climbs_for_lower_band_seeds(r in open_unit(), n in 1i64..=2048) {
        let seed = SquarePoint::new(r, Rational::from((n, 4096))).unwrap();
        let cert = ladder_witness(&seed, 4).unwrap();
        prop_assert!(cert.pass);
    }
}
