use std::cmp::Ordering;

use super::{Direction, Rational};
use crate::error::{Error, Result};

/// A continuous, strictly increasing piecewise-affine homeomorphism onto its
/// range, defined on `J = [-1, 1]` by its breakpoints.
///
/// Evaluation and inversion are exact: locate the segment by binary search
/// (on x forward, on y inverse) and interpolate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlFunction {
    knots: Vec<(Rational, Rational)>,
}

impl PlFunction {
    /// Builds a function from breakpoints. Repeated identical breakpoints are
    /// merged; x must start at -1, end at 1 and both coordinates must
    /// increase strictly.
    pub fn new(knots: Vec<(Rational, Rational)>) -> Result<Self> {
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(knots.len());
        for k in knots {
            if merged.last() == Some(&k) {
                continue;
            }
            merged.push(k);
        }
        if merged.len() < 2 {
            return Err(Error::domain("PlFunction::new", "need at least two breakpoints"));
        }
        if merged[0].0 != -1 || merged[merged.len() - 1].0 != 1 {
            return Err(Error::domain("PlFunction::new", "breakpoints must span [-1, 1]"));
        }
        for w in merged.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(Error::domain(
                    "PlFunction::new",
                    format!("not strictly increasing at x = {}", w[1].0),
                ));
            }
        }
        Ok(PlFunction { knots: merged })
    }

    pub fn identity() -> Self {
        PlFunction {
            knots: vec![
                (Rational::from(-1), Rational::from(-1)),
                (Rational::from(1), Rational::from(1)),
            ],
        }
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    pub fn is_identity(&self) -> bool {
        self.knots.iter().all(|(x, y)| x == y)
    }

    pub fn range(&self) -> (&Rational, &Rational) {
        (&self.knots[0].1, &self.knots[self.knots.len() - 1].1)
    }

    /// Index `j` of the segment `[x_j, x_{j+1}]` containing `x` (closed on
    /// the left, so breakpoints belong to the segment on their right).
    pub fn segment_of(&self, x: &Rational) -> Result<usize> {
        let last = self.knots.len() - 1;
        if *x < self.knots[0].0 || *x > self.knots[last].0 {
            return Err(Error::domain("pl_eval", format!("x = {x} outside [-1, 1]")));
        }
        let j = self.knots.partition_point(|(kx, _)| kx <= x);
        Ok(j.saturating_sub(1).min(last - 1))
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let j = self.segment_of(x)?;
        let (x0, y0) = &self.knots[j];
        let (x1, y1) = &self.knots[j + 1];
        if x == x0 {
            return Ok(y0.clone());
        }
        if x == x1 {
            return Ok(y1.clone());
        }
        Ok(interpolate(x, x0, y0, x1, y1))
    }

    pub fn eval_inverse(&self, y: &Rational) -> Result<Rational> {
        let last = self.knots.len() - 1;
        if *y < self.knots[0].1 || *y > self.knots[last].1 {
            return Err(Error::domain("pl_eval", format!("y = {y} outside the range")));
        }
        let j = self.knots.partition_point(|(_, ky)| ky <= y);
        let j = j.saturating_sub(1).min(last - 1);
        let (x0, y0) = &self.knots[j];
        let (x1, y1) = &self.knots[j + 1];
        if y == y0 {
            return Ok(x0.clone());
        }
        if y == y1 {
            return Ok(x1.clone());
        }
        Ok(interpolate(y, y0, x0, y1, x1))
    }

    pub fn apply(&self, x: &Rational, direction: Direction) -> Result<Rational> {
        match direction {
            Direction::Forward => self.eval(x),
            Direction::Inverse => self.eval_inverse(x),
        }
    }

    /// The inverse function (breakpoints with coordinates swapped). Only
    /// defined when the range is again `[-1, 1]`.
    pub fn inverse(&self) -> Result<Self> {
        PlFunction::new(self.knots.iter().map(|(x, y)| (y.clone(), x.clone())).collect())
    }

    /// `self ∘ inner`. Requires `inner` to map onto `[-1, 1]`.
    pub fn compose(&self, inner: &PlFunction) -> Result<Self> {
        let mut xs: Vec<Rational> = inner.knots.iter().map(|(x, _)| x.clone()).collect();
        for (x, _) in &self.knots {
            xs.push(inner.eval_inverse(x)?);
        }
        xs.sort();
        xs.dedup();
        let knots = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x)?)?;
                Ok((x, y))
            })
            .collect::<Result<Vec<_>>>()?;
        PlFunction::new(knots)
    }

    /// The convex blend `(1 - t) * a + t * b` for `t` in `[0, 1]`, as an
    /// exact breakpoint merge.
    pub fn blend(a: &PlFunction, b: &PlFunction, t: &Rational) -> Result<Self> {
        if *t < 0 || *t > 1 {
            return Err(Error::domain("PlFunction::blend", format!("t = {t} outside [0, 1]")));
        }
        if *t == 0 {
            return Ok(a.clone());
        }
        if *t == 1 {
            return Ok(b.clone());
        }
        let mut xs: Vec<Rational> = a
            .knots
            .iter()
            .chain(b.knots.iter())
            .map(|(x, _)| x.clone())
            .collect();
        xs.sort();
        xs.dedup();
        let one_minus_t = Rational::from(1 - t);
        let knots = xs
            .into_iter()
            .map(|x| {
                let ya = a.eval(&x)?;
                let yb = b.eval(&x)?;
                let y = Rational::from(&one_minus_t * &ya) + Rational::from(t * &yb);
                Ok((x, y))
            })
            .collect::<Result<Vec<_>>>()?;
        PlFunction::new(knots)
    }

    /// Strict monotonicity of the breakpoint values (always true for values
    /// built through [`PlFunction::new`]).
    pub fn is_strictly_increasing(&self) -> bool {
        self.knots
            .windows(2)
            .all(|w| w[0].0.cmp(&w[1].0) == Ordering::Less && w[0].1.cmp(&w[1].1) == Ordering::Less)
    }
}

fn interpolate(x: &Rational, x0: &Rational, y0: &Rational, x1: &Rational, y1: &Rational) -> Rational {
    let dx = Rational::from(x - x0);
    let run = Rational::from(x1 - x0);
    let rise = Rational::from(y1 - y0);
    let mut v = dx * rise;
    v /= run;
    v += y0;
    v
}

/// Exact evaluation (`Forward`) or inversion (`Inverse`) of a PL function.
pub fn pl_eval(f: &PlFunction, x: &Rational, direction: Direction) -> Result<Rational> {
    f.apply(x, direction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn base_shift() -> PlFunction {
        PlFunction::new(vec![(q(-1, 1), q(-1, 1)), (q(-1, 2), q(0, 1)), (q(0, 1), q(1, 2)), (q(1, 1), q(1, 1))])
            .unwrap()
    }

    #[test]
    fn evaluates_and_inverts_examples() {
        let f = base_shift();
        assert_eq!(pl_eval(&f, &q(0, 1), Direction::Forward).unwrap(), q(1, 2));
        assert_eq!(pl_eval(&f, &q(1, 2), Direction::Inverse).unwrap(), q(0, 1));
        let id = PlFunction::identity();
        assert_eq!(pl_eval(&id, &q(1, 3), Direction::Forward).unwrap(), q(1, 3));
    }

    #[test]
    fn rejects_out_of_domain() {
        let f = base_shift();
        assert!(f.eval(&q(3, 2)).is_err());
        assert!(f.eval_inverse(&q(-2, 1)).is_err());
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(PlFunction::new(vec![(q(-1, 1), q(0, 1)), (q(1, 1), q(0, 1))]).is_err());
        assert!(PlFunction::new(vec![(q(-1, 2), q(-1, 1)), (q(1, 1), q(1, 1))]).is_err());
        // duplicated breakpoints collapse
        let f = PlFunction::new(vec![
            (q(-1, 1), q(-1, 1)),
            (q(-1, 2), q(1, 2)),
            (q(-1, 2), q(1, 2)),
            (q(1, 1), q(1, 1)),
        ])
        .unwrap();
        assert_eq!(f.knots().len(), 3);
    }

    #[test]
    fn composition_matches_dense_sampling() {
        let f = base_shift();
        let g = PlFunction::new(vec![(q(-1, 1), q(-1, 1)), (q(1, 3), q(-1, 5)), (q(1, 1), q(1, 1))]).unwrap();
        let fg = f.compose(&g).unwrap();
        for k in 0..=512 {
            let x = q(k - 256, 256);
            let expected = f.eval(&g.eval(&x).unwrap()).unwrap();
            assert_eq!(fg.eval(&x).unwrap(), expected, "x = {x}");
        }
        assert!(fg.is_strictly_increasing());
    }

    #[test]
    fn blend_matches_pointwise_combination() {
        let f = base_shift();
        let g = PlFunction::identity();
        let t = q(3, 7);
        let h = PlFunction::blend(&g, &f, &t).unwrap();
        for k in 0..=200 {
            let x = q(k - 100, 100);
            let expected = Rational::from(1 - &t) * g.eval(&x).unwrap() + Rational::from(&t * f.eval(&x).unwrap());
            assert_eq!(h.eval(&x).unwrap(), expected);
        }
    }

    fn arb_rational_in_j() -> impl Strategy<Value = Rational> {
        (1i64..1_000_000).prop_flat_map(|d| (-d..=d).prop_map(move |n| Rational::from((n, d))))
    }

    fn arb_pl() -> impl Strategy<Value = PlFunction> {
        proptest::collection::vec((1u32..1000, 1u32..1000), 1..6).prop_map(|steps| {
            // random positive increments, normalised to span [-1, 1] on both axes
            let sx: u32 = steps.iter().map(|s| s.0).sum();
            let sy: u32 = steps.iter().map(|s| s.1).sum();
            let mut knots = vec![(Rational::from(-1), Rational::from(-1))];
            let (mut ax, mut ay) = (0u32, 0u32);
            for (dx, dy) in steps {
                ax += dx;
                ay += dy;
                knots.push((
                    Rational::from((2 * ax as i64, sx as i64)) - 1,
                    Rational::from((2 * ay as i64, sy as i64)) - 1,
                ));
            }
            PlFunction::new(knots).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn round_trip_is_exact(f in arb_pl(), x in arb_rational_in_j()) {
            let y = pl_eval(&f, &x, Direction::Forward).unwrap();
            prop_assert_eq!(pl_eval(&f, &y, Direction::Inverse).unwrap(), x);
        }

        #[test]
        fn composition_is_increasing_and_pointwise(f in arb_pl(), g in arb_pl(), x in arb_rational_in_j()) {
            let fg = f.compose(&g).unwrap();
            prop_assert!(fg.is_strictly_increasing());
            prop_assert_eq!(fg.eval(&x).unwrap(), f.eval(&g.eval(&x).unwrap()).unwrap());
        }

        #[test]
        fn rational_addition_is_exact(a in arb_rational_in_j(), b in arb_rational_in_j(), c in arb_rational_in_j()) {
            let left = Rational::from(&a + &b) + &c;
            let right = a.clone() + Rational::from(&b + &c);
            prop_assert_eq!(left, right);
            prop_assert_eq!(Rational::from(&a * &b), Rational::from(&b * &a));
        }
    }
}
