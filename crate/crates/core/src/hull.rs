//! Lower convex hull of a planar point set, as a function.
//!
//! The convex hull function of a finite set is the largest convex function
//! lying below every point; it is piecewise linear with breakpoints at a
//! subset of the input points. Used to rebuild sorted component values from
//! noisy partial sums.

use crate::rational::Rational;
use crate::{Error, Result};

/// A piecewise-linear convex function given by its breakpoints, strictly
/// increasing in `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct HullFunction {
    pub points: Vec<(Rational, Rational)>,
}

impl HullFunction {
    /// Domain `[min x, max x]`.
    pub fn domain(&self) -> (&Rational, &Rational) {
        (&self.points[0].0, &self.points[self.points.len() - 1].0)
    }

    /// Evaluates by linear interpolation; errors outside the domain.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::Domain(format!("{x} outside hull domain [{lo}, {hi}]")));
        }
        for w in self.points.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x >= x0 && x <= x1 {
                let t = (x - x0) / (x1 - x0);
                return Ok(y0 + (y1 - y0) * t);
            }
        }
        // Single-point domain.
        Ok(self.points[0].1.clone())
    }

    /// Slopes of consecutive segments (empty for a single point).
    pub fn slopes(&self) -> Vec<Rational> {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }
}

/// Largest convex function below the given points. Duplicate `x` values
/// keep the smallest `y`.
pub fn convex_hull_function(points: &[(Rational, Rational)]) -> Result<HullFunction> {
    if points.is_empty() {
        return Err(Error::Malformed("convex hull of empty point set".into()));
    }
    let mut sorted: Vec<(Rational, Rational)> = points.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    sorted.dedup_by(|next, prev| {
        if next.0 == prev.0 {
            // Sorted by y within equal x: keep the first (smallest y).
            true
        } else {
            false
        }
    });
    if sorted.len() == 1 {
        return Ok(HullFunction { points: sorted });
    }
    // Monotone-chain lower hull: pop while the middle point is at or above
    // the chord (cross product <= 0 keeps the hull minimal).
    let mut hull: Vec<(Rational, Rational)> = Vec::with_capacity(sorted.len());
    for p in sorted {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // cross((b - a), (p - a)) <= 0 means b is not strictly below the
            // chord a-p, so b is redundant for the lower hull.
            let cross =
                (&b.0 - &a.0) * (&p.1 - &a.1) - (&b.1 - &a.1) * (&p.0 - &a.0);
            if cross <= num_traits::Zero::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(HullFunction { points: hull })
}
