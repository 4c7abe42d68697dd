//! Standard template constructions.
//!
//! The two-point standard template pins the bottom two components to given
//! values at the endpoints and pushes the first component as low as the
//! template conditions allow; gluing a feasible chain of points produces the
//! partial templates used in every lower-bound construction, and the
//! geometric sequence `t_k = lambda^k`, `eps_k = tau t_k` produces the
//! exponentially equivariant two-parameter family.

use num_traits::{Signed, Zero};

use crate::dims::Dims;
use crate::rational::{int, rat, Rational};
use crate::template::{Tail, Template};
use crate::{Error, Result};

/// A chain of pinned points `(t_k, eps_k)` with `eps_k >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardSpec {
    pub dims: Dims,
    pub points: Vec<(Rational, Rational)>,
}

/// The two-parameter family `f[tau, lambda]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoParamSpec {
    pub dims: Dims,
    pub tau: Rational,
    pub lambda: Rational,
}

/// Checks the three feasibility inequalities for one pair of points.
/// Violations name the inequality:
/// - `endpoint-slope-bound`: `-dt/m <= de <= dt/n` (the interpolating pair
///   of slopes exists);
/// - `pair-speed-bound`: `de >= -((n-1)/2n) dt` when `m = 1`, and
///   `de <= ((m-1)/2m) dt` when `n = 1` (no stretch where the bottom two
///   components both move at an extreme speed);
/// - `apex-merge-bound`: `(n-1)(dt/n - de) >= d e_k` or
///   `(m-1)(dt/m + de) >= d e_{k+1}` (the middle components catch the
///   second one at its apex, so convexity survives there).
pub fn check_pair_feasible(
    dims: Dims,
    p0: &(Rational, Rational),
    p1: &(Rational, Rational),
) -> Result<()> {
    let (m, n, d) = (dims.m as i64, dims.n as i64, dims.d() as i64);
    let dt = &p1.0 - &p0.0;
    let de = &p1.1 - &p0.1;
    if !dt.is_positive() {
        return Err(Error::Malformed("points must strictly increase in t".into()));
    }
    if p0.1.is_negative() || p1.1.is_negative() {
        return Err(Error::Malformed("eps values must be nonnegative".into()));
    }
    if de < -&dt / int(m) || de > &dt / int(n) {
        return Err(Error::Infeasible(format!(
            "endpoint-slope-bound: de = {de} outside [-dt/m, dt/n] for dt = {dt}"
        )));
    }
    if m == 1 && de < -rat(n - 1, 2 * n) * &dt {
        return Err(Error::Infeasible(format!(
            "pair-speed-bound: de = {de} below -((n-1)/2n) dt for dt = {dt}"
        )));
    }
    if n == 1 && de > rat(m - 1, 2 * m) * &dt {
        return Err(Error::Infeasible(format!(
            "pair-speed-bound: de = {de} above ((m-1)/2m) dt for dt = {dt}"
        )));
    }
    let left = rat(n - 1, 1) * (&dt / int(n) - &de) - int(d) * &p0.1;
    let right = rat(m - 1, 1) * (&dt / int(m) + &de) - int(d) * &p1.1;
    if left.is_negative() && right.is_negative() {
        return Err(Error::Infeasible(format!(
            "apex-merge-bound: (n-1)(dt/n - de) = {} < d eps_k = {} and (m-1)(dt/m + de) = {} < d eps_next = {}",
            rat(n - 1, 1) * (&dt / int(n) - &de),
            int(d) * &p0.1,
            rat(m - 1, 1) * (&dt / int(m) + &de),
            int(d) * &p1.1,
        )));
    }
    Ok(())
}

/// Breakpoint/value rows of the standard pair on `[t0, t1]`, exclusive of
/// the final point (so that chains can be concatenated).
fn pair_rows(
    dims: Dims,
    p0: &(Rational, Rational),
    p1: &(Rational, Rational),
) -> Result<Vec<(Rational, Vec<Rational>)>> {
    check_pair_feasible(dims, p0, p1)?;
    let d = dims.d();
    let (m_i, n_i) = (dims.m as i64, dims.n as i64);
    let dt = &p1.0 - &p0.0;
    let de = &p1.1 - &p0.1;
    let up = rat(1, m_i);
    let down = -rat(1, n_i);

    // g1 descends then ascends; g2 ascends then descends; both interpolate
    // -eps at the endpoints (net change -de). The ascent of g1 and the
    // ascent of g2 have the same duration.
    let ascent = rat(m_i * n_i, (m_i + n_i) as i64) * (&dt / int(n_i) - &de);
    let g1_valley = &p1.0 - &ascent; // g1 switches down->up here
    let g2_apex = &p0.0 + &ascent; // g2 switches up->down here

    // Piecewise description of g1 and g2 as (breakpoint, value) anchored at
    // the left endpoint; evaluate lazily.
    let g1 = |t: &Rational| -> Rational {
        if t <= &g1_valley {
            -&p0.1 + &down * (t - &p0.0)
        } else {
            let v = -&p0.1 + &down * (&g1_valley - &p0.0);
            v + &up * (t - &g1_valley)
        }
    };
    let g2 = |t: &Rational| -> Rational {
        if t <= &g2_apex {
            -&p0.1 + &up * (t - &p0.0)
        } else {
            let v = -&p0.1 + &up * (&g2_apex - &p0.0);
            v + &down * (t - &g2_apex)
        }
    };
    // g3 = ... = g_d = -(g1 + g2)/(d - 2) keeps the sum at zero. For d = 2
    // there is no middle component and f = (g1, g2) outright.
    let g_rest = |t: &Rational| -> Rational {
        if d == 2 {
            int(0)
        } else {
            -(g1(t) + g2(t)) / int((d - 2) as i64)
        }
    };

    // Candidate breakpoints: endpoints, slope switches of g1/g2, and the
    // crossings of g2 with g_rest (entry/exit of the merged stretch).
    let mut cuts: Vec<Rational> = vec![p0.0.clone(), g1_valley.clone(), g2_apex.clone()];
    if d > 2 {
        // g2 - g_rest is piecewise affine with kinks at the two switches;
        // find its roots on each of the three stretches.
        let mut stretch_bounds = vec![p0.0.clone()];
        let mut switches = vec![g2_apex.clone(), g1_valley.clone()];
        switches.sort();
        for s in switches {
            if s > p0.0 && s < p1.0 {
                stretch_bounds.push(s);
            }
        }
        stretch_bounds.push(p1.0.clone());
        stretch_bounds.dedup();
        for w in stretch_bounds.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let fa = g2(a) - g_rest(a);
            let fb = g2(b) - g_rest(b);
            if fa.is_zero() {
                cuts.push(a.clone());
            }
            if (fa.is_positive() && fb.is_negative()) || (fa.is_negative() && fb.is_positive()) {
                // Affine on [a, b]: root at a + (b-a) * fa/(fa - fb).
                let root = a + (b - a) * &fa / (&fa - &fb);
                cuts.push(root);
            }
        }
    }
    cuts.retain(|c| c >= &p0.0 && c < &p1.0);
    cuts.sort();
    cuts.dedup();

    let mut rows = Vec::new();
    for t in cuts {
        let (v1, v2, vr) = (g1(&t), g2(&t), g_rest(&t));
        let merged = d > 2 && v2 > vr;
        let mut row = Vec::with_capacity(d);
        if merged {
            // f1 = g1, the rest share -g1/(d-1).
            row.push(v1.clone());
            let shared = -&v1 / int((d - 1) as i64);
            for _ in 1..d {
                row.push(shared.clone());
            }
        } else {
            row.push(v1);
            row.push(v2);
            for _ in 2..d {
                row.push(vr.clone());
            }
        }
        rows.push((t, row));
    }
    Ok(rows)
}

/// The standard template defined by two points, as a partial template on
/// `[t0, t1]` (finite horizon). Passes validation and is balanced.
pub fn build_standard_pair(
    dims: Dims,
    p0: (Rational, Rational),
    p1: (Rational, Rational),
) -> Result<Template> {
    let mut rows = pair_rows(dims, &p0, &p1)?;
    let d = dims.d();
    // Final point: f1 = f2 = -eps1, the rest at 2 eps1/(d-2); for d = 2 just
    // the pinned pair.
    let mut last = vec![-p1.1.clone(), -p1.1.clone()];
    if d > 2 {
        let shared = rat(2, (d - 2) as i64) * &p1.1;
        last.extend(std::iter::repeat(shared).take(d - 2));
    }
    rows.push((p1.0.clone(), last));
    let (breakpoints, values): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let t = Template::new(dims, breakpoints, values, Tail::FiniteHorizon)?;
    let report = t.validate();
    if !report.ok() {
        return Err(Error::Invalid(format!(
            "standard pair failed validation: {:?}",
            report.violations
        )));
    }
    Ok(t)
}

/// Glues the standard templates of consecutive point pairs into one partial
/// template on `[t_first, t_last]`.
pub fn build_standard_chain(spec: &StandardSpec) -> Result<Template> {
    if spec.points.len() < 2 {
        return Err(Error::Malformed("need at least two points".into()));
    }
    let dims = spec.dims;
    let mut breakpoints: Vec<Rational> = Vec::new();
    let mut values: Vec<Vec<Rational>> = Vec::new();
    for w in spec.points.windows(2) {
        let rows = pair_rows(dims, &w[0], &w[1])?;
        for (t, v) in rows {
            breakpoints.push(t);
            values.push(v);
        }
    }
    // Terminal point of the final pair.
    let lastp = spec.points.last().unwrap();
    let d = dims.d();
    let mut last = vec![-lastp.1.clone(), -lastp.1.clone()];
    if d > 2 {
        let shared = rat(2, (d - 2) as i64) * &lastp.1;
        last.extend(std::iter::repeat(shared).take(d - 2));
    }
    breakpoints.push(lastp.0.clone());
    values.push(last);
    let t = Template::new(dims, breakpoints, values, Tail::FiniteHorizon)?;
    let report = t.validate();
    if !report.ok() {
        return Err(Error::Invalid(format!(
            "standard chain failed validation: {:?}",
            report.violations
        )));
    }
    Ok(t)
}

/// Checks the two-parameter feasibility conditions for `f[tau, lambda]`.
pub fn check_two_param_feasible(spec: &TwoParamSpec) -> Result<()> {
    let dims = spec.dims;
    let (m, n, d) = (dims.m as i64, dims.n as i64, dims.d() as i64);
    let tau = &spec.tau;
    let lambda = &spec.lambda;
    if tau.is_negative() {
        return Err(Error::Infeasible("tau must be nonnegative".into()));
    }
    if *lambda <= int(1) {
        return Err(Error::Infeasible("lambda must exceed 1".into()));
    }
    if *tau >= rat(1, n) {
        return Err(Error::Infeasible(format!(
            "endpoint-slope-bound: tau = {tau} must be below 1/n"
        )));
    }
    if n == 1 && *tau > rat(m - 1, 2 * m) {
        return Err(Error::Infeasible(format!(
            "pair-speed-bound: tau = {tau} above (m-1)/(2m) with n = 1"
        )));
    }
    let lm1 = lambda - int(1);
    let left = rat(n - 1, 1) * (rat(1, n) - tau) - int(d) * tau / &lm1;
    let right = rat(m - 1, 1) * (rat(1, m) + tau) - lambda * int(d) * tau / &lm1;
    if left.is_negative() && right.is_negative() {
        return Err(Error::Infeasible(
            "apex-merge-bound: neither geometric-sequence clearance holds".into(),
        ));
    }
    Ok(())
}

/// The exponentially equivariant standard template `f[tau, lambda]`:
/// explicit on `[0, lambda]` (a clean ramp from the origin on `[0, 1]`,
/// then one period), with the equivariant tail anchored at `t = 1`.
pub fn build_two_param(spec: &TwoParamSpec) -> Result<Template> {
    check_two_param_feasible(spec)?;
    let dims = spec.dims;
    let one = int(1);
    let chain = StandardSpec {
        dims,
        points: vec![
            (int(0), int(0)),
            (one.clone(), spec.tau.clone()),
            (spec.lambda.clone(), &spec.tau * &spec.lambda),
        ],
    };
    let base = build_standard_chain(&chain)?;
    let anchor = base
        .breakpoints()
        .iter()
        .position(|t| t == &one)
        .ok_or_else(|| Error::Invalid("anchor breakpoint missing".into()))?;
    let t = Template::new(
        dims,
        base.breakpoints().to_vec(),
        base.values().to_vec(),
        Tail::Equivariant {
            factor: spec.lambda.clone(),
            anchor,
        },
    )?;
    let report = t.validate();
    if !report.ok() {
        return Err(Error::Invalid(format!(
            "two-parameter template failed validation: {:?}",
            report.violations
        )));
    }
    Ok(t)
}
