//! Further concrete template families used by the lower-bound arguments.

use num_traits::{Signed, Zero};

use crate::dims::Dims;
use crate::rational::{int, rat, Rational};
use crate::standard::{build_standard_chain, build_standard_pair, StandardSpec, TwoParamSpec};
use crate::template::{Tail, Template};
use crate::{Error, Result};

/// The 2x2 three-parameter equivariant family: one period consists of the
/// standard pair from `(1, -tau)` to `(gamma, -lambda tau)` followed by a
/// constant stretch up to `lambda`. Requires `0 < tau < 1/2`, `lambda > 1`
/// and `gamma` in `[1 + 6 tau + 2 lambda tau, lambda]`; with the default
/// `gamma = 1 - 2 tau + 10 lambda tau` the period has exactly three
/// intervals of linearity before the constant stretch.
pub fn build_2x2_three_param(
    tau: &Rational,
    lambda: &Rational,
    gamma: Option<&Rational>,
) -> Result<Template> {
    let dims = Dims::new(2, 2)?;
    if !tau.is_positive() || *tau >= rat(1, 2) {
        return Err(Error::Domain(format!("tau = {tau} outside (0, 1/2)")));
    }
    if *lambda <= int(1) {
        return Err(Error::Domain("lambda must exceed 1".into()));
    }
    let default_gamma = int(1) - int(2) * tau + int(10) * lambda * tau;
    let gamma = gamma.cloned().unwrap_or(default_gamma);
    let lower = int(1) + int(6) * tau + int(2) * lambda * tau;
    if gamma < lower {
        return Err(Error::Infeasible(format!(
            "merge-window: gamma = {gamma} below {lower}"
        )));
    }
    if gamma > *lambda {
        return Err(Error::Infeasible(format!(
            "period-bound: gamma = {gamma} exceeds lambda = {lambda}"
        )));
    }

    // Ramp from the origin, the sloped part of the period, then the
    // constant stretch.
    let ramp = build_standard_pair(dims, (int(0), int(0)), (int(1), tau.clone()))?;
    let pair = build_standard_pair(dims, (int(1), tau.clone()), (gamma.clone(), lambda * tau))?;

    let mut breakpoints: Vec<Rational> = Vec::new();
    let mut values: Vec<Vec<Rational>> = Vec::new();
    for (t, v) in ramp
        .breakpoints()
        .iter()
        .zip(ramp.values())
        .chain(pair.breakpoints().iter().zip(pair.values()))
    {
        if breakpoints.last() == Some(t) {
            continue;
        }
        breakpoints.push(t.clone());
        values.push(v.clone());
    }
    if gamma < *lambda {
        breakpoints.push(lambda.clone());
        values.push(values.last().unwrap().clone());
    }
    let anchor = breakpoints
        .iter()
        .position(|t| t == &int(1))
        .expect("anchor at t = 1");
    let t = Template::new(
        dims,
        breakpoints,
        values,
        Tail::Equivariant {
            factor: lambda.clone(),
            anchor,
        },
    )?;
    let report = t.validate();
    if !report.ok() {
        return Err(Error::Invalid(format!(
            "2x2 family failed validation: {:?}",
            report.violations
        )));
    }
    Ok(t)
}

/// The `n = 1` packing construction for `tau < 1/m^2`: the negated `1 x m`
/// two-parameter template with `tau' = (m-1) tau / (1 - m tau)`. Returns
/// the `m x 1` template together with the `1 x m` template it negates.
pub fn build_n1_case2(m: usize, tau: &Rational) -> Result<(Template, Template)> {
    if m < 2 {
        return Err(Error::Domain("construction needs m >= 2".into()));
    }
    let cap = rat(1, (m * m) as i64);
    if tau.is_negative() || *tau >= cap {
        return Err(Error::Unsupported(format!(
            "tau = {tau} must lie strictly below 1/m^2 = {cap} (the boundary case is out of scope)"
        )));
    }
    let m_i = m as i64;
    let tau_p = rat(m_i - 1, 1) * tau / (int(1) - int(m_i) * tau);
    // Feasibility of the (1, m) family with parameter tau' needs
    // (n'-1)(1/n' - tau') >= d tau'/(lambda - 1); pick lambda with slack 2.
    let dims_1m = Dims::new(1, m)?;
    let d = int((m + 1) as i64);
    let clearance = rat(m_i - 1, 1) * (rat(1, m_i) - &tau_p);
    let lambda = if tau_p.is_zero() {
        int(4)
    } else {
        int(1) + int(2) * d * &tau_p / clearance
    };
    let spec = TwoParamSpec {
        dims: dims_1m,
        tau: tau_p,
        lambda,
    };
    let base = crate::standard::build_two_param(&spec)?;
    let negated = base.negate();
    let report = negated.validate();
    if !report.ok() {
        return Err(Error::Invalid(format!(
            "negated template failed validation: {:?}",
            report.violations
        )));
    }
    Ok((negated, base))
}

/// Singular-on-average family: on one period `[1, 1 + eps]`, a zero-pinned
/// standard bump occupies the first `p`-fraction and the template vanishes
/// on the rest; extended equivariantly.
pub fn build_sing_on_average(dims: Dims, p: &Rational, eps: &Rational) -> Result<Template> {
    if p.is_negative() || *p > int(1) {
        return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
    }
    if !eps.is_positive() {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let d = dims.d();
    let one = int(1);
    let lambda = &one + eps;
    let mut breakpoints = vec![int(0), one.clone()];
    let mut values = vec![vec![int(0); d], vec![int(0); d]];
    if p.is_positive() {
        let bump_end = &one + p * eps;
        let bump = build_standard_pair(dims, (one.clone(), int(0)), (bump_end.clone(), int(0)))?;
        for (t, v) in bump.breakpoints().iter().zip(bump.values()).skip(1) {
            breakpoints.push(t.clone());
            values.push(v.clone());
        }
        if bump_end < lambda {
            breakpoints.push(lambda.clone());
            values.push(vec![int(0); d]);
        }
    } else {
        breakpoints.push(lambda.clone());
        values.push(vec![int(0); d]);
    }
    let t = Template::new(
        dims,
        breakpoints,
        values,
        Tail::Equivariant {
            factor: lambda,
            anchor: 1,
        },
    )?;
    let report = t.validate();
    if !report.ok() {
        return Err(Error::Invalid(format!(
            "singular-on-average template failed validation: {:?}",
            report.violations
        )));
    }
    Ok(t)
}

/// Point-sequence construction tracking a slowly growing bound `phi`:
/// `t_{k+1} = t_k + min(phi(t_k)/2, t_k)` and
/// `eps_k = min(phi(t_k)/2, isqrt(dt_{k-1}))`, verified post-hoc to satisfy
/// the slow-growth side conditions, with `f_1 >= -phi` on the whole domain.
///
/// `phi_table` is a sampled increasing function; generation stops when the
/// next point would leave the table.
pub fn build_starkov(dims: Dims, phi_table: &[(Rational, Rational)]) -> Result<Template> {
    if phi_table.len() < 2 {
        return Err(Error::Malformed("phi table needs at least two samples".into()));
    }
    for w in phi_table.windows(2) {
        if w[0].0 >= w[1].0 || w[0].1 > w[1].1 {
            return Err(Error::Malformed("phi table must increase".into()));
        }
    }
    let phi_at = |t: &Rational| -> Option<Rational> {
        if t < &phi_table[0].0 || t > &phi_table.last().unwrap().0 {
            return None;
        }
        for w in phi_table.windows(2) {
            if t >= &w[0].0 && t <= &w[1].0 {
                let frac = (t - &w[0].0) / (&w[1].0 - &w[0].0);
                return Some(&w[0].1 + (&w[1].1 - &w[0].1) * frac);
            }
        }
        None
    };
    // Integer square root by binary search, used as a slowly growing and
    // exactly rational stand-in for sqrt.
    let isqrt = |x: &Rational| -> Rational {
        let f = x.floor();
        let mut lo = int(0);
        let mut hi = f.clone() + int(1);
        while &lo + int(1) < hi {
            let mid = (&lo + &hi) / int(2);
            let mid = mid.floor();
            if &mid * &mid <= f {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };

    // Per-step cap keeping every consecutive pair feasible: the merge
    // clearance needs eps bounded by a fixed fraction of the step length.
    let (m_i, n_i) = (dims.m as i64, dims.n as i64);
    let d_i = dims.d() as i64;
    let merge_cap = |dt: &Rational| -> Rational {
        if n_i >= 2 {
            rat(n_i - 1, 2 * n_i * d_i) * dt
        } else if m_i >= 2 {
            rat(m_i - 1, 2 * m_i * d_i) * dt
        } else {
            int(0)
        }
    };

    let mut points: Vec<(Rational, Rational)> = Vec::new();
    let mut t = phi_table[0].0.clone();
    points.push((t.clone(), int(0)));
    let mut prev_dt: Option<Rational> = None;
    loop {
        let phi = match phi_at(&t) {
            Some(p) => p,
            None => break,
        };
        let half = &phi / int(2);
        let dt = if half < t { half.clone() } else { t.clone() };
        if !dt.is_positive() {
            return Err(Error::Domain("phi too small to advance".into()));
        }
        let next = &t + &dt;
        if phi_at(&next).is_none() {
            break;
        }
        let slow = match &prev_dt {
            Some(pd) => isqrt(pd),
            None => int(0),
        };
        let mut eps = if slow < half { slow } else { half };
        let cap = merge_cap(&dt);
        if eps > cap {
            eps = cap;
        }
        points.push((next.clone(), eps));
        prev_dt = Some(dt);
        t = next;
    }
    if points.len() < 3 {
        return Err(Error::Domain("phi table too short for the construction".into()));
    }
    // Post-hoc verification of the side conditions on the generated finite
    // sequence: eps growth, shrinking eps/dt ratios, pair feasibility.
    for w in points.windows(2) {
        let dt = &w[1].0 - &w[0].0;
        let phi0 = phi_at(&w[0].0).unwrap();
        if dt > &phi0 / int(2) {
            return Err(Error::Invalid("step exceeded phi/2".into()));
        }
        if &w[0].1 > &(&phi0 / int(2)) {
            return Err(Error::Invalid("eps exceeded phi/2".into()));
        }
    }
    let k = points.len();
    let ratio = |i: usize| -> Rational {
        let dt = &points[i + 1].0 - &points[i].0;
        &points[i].1 / dt
    };
    if k >= 6 && ratio(k - 2) > ratio(2) + int(1) {
        return Err(Error::Invalid("eps/dt ratios fail to shrink".into()));
    }
    let spec = StandardSpec {
        dims,
        points,
    };
    build_standard_chain(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::delta_at;
    use crate::rates::asymptotic_rates;
    use crate::rational::to_f64;

    #[test]
    fn two_by_two_profile_and_rate() {
        let tau = rat(1, 40);
        let lambda = int(3);
        let t = build_2x2_three_param(&tau, &lambda, None).unwrap();
        // delta = 2 on (1, r) and 3 on (r, lambda), r = 1 - 2 tau + 6 lambda tau.
        let r = int(1) - int(2) * &tau + int(6) * &lambda * &tau;
        let before = &r - rat(1, 100);
        let after = &r + rat(1, 100);
        assert_eq!(delta_at(&t, &before).unwrap(), 2);
        assert_eq!(delta_at(&t, &after).unwrap(), 3);
        // Closed form for the lower rate.
        let rates = asymptotic_rates(&t).unwrap();
        let expect = int(3)
            - (int(6) * &lambda * &tau - int(2) * &tau)
                / ((int(1) - int(1) / &lambda) * (int(1) - int(2) * &tau + int(6) * &lambda * &tau));
        assert_eq!(rates.lower.unwrap(), expect);
    }

    #[test]
    fn two_by_two_rejects_bad_params() {
        assert!(build_2x2_three_param(&rat(1, 2), &int(3), None).is_err());
        assert!(build_2x2_three_param(&rat(1, 40), &int(1), None).is_err());
        // gamma beyond lambda: default gamma with tiny lambda.
        assert!(matches!(
            build_2x2_three_param(&rat(1, 4), &rat(11, 10), None),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn n1_case2_exponent() {
        // m = 2, tau = 1/5: tau' = (1/5)/(1 - 2/5) = 1/3 < 1/2.
        let tau = rat(1, 5);
        let (neg, base) = build_n1_case2(2, &tau).unwrap();
        assert_eq!(neg.dims(), Dims::new(2, 1).unwrap());
        let tau_p = rat(1, 3);
        // t0 = 1 + (m/(m-1)) tau', f_d(t0) = tau'/(m-1), and the quotient
        // recovers tau.
        let t0 = int(1) + rat(2, 1) * &tau_p;
        let fd = base.value_at(&t0).unwrap().pop().unwrap();
        assert_eq!(fd, &tau_p / int(1));
        assert_eq!(&fd / &t0, tau);
        assert!(build_n1_case2(2, &rat(1, 4)).is_err());
    }

    #[test]
    fn sing_on_average_edge_cases() {
        let dims = Dims::new(2, 1).unwrap();
        // p = 0: the zero template, rate mn.
        let t0 = build_sing_on_average(dims, &int(0), &rat(1, 10)).unwrap();
        let r0 = asymptotic_rates(&t0).unwrap();
        assert_eq!(r0.lower.unwrap(), int(2));
        assert_eq!(r0.upper.unwrap(), int(2));
        // p = 1: pure periodic bump; rate approaches delta_mn as eps -> 0.
        let expect = to_f64(&crate::formulas::delta_mn(dims));
        let mut prev_gap = f64::INFINITY;
        for eps in [rat(1, 10), rat(1, 100)] {
            let t1 = build_sing_on_average(dims, &int(1), &eps).unwrap();
            let r1 = asymptotic_rates(&t1).unwrap();
            let gap = (to_f64(&r1.lower.unwrap()) - expect).abs();
            assert!(gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 0.02);
    }

    #[test]
    fn starkov_growth_conditions() {
        let dims = Dims::new(2, 1).unwrap();
        // phi(t) = sqrt-ish growth sampled on a long range: use phi(t) with
        // values growing like 2 sqrt t so steps stay below phi/2.
        let mut table = Vec::new();
        for k in 0..60i64 {
            let t = int(1) + int(k * k);
            let phi = int(2 * k + 2);
            table.push((t, phi));
        }
        let t = build_starkov(dims, &table).unwrap();
        assert!(t.validate().ok());
        assert!(t.balance_check());
        // f_1 >= -phi at many sample points.
        for k in 1..50i64 {
            let time = int(1) + int(k * k) / int(2);
            if !t.contains_time(&time) {
                break;
            }
            let f1 = t.value_at(&time).unwrap()[0].clone();
            // Interpolate the table bound loosely: phi(t) >= 2 sqrt(t) - 2.
            let bound = -int(2 * k + 2);
            assert!(f1 >= bound, "f1 = {f1} below -phi at t = {time}");
        }
    }
}
