//! Equivariant k-singular template families.
//!
//! These templates keep the components split into a bottom block of size
//! `j` and a top block of size `d - j` for most of each period, alternating
//! between the two level-`j` slope assignments (the one with the larger
//! rising count and the one with the larger falling count), with a short
//! excursion once per period that lets the convexity bookkeeping reset:
//! the block boundary component climbs to touch the opposite block and
//! returns. Everything is solved exactly so the period closes up to the
//! scaling factor, making the asymptotic rates computable in closed form.
//!
//! As the long/short ratio grows the time fraction spent in the two block
//! configurations tends to one and the lower rate tends to the k-singular
//! dimension value `fmn_k(dims, j)`.

use num_traits::{Signed, Zero};

use crate::dims::Dims;
use crate::rational::{int, rat, Rational};
use crate::template::{Tail, Template};
use crate::{Error, Result};

/// Exact Gaussian elimination for the small square systems below.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for c in col..n {
            a[col][c] = &a[col][c] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    a[r][c] = &a[r][c] - &f * &a[col][c];
                }
                b[r] = &b[r] - &f * &b[col];
            }
        }
    }
    Some(b)
}

/// One constant-slope phase of the period.
struct Phase {
    len: Rational,
    slopes: Vec<Rational>,
}

/// Slope vector with the bottom `j` components at `bottom`, the top at
/// `top`.
fn blocked(d: usize, j: usize, bottom: &Rational, top: &Rational) -> Vec<Rational> {
    let mut v = vec![bottom.clone(); j];
    v.extend(std::iter::repeat(top.clone()).take(d - j));
    v
}

/// Slope vector with `j-1` bottom components at `rem`, the `j`-th at
/// `mover`, the top at `top`.
fn split3(d: usize, j: usize, rem: &Rational, mover: &Rational, top: &Rational) -> Vec<Rational> {
    let mut v = vec![rem.clone(); j - 1];
    v.push(mover.clone());
    v.extend(std::iter::repeat(top.clone()).take(d - j));
    v
}

/// Assembles the equivariant template from a start state and phases on
/// `[1, lambda]`.
fn assemble(
    dims: Dims,
    start: Vec<Rational>,
    phases: Vec<Phase>,
    lambda: &Rational,
) -> Result<Template> {
    let mut breakpoints = vec![int(1)];
    let mut values = vec![start];
    for phase in phases {
        if phase.len.is_zero() {
            continue;
        }
        if phase.len.is_negative() {
            return Err(Error::Invalid("negative phase length".into()));
        }
        let t = breakpoints.last().unwrap() + &phase.len;
        let prev = values.last().unwrap().clone();
        let v: Vec<Rational> = prev
            .iter()
            .zip(&phase.slopes)
            .map(|(a, s)| a + s * &phase.len)
            .collect();
        breakpoints.push(t);
        values.push(v);
    }
    // Guard against drift: the period must end exactly at lambda.
    if breakpoints.last().unwrap() != lambda {
        return Err(Error::Invalid(format!(
            "period ends at {} instead of {lambda}",
            breakpoints.last().unwrap()
        )));
    }
    let t = Template::new(
        dims,
        breakpoints,
        values,
        Tail::Equivariant {
            factor: lambda.clone(),
            anchor: 0,
        },
    )?;
    let report = t.validate();
    if !report.ok() {
        return Err(Error::Invalid(format!(
            "k-singular template failed validation: {:?}",
            report.violations
        )));
    }
    Ok(t)
}

/// Level data shared by the schemes: the per-component block slopes of
/// the two level-`j` assignments (larger rising count and larger falling
/// count).
struct Level {
    s_plus: Rational,
    s_minus: Rational,
    top_plus: Rational,
    top_minus: Rational,
}

fn level_data(dims: Dims, j: usize) -> Level {
    let (m, n, d) = (dims.m as i64, dims.n as i64, dims.d() as i64);
    let jj = j as i64;
    let lp_up = rat(jj * m, d).ceil();
    let lm_up = rat(jj * n, d).floor();
    let lp_dn = rat(jj * m, d).floor();
    let lm_dn = rat(jj * n, d).ceil();
    let js_plus = lp_up.clone() / int(m) - lm_up.clone() / int(n);
    let js_minus = lp_dn.clone() / int(m) - lm_dn.clone() / int(n);
    Level {
        s_plus: &js_plus / int(jj),
        s_minus: &js_minus / int(jj),
        top_plus: -&js_plus / int(d - jj),
        top_minus: -&js_minus / int(d - jj),
    }
}

/// Builds the block-structured template at level `j` for the given dims,
/// excursion on the bottom side (the `j`-th component rises).
fn build_level(dims: Dims, j: usize, ratio: &Rational) -> Result<Template> {
    let d = dims.d();
    if j == 0 || j >= d {
        return Err(Error::Domain(format!("level j = {j} outside [1, d-1]")));
    }
    if !ratio.is_positive() {
        return Err(Error::Domain("long/short ratio must be positive".into()));
    }
    let (m, n) = (dims.m as i64, dims.n as i64);
    let jm_over_d_integral = (j as i64 * m) % (d as i64) == 0;
    let floor_jn = (j as i64 * n) / d as i64;
    let floor_jm = (j as i64 * m) / d as i64;

    // The period length shrinks with the requested ratio so the averaging
    // profile flattens; several multipliers are tried because the linear
    // system does not have positive solutions for every (lambda, ratio).
    let candidates = [rat(1, 1), rat(2, 1), rat(5, 1), rat(1, 2), rat(10, 1), rat(50, 1)];
    let mut last_err = Error::Invalid("no feasible period".into());
    for c in candidates {
        let lambda = int(1) + c / ratio;
        let attempt = if jm_over_d_integral {
            build_integer_case(dims, j, ratio, &lambda)
        } else if floor_jn == 0 {
            build_zero_touch(dims, j, &lambda)
        } else if floor_jm == 0 {
            build_parallel_carry(dims, j, ratio, &lambda)
        } else {
            build_tent(dims, j, ratio, &lambda)
        };
        match attempt {
            Ok(t) => return Ok(t),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Standard tent scheme: both floors positive, `j >= 2`.
fn build_tent(dims: Dims, j: usize, ratio: &Rational, lambda: &Rational) -> Result<Template> {
    let d = dims.d();
    let (m, n) = (dims.m as i64, dims.n as i64);
    let lv = level_data(dims, j);
    let jj = j as i64;
    // Crossing slope of the remaining bottom block.
    let z = rat((jj * m) / (d as i64), m) - rat((jj * n) / (d as i64), n);
    let sigma = &z / int(jj - 1);
    let up = rat(1, m);
    let down = -rat(1, n);

    // Unknowns (l1, l2, p, q, eps).
    let a = vec![
        vec![int(1), int(1), int(1), int(1), int(0)],
        vec![
            &lv.s_minus - &lv.top_minus,
            &lv.s_plus - &lv.top_plus,
            &up - &lv.top_plus,
            int(0),
            -rat(d as i64, d as i64 - jj),
        ],
        vec![int(0), int(0), &up - &sigma, -(-&down + &sigma), int(0)],
        vec![
            lv.s_minus.clone(),
            lv.s_plus.clone(),
            sigma.clone(),
            sigma.clone(),
            lambda - int(1),
        ],
        vec![int(1), int(1), -ratio.clone(), -ratio.clone(), int(0)],
    ];
    let b = vec![lambda - int(1), int(0), int(0), int(0), int(0)];
    let sol = solve_linear(a, b).ok_or_else(|| Error::Invalid("singular tent system".into()))?;
    let (l1, l2, p, q, eps) = (&sol[0], &sol[1], &sol[2], &sol[3], &sol[4]);
    if l1.is_negative() || l2.is_negative() || !p.is_positive() || !q.is_positive() || !eps.is_positive()
    {
        return Err(Error::Invalid("tent system has no positive solution".into()));
    }
    let start = {
        let mut v = vec![-eps.clone(); j];
        v.extend(std::iter::repeat(eps * rat(jj, d as i64 - jj)).take(d - j));
        v
    };
    let phases = vec![
        Phase {
            len: l1.clone(),
            slopes: blocked(d, j, &lv.s_minus, &lv.top_minus),
        },
        Phase {
            len: l2.clone(),
            slopes: blocked(d, j, &lv.s_plus, &lv.top_plus),
        },
        Phase {
            len: p.clone(),
            slopes: split3(d, j, &sigma, &up, &lv.top_plus),
        },
        Phase {
            len: q.clone(),
            slopes: split3(d, j, &sigma, &down, &lv.top_minus),
        },
    ];
    assemble(dims, start, phases, lambda)
}

/// `floor(jm/d) = 0` scheme: after the touch, the mover and the rest of the
/// bottom descend in parallel through the falling stretch and remerge at
/// the start of the rising one.
fn build_parallel_carry(
    dims: Dims,
    j: usize,
    ratio: &Rational,
    lambda: &Rational,
) -> Result<Template> {
    let d = dims.d();
    let (m, n) = (dims.m as i64, dims.n as i64);
    let lv = level_data(dims, j);
    let jj = j as i64;
    let up = rat(1, m);
    let down = -rat(1, n);
    // z = -(j-1)/n; remerge slope z2 = z + d/(mn) per remaining block.
    let z2 = -rat(jj - 1, n) + rat(d as i64, m * n);
    let sigma2 = &z2 / int(jj - 1);

    // Unknowns (l2, p, l1, q, eps); phases: blocked rise, tent rise,
    // parallel fall, remerge.
    let a = vec![
        vec![int(1), int(1), int(1), int(1), int(0)],
        vec![
            &lv.s_plus - &lv.top_plus,
            &up - &lv.top_plus,
            int(0),
            int(0),
            -rat(d as i64, d as i64 - jj),
        ],
        vec![int(0), &up - &down, int(0), -(-&down + &sigma2), int(0)],
        vec![
            lv.s_plus.clone(),
            down.clone(),
            down.clone(),
            sigma2.clone(),
            lambda - int(1),
        ],
        vec![int(1), -ratio.clone(), int(1), -ratio.clone(), int(0)],
    ];
    let b = vec![lambda - int(1), int(0), int(0), int(0), int(0)];
    let sol =
        solve_linear(a, b).ok_or_else(|| Error::Invalid("singular carry system".into()))?;
    let (l2, p, l1, q, eps) = (&sol[0], &sol[1], &sol[2], &sol[3], &sol[4]);
    if l2.is_negative() || l1.is_negative() || !p.is_positive() || !q.is_positive() || !eps.is_positive()
    {
        return Err(Error::Invalid("carry system has no positive solution".into()));
    }
    let start = {
        let mut v = vec![-eps.clone(); j];
        v.extend(std::iter::repeat(eps * rat(jj, d as i64 - jj)).take(d - j));
        v
    };
    let phases = vec![
        Phase {
            len: l2.clone(),
            slopes: blocked(d, j, &lv.s_plus, &lv.top_plus),
        },
        Phase {
            len: p.clone(),
            slopes: split3(d, j, &down, &up, &lv.top_plus),
        },
        Phase {
            len: l1.clone(),
            slopes: split3(d, j, &down, &down, &lv.top_minus),
        },
        Phase {
            len: q.clone(),
            slopes: split3(d, j, &sigma2, &down, &lv.top_plus),
        },
    ];
    assemble(dims, start, phases, lambda)
}

/// `floor(jn/d) = 0` scheme (includes `j = 1`): the rising block meets the
/// top at the period end, where the template vanishes.
fn build_zero_touch(dims: Dims, j: usize, lambda: &Rational) -> Result<Template> {
    let d = dims.d();
    let m = dims.m as i64;
    let jj = j as i64;
    if jj > m {
        return Err(Error::Invalid("zero-touch scheme needs j <= m".into()));
    }
    let lv = level_data(dims, j);
    let up = rat(1, m);
    let top_p = -rat(jj, m) / int(d as i64 - jj);
    // Unknowns (l1, l2): total length, and the gap opened during the fall
    // closes during the rise.
    let a = vec![
        vec![int(1), int(1)],
        vec![&lv.top_minus - &lv.s_minus, &top_p - &up],
    ];
    let b = vec![lambda - int(1), int(0)];
    let sol =
        solve_linear(a, b).ok_or_else(|| Error::Invalid("singular zero-touch system".into()))?;
    let (l1, l2) = (&sol[0], &sol[1]);
    if !l1.is_positive() || !l2.is_positive() {
        return Err(Error::Invalid("zero-touch system has no positive solution".into()));
    }
    let start = vec![int(0); d];
    let phases = vec![
        Phase {
            len: l1.clone(),
            slopes: blocked(d, j, &lv.s_minus, &lv.top_minus),
        },
        Phase {
            len: l2.clone(),
            slopes: blocked(d, j, &up, &top_p),
        },
    ];
    assemble(dims, start, phases, lambda)
}

/// Integer case `jm/d` in Z: static blocks plus an excursion with a sticky
/// merged stretch, generalizing the 2x2 three-parameter family.
fn build_integer_case(
    dims: Dims,
    j: usize,
    ratio: &Rational,
    lambda: &Rational,
) -> Result<Template> {
    let d = dims.d();
    let (m, n) = (dims.m as i64, dims.n as i64);
    let jj = j as i64;
    if j < 2 {
        return Err(Error::Invalid("integer scheme needs j >= 2".into()));
    }
    let up = rat(1, m);
    let down = -rat(1, n);
    let sigma1 = -rat(1, m * (jj - 1));
    let sigma2 = rat(1, n * (jj - 1));
    let mu = rat(1, m) / int(d as i64 - jj + 1);

    // Unknowns (l0, p, w, q, eps).
    let a = vec![
        vec![int(1), int(1), int(1), int(1), int(0)],
        vec![int(0), up.clone(), int(0), int(0), -rat(d as i64, d as i64 - jj)],
        vec![
            int(0),
            &up - &sigma1,
            &mu - &sigma1,
            -(-&down + &sigma2),
            int(0),
        ],
        vec![int(0), sigma1.clone(), sigma1.clone(), sigma2.clone(), lambda - int(1)],
        vec![int(1), -ratio.clone(), -ratio.clone(), -ratio.clone(), int(0)],
    ];
    let b = vec![lambda - int(1), int(0), int(0), int(0), int(0)];
    let sol =
        solve_linear(a, b).ok_or_else(|| Error::Invalid("singular integer-case system".into()))?;
    let (l0, p, w, q, eps) = (&sol[0], &sol[1], &sol[2], &sol[3], &sol[4]);
    if l0.is_negative() || w.is_negative() || !p.is_positive() || !q.is_positive() || !eps.is_positive()
    {
        return Err(Error::Invalid("integer-case system has no positive solution".into()));
    }
    let start = {
        let mut v = vec![-eps.clone(); j];
        v.extend(std::iter::repeat(eps * rat(jj, d as i64 - jj)).take(d - j));
        v
    };
    let zero = int(0);
    let mut merged_slopes = vec![sigma1.clone(); j - 1];
    merged_slopes.extend(std::iter::repeat(mu.clone()).take(d - j + 1));
    let phases = vec![
        Phase {
            len: l0.clone(),
            slopes: vec![zero.clone(); d],
        },
        Phase {
            len: p.clone(),
            slopes: split3(d, j, &sigma1, &up, &zero),
        },
        Phase {
            len: w.clone(),
            slopes: merged_slopes,
        },
        Phase {
            len: q.clone(),
            slopes: split3(d, j, &sigma2, &down, &zero),
        },
    ];
    assemble(dims, start, phases, lambda)
}

/// Builds a k-singular template: the `(k-1)`-st minimum sinks, the
/// `(k+1)`-st grows, and the block structure at level `j` dominates time.
/// `j` selects which of the two adjacent levels carries the blocks; the
/// mover is `f_k` itself whenever the scheme on that side is realizable.
pub fn build_ksingular(
    dims: Dims,
    k: usize,
    j: usize,
    long_over_short: &Rational,
) -> Result<Template> {
    let d = dims.d();
    if d < 3 {
        return Err(Error::Domain("k-singularity needs d >= 3".into()));
    }
    if k < 2 || k > d - 1 {
        return Err(Error::Domain(format!("k = {k} outside [2, d-1]")));
    }
    if j != k - 1 && j != k {
        return Err(Error::Domain(format!("j = {j} must be k-1 or k (k = {k})")));
    }
    let direct = || build_level(dims, j, long_over_short);
    let mirrored = || {
        build_level(dims.transpose(), d - j, long_over_short).map(|t| t.negate())
    };
    if j == k {
        direct().or_else(|_| mirrored())
    } else {
        mirrored().or_else(|_| direct())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze_all;
    use crate::formulas::fmn_k;
    use crate::rates::asymptotic_rates;
    use crate::rational::to_f64;

    fn check_rate(m: usize, n: usize, k: usize, j: usize, ratio: i64, tol: f64) {
        let dims = Dims::new(m, n).unwrap();
        let t = build_ksingular(dims, k, j, &int(ratio)).unwrap();
        assert!(t.validate().ok());
        assert!(t.balance_check());
        let rates = asymptotic_rates(&t).unwrap();
        let lower = to_f64(&rates.lower.unwrap());
        let expect = to_f64(&fmn_k(dims, j).unwrap());
        assert!(
            (lower - expect).abs() < tol,
            "({m},{n}) j = {j}: rate {lower} vs f = {expect}"
        );
    }

    #[test]
    fn rates_approach_fmn() {
        check_rate(2, 1, 2, 1, 4000, 1e-2);
        check_rate(1, 2, 2, 1, 4000, 1e-2);
        check_rate(2, 2, 2, 2, 4000, 1e-2);
        check_rate(3, 2, 2, 2, 4000, 1e-2);
        check_rate(3, 2, 3, 3, 4000, 1e-2);
        check_rate(5, 1, 2, 2, 4000, 1e-2);
    }

    #[test]
    fn integer_case_matches_two_by_two_blocks() {
        // (2,2), j = 2: the static stretch must have delta = f_{2,2}(2) = 3.
        let dims = Dims::new(2, 2).unwrap();
        let t = build_level(dims, 2, &int(100)).unwrap();
        let total: Rational = t
            .maximal_intervals()
            .iter()
            .filter_map(|s| s.end.clone().map(|e| e - &s.start))
            .sum();
        assert!(total.is_positive());
        let analyses = analyze_all(&t).unwrap();
        let static_delta: Vec<usize> = analyses
            .iter()
            .filter(|a| a.equality_blocks == vec![(0, 2), (2, 4)])
            .map(|a| a.delta)
            .collect();
        assert!(static_delta.contains(&3), "{static_delta:?}");
    }

    #[test]
    fn rejects_bad_levels() {
        let dims = Dims::new(2, 1).unwrap();
        assert!(build_ksingular(dims, 1, 1, &int(10)).is_err());
        assert!(build_ksingular(dims, 3, 2, &int(10)).is_err());
        assert!(build_ksingular(dims, 2, 3, &int(10)).is_err());
        assert!(build_ksingular(Dims::new(1, 1).unwrap(), 2, 1, &int(10)).is_err());
    }

    #[test]
    fn time_fraction_in_blocks_grows() {
        // The proportion of each period spent in the two-block structure
        // should approach 1 as the ratio grows.
        let dims = Dims::new(2, 3).unwrap();
        let mut prev_frac = 0.0;
        for ratio in [10i64, 100, 1000] {
            let t = build_level(dims, 3, &int(ratio)).unwrap();
            let lambda = match t.tail() {
                Tail::Equivariant { factor, .. } => factor.clone(),
                _ => unreachable!(),
            };
            let period = &lambda - int(1);
            let blocked_len: Rational = t
                .maximal_intervals()
                .iter()
                .filter(|s| {
                    // Blocked stretches have all bottom j and top d-j slopes
                    // equal within each group.
                    let j = 3;
                    s.slopes[..j].windows(2).all(|w| w[0] == w[1])
                        && s.slopes[j..].windows(2).all(|w| w[0] == w[1])
                        && s.start_values[..j].windows(2).all(|w| w[0] == w[1])
                })
                .filter_map(|s| s.end.clone().map(|e| e - &s.start))
                .sum();
            let frac = to_f64(&(blocked_len / period));
            assert!(frac > prev_frac * 0.99);
            prev_frac = frac;
        }
        assert!(prev_frac > 0.99, "blocked fraction {prev_frac}");
    }
}
