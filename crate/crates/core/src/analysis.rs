//! Per-interval contraction analysis.
//!
//! On an interval of linearity the components split into intervals of
//! equality; each block `(p, q]` contributes `M+` rising and `M-` falling
//! particles, the rising ones assigned the lower indices. The contraction
//! rate `delta` counts approaching pairs between the resulting sets `S+`
//! and `S-`, and its time averages are the quantities the dimension
//! formulas evaluate.


use crate::dims::Dims;
use crate::rational::{int, Rational};
use crate::slopes::decompose_slope;
use crate::template::{LinearityInterval, Tail, Template};
use crate::{Error, Result};

/// Full decomposition record for one interval of linearity.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalAnalysis {
    /// Open interval of linearity `(start, end)`; `end = None` on an
    /// unbounded constant-slope tail.
    pub start: Rational,
    pub end: Option<Rational>,
    /// Equality blocks `(p, q]` as pairs, partitioning `1..=d`.
    pub equality_blocks: Vec<(usize, usize)>,
    /// `L+(q)` and `L-(q)` at each block boundary `q` (including 0 and d),
    /// as `(q, L+, L-)`.
    pub level_counts: Vec<(usize, usize, usize)>,
    /// `(M+, M-)` per block, aligned with `equality_blocks`.
    pub block_counts: Vec<(usize, usize)>,
    /// Indices (1-based) assigned to rise and fall.
    pub s_plus: Vec<usize>,
    pub s_minus: Vec<usize>,
    /// Count of approaching pairs `(i+, i-)` with `i+ < i-`.
    pub delta: usize,
}

/// Streaming count of `#{(i+, i-) in S+ x S- : i+ < i-}`: walk indices in
/// order, accumulating how many rising indices precede each falling one.
pub fn count_approaching_pairs(s_plus: &[usize], s_minus: &[usize]) -> usize {
    let mut rising_seen = 0usize;
    let mut delta = 0usize;
    let d = s_plus.len() + s_minus.len();
    let plus: std::collections::BTreeSet<usize> = s_plus.iter().copied().collect();
    for i in 1..=d {
        if plus.contains(&i) {
            rising_seen += 1;
        } else {
            delta += rising_seen;
        }
    }
    delta
}

/// Analyzes one maximal interval of linearity of a valid template.
pub fn analyze_span(dims: Dims, span: &LinearityInterval) -> Result<IntervalAnalysis> {
    let d = dims.d();
    // Equality blocks: f_j = f_{j+1} identically on the open interval iff
    // values agree at the start and slopes agree.
    // f_j = f_{j+1} identically on the open interval iff they agree at the
    // start and have the same slope. (Agreeing only at one endpoint leaves
    // them distinct on the interior; crossing is an ordering violation.)
    let mut boundaries = vec![0usize];
    for j in 1..d {
        let equal_on_open = span.start_values[j] == span.start_values[j - 1]
            && span.slopes[j] == span.slopes[j - 1];
        if !equal_on_open {
            boundaries.push(j);
        }
    }
    boundaries.push(d);
    boundaries.dedup();

    let mut level_counts = Vec::new();
    for &q in &boundaries {
        if q == 0 {
            level_counts.push((0, 0usize, 0usize));
            continue;
        }
        let fq_slope: Rational = span.slopes[..q].iter().sum();
        let (lp, lm) = decompose_slope(dims, q, &fq_slope).ok_or_else(|| {
            Error::Invalid(format!(
                "F_{q} slope {fq_slope} on ({}, {:?}) is not quantized",
                span.start, span.end
            ))
        })?;
        level_counts.push((q, lp, lm));
    }

    let mut equality_blocks = Vec::new();
    let mut block_counts = Vec::new();
    let mut s_plus = Vec::new();
    let mut s_minus = Vec::new();
    for w in level_counts.windows(2) {
        let (p, lp_p, lm_p) = w[0];
        let (q, lp_q, lm_q) = w[1];
        if lp_q < lp_p || lm_q < lm_p {
            return Err(Error::Invalid(format!(
                "negative block count between levels {p} and {q}"
            )));
        }
        let m_plus = lp_q - lp_p;
        let m_minus = lm_q - lm_p;
        equality_blocks.push((p, q));
        block_counts.push((m_plus, m_minus));
        for i in (p + 1)..=(p + m_plus) {
            s_plus.push(i);
        }
        for i in (p + m_plus + 1)..=q {
            s_minus.push(i);
        }
    }
    debug_assert_eq!(s_plus.len(), dims.m);
    debug_assert_eq!(s_minus.len(), dims.n);
    let delta = count_approaching_pairs(&s_plus, &s_minus);
    Ok(IntervalAnalysis {
        start: span.start.clone(),
        end: span.end.clone(),
        equality_blocks,
        level_counts,
        block_counts,
        s_plus,
        s_minus,
        delta,
    })
}

/// Analyzes the `idx`-th maximal interval of linearity.
pub fn analyze_interval(template: &Template, idx: usize) -> Result<IntervalAnalysis> {
    let spans = template.maximal_intervals();
    let span = spans
        .get(idx)
        .ok_or_else(|| Error::Domain(format!("interval index {idx} out of range")))?;
    analyze_span(template.dims(), span)
}

/// Analyses of every maximal interval over the explicit domain (plus the
/// constant-slope tail when present).
pub fn analyze_all(template: &Template) -> Result<Vec<IntervalAnalysis>> {
    template
        .maximal_intervals()
        .iter()
        .map(|s| analyze_span(template.dims(), s))
        .collect()
}

/// `delta` at a point in time, with the right-limit convention at
/// breakpoints: the value is that of the interval of linearity immediately
/// to the right.
pub fn delta_at(template: &Template, time: &Rational) -> Result<usize> {
    if time < template.start_time() {
        return Err(Error::Domain(format!(
            "time {time} precedes domain start {}",
            template.start_time()
        )));
    }
    let t_end = template.end_time().clone();
    if time >= &t_end {
        match template.tail() {
            Tail::FiniteHorizon => {
                return Err(Error::Domain(format!(
                    "time {time} at or beyond finite horizon {t_end} has no right limit"
                )));
            }
            Tail::ConstantSlope { .. } => {
                let spans = template.maximal_intervals();
                let span = spans.last().unwrap();
                return Ok(analyze_span(template.dims(), span)?.delta);
            }
            Tail::Equivariant { factor, .. } => {
                // delta is scale-invariant: map into the explicit period.
                let mut s = time.clone();
                while s >= t_end {
                    s /= factor.clone();
                }
                // The anchor time may land below it only by rounding of the
                // loop above; the explicit domain always contains s now.
                return delta_at(template, &s);
            }
        }
    }
    let spans = template.maximal_intervals();
    for span in &spans {
        let inside = time >= &span.start
            && match &span.end {
                Some(e) => time < e,
                None => true,
            };
        if inside {
            return Ok(analyze_span(template.dims(), span)?.delta);
        }
    }
    Err(Error::Domain(format!("time {time} not covered")))
}

/// Exact integral of the piecewise-constant `delta(f, .)` over `[from, to]`.
pub fn delta_integral(template: &Template, from: &Rational, to: &Rational) -> Result<Rational> {
    if from > to {
        return Err(Error::Domain("reversed integration interval".into()));
    }
    if from == to {
        return Ok(int(0));
    }
    if from < template.start_time() {
        return Err(Error::Domain(format!(
            "integration start {from} precedes domain start {}",
            template.start_time()
        )));
    }
    let t_end = template.end_time().clone();
    if to > &t_end {
        match template.tail() {
            Tail::FiniteHorizon => {
                return Err(Error::Domain(format!(
                    "integration end {to} beyond finite horizon {t_end}"
                )));
            }
            Tail::ConstantSlope { .. } => {
                // Constant delta past t_N; split there.
                let spans = template.maximal_intervals();
                let tail_delta = analyze_span(template.dims(), spans.last().unwrap())?.delta;
                let cut = if from > &t_end { from.clone() } else { t_end.clone() };
                let head = if from < &t_end {
                    delta_integral(template, from, &t_end)?
                } else {
                    int(0)
                };
                return Ok(head + int(tail_delta as i64) * (to - &cut));
            }
            Tail::Equivariant { factor, .. } => {
                // delta(factor * t) = delta(t): integral over a scaled window
                // is factor times the integral over the window.
                if from >= &t_end {
                    let a = from / factor;
                    let b = to / factor;
                    return Ok(delta_integral(template, &a, &b)? * factor);
                }
                let head = delta_integral(template, from, &t_end)?;
                let tail = delta_integral(template, &t_end, to)?;
                return Ok(head + tail);
            }
        }
    }
    // Entirely within the explicit domain: clip each interval.
    let mut total = int(0);
    for span in template.maximal_intervals() {
        let lo = if &span.start > from { span.start.clone() } else { from.clone() };
        let hi = match &span.end {
            Some(e) => {
                if e < to {
                    e.clone()
                } else {
                    to.clone()
                }
            }
            None => to.clone(),
        };
        if lo < hi {
            let delta = analyze_span(template.dims(), &span)?.delta;
            total += int(delta as i64) * (hi - lo);
        }
    }
    Ok(total)
}

/// Average contraction rate over `[from, to]`, exact.
pub fn contraction_average(
    template: &Template,
    from: &Rational,
    to: &Rational,
) -> Result<Rational> {
    if from >= to {
        return Err(Error::Domain("empty or reversed averaging interval".into()));
    }
    Ok(delta_integral(template, from, to)? / (to - from))
}

/// Quadratic-time pair-counting straight from the definition. This is the
/// reference route for `delta`; the streaming implementation must agree.
pub fn pair_count_reference(s_plus: &[usize], s_minus: &[usize]) -> usize {
    let mut count = 0;
    for &a in s_plus {
        for &b in s_minus {
            if a < b {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::template::Tail;

    fn dims(m: usize, n: usize) -> Dims {
        Dims::new(m, n).unwrap()
    }

    fn figure_basic_12() -> Template {
        Template::new(
            dims(1, 2),
            vec![int(0), int(2), int(3)],
            vec![
                vec![int(0), int(0), int(0)],
                vec![int(-1), rat(1, 2), rat(1, 2)],
                vec![int(0), int(0), int(0)],
            ],
            Tail::FiniteHorizon,
        )
        .unwrap()
    }

    #[test]
    fn zero_template_full_contraction() {
        // All components equal: L+ = m, L- = n at the top, delta = mn.
        let t = Template::zero(dims(2, 2), int(10)).unwrap();
        let a = analyze_interval(&t, 0).unwrap();
        assert_eq!(a.s_plus, vec![1, 2]);
        assert_eq!(a.s_minus, vec![3, 4]);
        assert_eq!(a.delta, 4);
        assert_eq!(delta_at(&t, &int(3)).unwrap(), 4);
    }

    #[test]
    fn figure_basic_intervals() {
        let t = figure_basic_12();
        let a0 = analyze_interval(&t, 0).unwrap();
        assert_eq!(a0.s_plus, vec![2]);
        assert_eq!(a0.delta, 1); // mn - m = 1 for (1,2)
        let a1 = analyze_interval(&t, 1).unwrap();
        assert_eq!(a1.s_plus, vec![1]);
        assert_eq!(a1.delta, 2); // mn
        // Right-limit convention at the interior breakpoint.
        assert_eq!(delta_at(&t, &int(2)).unwrap(), 2);
        assert_eq!(delta_at(&t, &int(1)).unwrap(), 1);
    }

    #[test]
    fn figure_basic_average_is_delta_mn() {
        let t = figure_basic_12();
        // (1/3) * (1*2 + 2*1) = 4/3 = delta_{1,2}.
        assert_eq!(
            contraction_average(&t, &int(0), &int(3)).unwrap(),
            rat(4, 3)
        );
    }

    #[test]
    fn averages_are_additive() {
        let t = figure_basic_12();
        let a = int(0);
        let b = rat(5, 4);
        let c = int(3);
        let whole = contraction_average(&t, &a, &c).unwrap() * (&c - &a);
        let left = contraction_average(&t, &a, &b).unwrap() * (&b - &a);
        let right = contraction_average(&t, &b, &c).unwrap() * (&c - &b);
        assert_eq!(whole, left + right);
    }

    #[test]
    fn domain_errors() {
        let t = figure_basic_12();
        assert!(delta_at(&t, &int(3)).is_err());
        assert!(delta_at(&t, &int(4)).is_err());
        assert!(contraction_average(&t, &int(1), &int(1)).is_err());
        assert!(contraction_average(&t, &int(2), &int(1)).is_err());
        assert!(contraction_average(&t, &int(0), &int(4)).is_err());
    }

    #[test]
    fn equivariant_scaling_of_integrals() {
        // Zero values with equivariant tail: delta = mn everywhere.
        let t = Template::new(
            dims(1, 1),
            vec![int(0), int(1), int(2)],
            vec![vec![int(0); 2], vec![int(0); 2], vec![int(0); 2]],
            Tail::Equivariant {
                factor: int(2),
                anchor: 1,
            },
        )
        .unwrap();
        assert_eq!(delta_at(&t, &int(100)).unwrap(), 1);
        assert_eq!(
            contraction_average(&t, &int(0), &int(64)).unwrap(),
            int(1)
        );
    }
}
