//! Asymptotic average contraction rates.
//!
//! `Delta(f, T) = (1/T) int_0^T delta(f, t) dt` satisfies
//! `Delta'(T) = (delta(T) - Delta(T)) / T`, so between breakpoints of
//! `delta` it is monotone (it chases the local constant). Its liminf and
//! limsup over `T -> oo` are therefore attained, exactly, at breakpoints:
//!
//! - constant-slope tails: both limits equal the tail's `delta`;
//! - exponentially equivariant tails: the limiting profile
//!   `D(T) = (S/(factor - 1) + int_{t_a}^T delta) / T` on one period is
//!   exponentially periodic, and its extrema over the breakpoints of one
//!   period are the two rates (the finite prefix washes out as `O(1/T)`);
//! - finite horizon: undefined.

use serde::{Deserialize, Serialize};

use crate::analysis::analyze_span;
use crate::rational::{int, Rational};
use crate::template::{Tail, Template};
use crate::{Error, Result};

/// How the rates were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateMethod {
    ConstantTail,
    EquivariantPeriod,
    FiniteHorizon,
}

/// Lower and upper average contraction rates (`None` when undefined).
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticRates {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    pub method: RateMethod,
}

/// Computes the asymptotic rates of a valid template.
pub fn asymptotic_rates(template: &Template) -> Result<AsymptoticRates> {
    match template.tail() {
        Tail::FiniteHorizon => Ok(AsymptoticRates {
            lower: None,
            upper: None,
            method: RateMethod::FiniteHorizon,
        }),
        Tail::ConstantSlope { .. } => {
            let spans = template.maximal_intervals();
            let tail = spans.last().expect("tail span exists");
            debug_assert!(tail.end.is_none());
            let delta = analyze_span(template.dims(), tail)?.delta;
            let rate = int(delta as i64);
            Ok(AsymptoticRates {
                lower: Some(rate.clone()),
                upper: Some(rate),
                method: RateMethod::ConstantTail,
            })
        }
        Tail::Equivariant { factor, anchor } => {
            let t_a = template.breakpoints()[*anchor].clone();
            let t_n = template.end_time().clone();
            // Piecewise-constant delta over one period (t_a, t_n].
            let mut pieces: Vec<(Rational, Rational, usize)> = Vec::new();
            for span in template.maximal_intervals() {
                let end = span.end.clone().expect("equivariant templates are bounded");
                let lo = if span.start > t_a { span.start.clone() } else { t_a.clone() };
                let hi = if end < t_n { end } else { t_n.clone() };
                if lo < hi {
                    let delta = analyze_span(template.dims(), &span)?.delta;
                    pieces.push((lo, hi, delta));
                }
            }
            if pieces.is_empty() {
                return Err(Error::Invalid("empty equivariant period".into()));
            }
            let span_sum: Rational = pieces
                .iter()
                .map(|(lo, hi, delta)| int(*delta as i64) * (hi - lo))
                .sum();
            // Limiting profile base: integral of delta over (0, t_a] for the
            // fully self-similar extension, summing the geometric series.
            let base = &span_sum / (factor - int(1));
            // Evaluate D at every piece boundary; extrema occur there.
            let mut lower: Option<Rational> = None;
            let mut upper: Option<Rational> = None;
            let mut acc = base;
            let consider = |value: Rational, lower: &mut Option<Rational>, upper: &mut Option<Rational>| {
                if lower.as_ref().map(|l| &value < l).unwrap_or(true) {
                    *lower = Some(value.clone());
                }
                if upper.as_ref().map(|u| &value > u).unwrap_or(true) {
                    *upper = Some(value);
                }
            };
            consider(&acc / &t_a, &mut lower, &mut upper);
            for (lo, hi, delta) in &pieces {
                acc += int(*delta as i64) * (hi - lo);
                consider(&acc / hi, &mut lower, &mut upper);
            }
            Ok(AsymptoticRates {
                lower,
                upper,
                method: RateMethod::EquivariantPeriod,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::Dims;
    use crate::rational::rat;

    #[test]
    fn zero_with_constant_tail() {
        let dims = Dims::new(2, 3).unwrap();
        let d = dims.d();
        let t = Template::new(
            dims,
            vec![int(0), int(1)],
            vec![vec![int(0); d], vec![int(0); d]],
            Tail::ConstantSlope {
                slope: vec![int(0); d],
            },
        )
        .unwrap();
        let r = asymptotic_rates(&t).unwrap();
        assert_eq!(r.lower, Some(int(6)));
        assert_eq!(r.upper, Some(int(6)));
        assert_eq!(r.method, RateMethod::ConstantTail);
    }

    #[test]
    fn finite_horizon_is_undefined() {
        let t = Template::zero(Dims::new(1, 1).unwrap(), int(5)).unwrap();
        let r = asymptotic_rates(&t).unwrap();
        assert_eq!(r.lower, None);
        assert_eq!(r.upper, None);
        assert_eq!(r.method, RateMethod::FiniteHorizon);
    }

    #[test]
    fn equivariant_mixed_profile() {
        // (1,1) period (1, 4): components equal and static on (1, 2)
        // (delta 1), a split V on (2, 3) descending at -1 (delta 0), and the
        // return at +1 on (3, 4) (delta 1, S+ = {1}), rejoining at
        // f(4) = 4 f(1) = 0.
        let dims = Dims::new(1, 1).unwrap();
        let t = Template::new(
            dims,
            vec![int(0), int(1), int(2), int(3), int(4)],
            vec![
                vec![int(0), int(0)],
                vec![int(0), int(0)],
                vec![int(0), int(0)],
                vec![int(-1), int(1)],
                vec![int(0), int(0)],
            ],
            Tail::Equivariant {
                factor: int(4),
                anchor: 1,
            },
        )
        .unwrap();
        assert!(t.validate().ok(), "{:?}", t.validate().violations);
        let r = asymptotic_rates(&t).unwrap();
        // Period integral S = 1*1 + 0*1 + 1*1 = 2, base = S/3 = 2/3.
        // D(1) = 2/3, D(2) = 5/6, D(3) = 5/9, D(4) = 2/3 (wrap-consistent).
        assert_eq!(r.lower, Some(rat(5, 9)));
        assert_eq!(r.upper, Some(rat(5, 6)));
        assert_eq!(r.method, RateMethod::EquivariantPeriod);
    }
}
