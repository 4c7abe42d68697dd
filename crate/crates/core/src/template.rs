//! Exact piecewise-linear templates.
//!
//! A template is stored by breakpoints and values, not slopes: the ordering
//! condition is then a pointwise check and slopes are derived, so intervals
//! of equality are detected exactly. Three tail behaviours are supported:
//! a constant slope vector on `[t_N, oo)`, exponential equivariance
//! `f(lambda t) = lambda f(t)` past an anchor breakpoint, or no tail at all
//! (finite horizon).
//!
//! The first breakpoint is usually `0`, but partial templates (as produced
//! by the two-point standard construction) may start at any `t_0 >= 0`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dims::Dims;
use crate::rational::{int, rat, Rational};
use crate::slopes::{decompose_slope, SlopeSet};
use crate::{Error, Result};

/// Behaviour of a template past its last explicit breakpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum Tail {
    /// `f(t) = f(t_N) + slope * (t - t_N)` for `t >= t_N`.
    ConstantSlope { slope: Vec<Rational> },
    /// `f(factor * t) = factor * f(t)` for `t >= t_a`, where `t_a` is the
    /// breakpoint at `anchor` and `t_N = factor * t_a` exactly.
    Equivariant { factor: Rational, anchor: usize },
    /// Domain is `[t_0, t_N]` only.
    FiniteHorizon,
}

/// An exact `m x n` template (or partial template).
#[derive(Clone, Debug, PartialEq)]
pub struct Template {
    dims: Dims,
    breakpoints: Vec<Rational>,
    values: Vec<Vec<Rational>>,
    tail: Tail,
    /// Derived slope vector of each segment `(t_i, t_{i+1})`.
    slopes: Vec<Vec<Rational>>,
}

/// One of the four template conditions (plus structural tail consistency).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Ordering,
    SlopeRange,
    SlopeQuantization,
    Convexity,
    TailConsistency,
}

/// A single violation with enough location detail to fix the input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    /// Human-readable position: segment index, breakpoint index, or level.
    pub location: String,
    pub detail: String,
}

/// Result of `validate`: all violations, not just the first.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, condition: Condition, location: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            condition,
            location: location.into(),
            detail: detail.into(),
        });
    }
}

/// A maximal interval of linearity. Consecutive segments with identical
/// slope vectors are merged; for a valid template that also preserves the
/// equality-block structure.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearityInterval {
    pub start: Rational,
    /// `None` means the interval extends to `+oo` (constant-slope tail).
    pub end: Option<Rational>,
    pub slopes: Vec<Rational>,
    /// `f(start)`.
    pub start_values: Vec<Rational>,
}

impl LinearityInterval {
    /// Value of `f` at `t` inside the interval (no range check).
    pub fn value_at(&self, t: &Rational) -> Vec<Rational> {
        let dt = t - &self.start;
        self.start_values
            .iter()
            .zip(&self.slopes)
            .map(|(v, s)| v + s * &dt)
            .collect()
    }

    /// Value at the right endpoint; only for bounded intervals.
    pub fn end_values(&self) -> Option<Vec<Rational>> {
        self.end.as_ref().map(|e| self.value_at(e))
    }
}

impl Template {
    /// Builds a template after structural checks (shape, monotonicity, tail
    /// bookkeeping). Template conditions (I)-(III) are *not* checked here;
    /// call [`Template::validate`].
    pub fn new(
        dims: Dims,
        breakpoints: Vec<Rational>,
        values: Vec<Vec<Rational>>,
        tail: Tail,
    ) -> Result<Self> {
        let d = dims.d();
        if breakpoints.is_empty() {
            return Err(Error::Malformed("need at least one breakpoint".into()));
        }
        if breakpoints[0].is_negative() {
            return Err(Error::Malformed("breakpoints must start at t >= 0".into()));
        }
        if values.len() != breakpoints.len() {
            return Err(Error::Malformed(format!(
                "{} breakpoints but {} value rows",
                breakpoints.len(),
                values.len()
            )));
        }
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::Malformed(format!(
                    "breakpoints not strictly increasing at index {i}"
                )));
            }
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Malformed(format!(
                    "value row {i} has length {} but d = {d}",
                    row.len()
                )));
            }
        }
        match &tail {
            Tail::ConstantSlope { slope } => {
                if slope.len() != d {
                    return Err(Error::Malformed(format!(
                        "tail slope has length {} but d = {d}",
                        slope.len()
                    )));
                }
            }
            Tail::Equivariant { factor, anchor } => {
                if *factor <= int(1) {
                    return Err(Error::Malformed("equivariant factor must exceed 1".into()));
                }
                let last = breakpoints.len() - 1;
                if *anchor >= last {
                    return Err(Error::Malformed(format!(
                        "equivariant anchor {anchor} must precede the last breakpoint {last}"
                    )));
                }
                let t_a = &breakpoints[*anchor];
                if t_a.is_zero() {
                    return Err(Error::Malformed("equivariant anchor must be positive".into()));
                }
                if &breakpoints[last] != &(factor * t_a) {
                    return Err(Error::Malformed(
                        "equivariant tail requires t_N = factor * t_anchor exactly".into(),
                    ));
                }
            }
            Tail::FiniteHorizon => {}
        }
        let slopes = derive_slopes(&breakpoints, &values);
        Ok(Template {
            dims,
            breakpoints,
            values,
            tail,
            slopes,
        })
    }

    /// The identically-zero template on `[0, horizon]`.
    pub fn zero(dims: Dims, horizon: Rational) -> Result<Self> {
        let d = dims.d();
        Template::new(
            dims,
            vec![int(0), horizon],
            vec![vec![int(0); d], vec![int(0); d]],
            Tail::FiniteHorizon,
        )
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn start_time(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end_time(&self) -> &Rational {
        self.breakpoints.last().unwrap()
    }

    pub fn segment_count(&self) -> usize {
        self.slopes.len()
    }

    pub fn segment_slopes(&self, i: usize) -> &[Rational] {
        &self.slopes[i]
    }

    /// True when `t` is inside the (possibly unbounded) domain.
    pub fn contains_time(&self, t: &Rational) -> bool {
        if t < self.start_time() {
            return false;
        }
        match self.tail {
            Tail::FiniteHorizon => t <= self.end_time(),
            _ => true,
        }
    }

    /// Exact evaluation anywhere in the domain.
    pub fn value_at(&self, t: &Rational) -> Result<Vec<Rational>> {
        if t < self.start_time() {
            return Err(Error::Domain(format!(
                "time {t} precedes domain start {}",
                self.start_time()
            )));
        }
        if t <= self.end_time() {
            // Binary search for the segment containing t.
            let idx = match self
                .breakpoints
                .binary_search_by(|b| b.partial_cmp(t).unwrap())
            {
                Ok(i) => return Ok(self.values[i].clone()),
                Err(i) => i - 1,
            };
            let dt = t - &self.breakpoints[idx];
            return Ok(self.values[idx]
                .iter()
                .zip(&self.slopes[idx])
                .map(|(v, s)| v + s * &dt)
                .collect());
        }
        match &self.tail {
            Tail::FiniteHorizon => Err(Error::Domain(format!(
                "time {t} beyond finite horizon {}",
                self.end_time()
            ))),
            Tail::ConstantSlope { slope } => {
                let dt = t - self.end_time();
                Ok(self
                    .values
                    .last()
                    .unwrap()
                    .iter()
                    .zip(slope)
                    .map(|(v, s)| v + s * &dt)
                    .collect())
            }
            Tail::Equivariant { factor, .. } => {
                let mut scale = Rational::one();
                let mut s = t.clone();
                while &s > self.end_time() {
                    s /= factor.clone();
                    scale *= factor.clone();
                }
                let base = self.value_at(&s)?;
                Ok(base.into_iter().map(|v| v * &scale).collect())
            }
        }
    }

    /// True iff `F_d = f_1 + ... + f_d` vanishes identically. For a valid
    /// template `F_d` is constant (its slope set is `{0}`), so the sum is
    /// checked at the first breakpoint only.
    pub fn balance_check(&self) -> bool {
        let sum: Rational = self.values[0].iter().sum();
        sum.is_zero()
    }

    /// Componentwise translation by a constant vector (stays a template;
    /// breaks balance unless the vector sums to zero and preserves order).
    pub fn translate(&self, offset: &[Rational]) -> Result<Self> {
        if offset.len() != self.dims.d() {
            return Err(Error::Malformed("offset length != d".into()));
        }
        let values = self
            .values
            .iter()
            .map(|row| row.iter().zip(offset).map(|(v, o)| v + o).collect())
            .collect();
        Template::new(self.dims, self.breakpoints.clone(), values, self.tail.clone())
    }

    /// The negated template: an `m x n` template becomes the `n x m`
    /// template `t -> sorted(-f(t))`, i.e. component `i` maps to `d+1-i`.
    pub fn negate(&self) -> Template {
        let values = self
            .values
            .iter()
            .map(|row| row.iter().rev().map(|v| -v).collect())
            .collect();
        let tail = match &self.tail {
            Tail::ConstantSlope { slope } => Tail::ConstantSlope {
                slope: slope.iter().rev().map(|v| -v).collect(),
            },
            other => other.clone(),
        };
        Template::new(self.dims.transpose(), self.breakpoints.clone(), values, tail)
            .expect("negation preserves structure")
    }

    /// Maximal intervals of linearity over the explicit domain, with the
    /// constant-slope tail appended as a final unbounded interval. For
    /// equivariant tails the scaled copies past `t_N` are not listed; the
    /// rate machinery works period-by-period instead.
    pub fn maximal_intervals(&self) -> Vec<LinearityInterval> {
        let mut out: Vec<LinearityInterval> = Vec::new();
        for i in 0..self.slopes.len() {
            let merge = out
                .last()
                .map(|last| last.slopes == self.slopes[i])
                .unwrap_or(false);
            if merge {
                out.last_mut().unwrap().end = Some(self.breakpoints[i + 1].clone());
            } else {
                out.push(LinearityInterval {
                    start: self.breakpoints[i].clone(),
                    end: Some(self.breakpoints[i + 1].clone()),
                    slopes: self.slopes[i].clone(),
                    start_values: self.values[i].clone(),
                });
            }
        }
        if let Tail::ConstantSlope { slope } = &self.tail {
            let merge = out.last().map(|last| &last.slopes == slope).unwrap_or(false);
            if merge {
                out.last_mut().unwrap().end = None;
            } else {
                out.push(LinearityInterval {
                    start: self.end_time().clone(),
                    end: None,
                    slopes: slope.clone(),
                    start_values: self.values.last().unwrap().clone(),
                });
            }
        }
        if out.is_empty() {
            // Single-breakpoint finite-horizon degenerate domain.
            out.push(LinearityInterval {
                start: self.start_time().clone(),
                end: Some(self.start_time().clone()),
                slopes: vec![int(0); self.dims.d()],
                start_values: self.values[0].clone(),
            });
        }
        out
    }

    /// Full validation of conditions (I)-(III), exact, reporting every
    /// violation found.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        self.check_ordering(&mut report);
        self.check_slope_range(&mut report);
        self.check_levels(&mut report);
        self.check_tail(&mut report);
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().ok()
    }

    fn check_ordering(&self, report: &mut ValidationReport) {
        for (i, row) in self.values.iter().enumerate() {
            for j in 0..row.len() - 1 {
                if row[j] > row[j + 1] {
                    report.push(
                        Condition::Ordering,
                        format!("breakpoint {i} (t = {})", self.breakpoints[i]),
                        format!("f_{} = {} exceeds f_{} = {}", j + 1, row[j], j + 2, row[j + 1]),
                    );
                }
            }
        }
        if let Tail::ConstantSlope { slope } = &self.tail {
            // Ordering on an infinite ray forces the slope vector itself to
            // be sorted wherever the values at t_N coincide or eventually
            // cross.
            let last = self.values.last().unwrap();
            for j in 0..slope.len() - 1 {
                if slope[j] > slope[j + 1] && last[j] <= last[j + 1] {
                    report.push(
                        Condition::Ordering,
                        "constant-slope tail".to_string(),
                        format!(
                            "components {} and {} cross on the tail (slopes {} > {})",
                            j + 1,
                            j + 2,
                            slope[j],
                            slope[j + 1]
                        ),
                    );
                }
            }
        }
    }

    fn check_slope_range(&self, report: &mut ValidationReport) {
        let lo = -rat(1, self.dims.n as i64);
        let hi = rat(1, self.dims.m as i64);
        let mut check = |slopes: &[Rational], loc: String| {
            for (c, s) in slopes.iter().enumerate() {
                if s < &lo || s > &hi {
                    report.push(
                        Condition::SlopeRange,
                        loc.clone(),
                        format!("component {} slope {} outside [{}, {}]", c + 1, s, lo, hi),
                    );
                }
            }
        };
        for (i, slopes) in self.slopes.iter().enumerate() {
            check(
                slopes,
                format!(
                    "segment {i} ({}, {})",
                    self.breakpoints[i],
                    self.breakpoints[i + 1]
                ),
            );
        }
        if let Tail::ConstantSlope { slope } = &self.tail {
            check(slope, "constant-slope tail".to_string());
        }
    }

    /// Conditions (III) at every level j = 1..d: within every maximal window
    /// where `f_j < f_{j+1}`, the partial sum `F_j` must have slopes in
    /// `Z(j)` and those slopes must be non-decreasing. Windows may continue
    /// into the tail (constant slope: one more virtual segment; equivariant:
    /// wrap to the scaled first period segment).
    fn check_levels(&self, report: &mut ValidationReport) {
        let d = self.dims.d();
        // Virtual segment list: (gap-open at left bp, slope vec, label).
        // For each level j we walk segments; a window is a maximal run where
        // the j-gap is positive on segment interiors and at interior
        // breakpoints between them.
        for j in 1..=d {
            let z = SlopeSet::new(self.dims, j).expect("level in range");
            let mut window: Vec<(Rational, String)> = Vec::new(); // (F_j slope, location)
            let flush = |win: &mut Vec<(Rational, String)>, report: &mut ValidationReport| {
                for k in 0..win.len() {
                    if !z.contains(&win[k].0) {
                        report.push(
                            Condition::SlopeQuantization,
                            format!("level {j}, {}", win[k].1),
                            format!("F_{j} slope {} not in Z({j})", win[k].0),
                        );
                    }
                    if k > 0 && win[k].0 < win[k - 1].0 {
                        report.push(
                            Condition::Convexity,
                            format!("level {j}, {}", win[k].1),
                            format!(
                                "F_{j} slope decreases from {} to {}",
                                win[k - 1].0,
                                win[k].0
                            ),
                        );
                    }
                }
                win.clear();
            };
            let n_seg = self.slopes.len();
            for i in 0..n_seg {
                // Gap open on the interior of segment i?
                let open = if j == d {
                    true
                } else {
                    let g0 = &self.values[i][j] - &self.values[i][j - 1];
                    let g1 = &self.values[i + 1][j] - &self.values[i + 1][j - 1];
                    g0.is_positive() || g1.is_positive()
                };
                // Does the window continue across breakpoint i (from segment
                // i-1)? Needs the gap strictly positive at the breakpoint.
                let continues = if j == d {
                    true
                } else {
                    (&self.values[i][j] - &self.values[i][j - 1]).is_positive()
                };
                if !open || (!window.is_empty() && !continues) {
                    flush(&mut window, report);
                }
                if open {
                    let fj_slope: Rational = self.slopes[i][..j].iter().sum();
                    window.push((
                        fj_slope,
                        format!(
                            "segment {i} ({}, {})",
                            self.breakpoints[i],
                            self.breakpoints[i + 1]
                        ),
                    ));
                }
            }
            // Tail continuation.
            match &self.tail {
                Tail::FiniteHorizon => {}
                Tail::ConstantSlope { slope } => {
                    let last = self.values.last().unwrap();
                    let open = if j == d {
                        true
                    } else {
                        // On the tail the gap is positive somewhere iff it is
                        // positive at t_N or grows.
                        let gap = &last[j] - &last[j - 1];
                        gap.is_positive() || (&slope[j] - &slope[j - 1]).is_positive()
                    };
                    let continues = j == d || (&last[j] - &last[j - 1]).is_positive();
                    if !open || (!window.is_empty() && !continues) {
                        flush(&mut window, report);
                    }
                    if open {
                        let fj_slope: Rational = slope[..j].iter().sum();
                        window.push((fj_slope, "constant-slope tail".to_string()));
                    }
                }
                Tail::Equivariant { anchor, .. } => {
                    // The segment after t_N is the scaled copy of the segment
                    // after t_a; one wrap check covers every period junction.
                    let last = self.values.last().unwrap();
                    let continues = j == d || (&last[j] - &last[j - 1]).is_positive();
                    if !window.is_empty() && continues {
                        let fj_slope: Rational = self.slopes[*anchor][..j].iter().sum();
                        window.push((fj_slope, format!("wrap of segment {anchor} past t_N")));
                    }
                }
            }
            flush(&mut window, report);
        }
    }

    fn check_tail(&self, report: &mut ValidationReport) {
        if let Tail::Equivariant { factor, anchor } = &self.tail {
            // Values must scale: f(t_N) = factor * f(t_a) (t_N = factor*t_a
            // is structural). Interior consistency of the two virtual
            // periods reduces to this plus the wrap checks above.
            let va = &self.values[*anchor];
            let vn = self.values.last().unwrap();
            for c in 0..self.dims.d() {
                if vn[c] != &va[c] * factor {
                    report.push(
                        Condition::TailConsistency,
                        format!("component {}", c + 1),
                        format!(
                            "f(t_N) = {} but factor * f(t_a) = {}",
                            vn[c],
                            &va[c] * factor
                        ),
                    );
                }
            }
            // Ordering at the anchor must persist under scaling: implied by
            // breakpoint ordering checks, nothing extra needed.
        }
    }

    /// All level-`q` partial-sum slopes on segment `i`.
    pub fn partial_sum_slope(&self, seg: usize, q: usize) -> Rational {
        self.slopes[seg][..q].iter().sum()
    }

    /// Index pairs `(L+, L-)` of the level-`q` slope on segment `seg`, when
    /// quantized.
    pub fn level_decomposition(&self, seg: usize, q: usize) -> Option<(usize, usize)> {
        decompose_slope(self.dims, q, &self.partial_sum_slope(seg, q))
    }
}

fn derive_slopes(breakpoints: &[Rational], values: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..breakpoints.len().saturating_sub(1))
        .map(|i| {
            let dt = &breakpoints[i + 1] - &breakpoints[i];
            values[i]
                .iter()
                .zip(&values[i + 1])
                .map(|(a, b)| (b - a) / &dt)
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Serialization: rationals as exact "p/q" strings, bit-exact round trip.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum TailSchema {
    ConstantSlope {
        #[serde(with = "crate::rational::serde_ratio_vec")]
        slope: Vec<Rational>,
    },
    Equivariant {
        #[serde(with = "crate::rational::serde_ratio")]
        factor: Rational,
        anchor: usize,
    },
    FiniteHorizon,
}

#[derive(Serialize, Deserialize)]
struct TemplateSchema {
    m: usize,
    n: usize,
    #[serde(with = "crate::rational::serde_ratio_vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "crate::rational::serde_ratio_mat")]
    values: Vec<Vec<Rational>>,
    tail: TailSchema,
}

impl Serialize for Template {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let tail = match &self.tail {
            Tail::ConstantSlope { slope } => TailSchema::ConstantSlope {
                slope: slope.clone(),
            },
            Tail::Equivariant { factor, anchor } => TailSchema::Equivariant {
                factor: factor.clone(),
                anchor: *anchor,
            },
            Tail::FiniteHorizon => TailSchema::FiniteHorizon,
        };
        TemplateSchema {
            m: self.dims.m,
            n: self.dims.n,
            breakpoints: self.breakpoints.clone(),
            values: self.values.clone(),
            tail,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Template {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let schema = TemplateSchema::deserialize(de)?;
        let dims = Dims::new(schema.m, schema.n).map_err(serde::de::Error::custom)?;
        let tail = match schema.tail {
            TailSchema::ConstantSlope { slope } => Tail::ConstantSlope { slope },
            TailSchema::Equivariant { factor, anchor } => Tail::Equivariant { factor, anchor },
            TailSchema::FiniteHorizon => Tail::FiniteHorizon,
        };
        Template::new(dims, schema.breakpoints, schema.values, tail)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn dims(m: usize, n: usize) -> Dims {
        Dims::new(m, n).unwrap()
    }

    /// The two-interval template of the basic figure for (1,2):
    /// slopes (-1/2, 1/4, 1/4) then (1, -1/2, -1/2), f(0) = f(3) = 0.
    pub(crate) fn figure_basic_12() -> Template {
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
    fn zero_template_is_valid() {
        let t = Template::zero(dims(2, 1), int(10)).unwrap();
        let report = t.validate();
        assert!(report.ok(), "{:?}", report.violations);
        assert!(t.balance_check());
    }

    #[test]
    fn figure_basic_is_valid_and_balanced() {
        let t = figure_basic_12();
        let report = t.validate();
        assert!(report.ok(), "{:?}", report.violations);
        assert!(t.balance_check());
        assert_eq!(t.value_at(&int(2)).unwrap(), vec![int(-1), rat(1, 2), rat(1, 2)]);
        assert_eq!(
            t.value_at(&rat(5, 2)).unwrap(),
            vec![rat(-1, 2), rat(1, 4), rat(1, 4)]
        );
    }

    #[test]
    fn unquantized_slope_is_caught() {
        // (1,1): slope vector (1/2, -1/2) with f_1 < f_2: F_1 slope 1/2 is
        // not in Z(1) = {1, -1}.
        let t = Template::new(
            dims(1, 1),
            vec![int(0), int(2)],
            vec![vec![int(-1), int(1)], vec![int(0), int(0)]],
            Tail::FiniteHorizon,
        )
        .unwrap();
        let report = t.validate();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == Condition::SlopeQuantization));
    }

    #[test]
    fn ordering_violation_is_caught() {
        let t = Template::new(
            dims(1, 1),
            vec![int(0), int(1)],
            vec![vec![int(1), int(0)], vec![int(0), int(0)]],
            Tail::FiniteHorizon,
        )
        .unwrap();
        assert!(t
            .validate()
            .violations
            .iter()
            .any(|v| v.condition == Condition::Ordering));
    }

    #[test]
    fn convexity_violation_is_caught() {
        // (1,1): f_1 goes up at 1 then down at -1 while staying below f_2:
        // F_1 slope decreases inside a window.
        let t = Template::new(
            dims(1, 1),
            vec![int(0), int(1), int(2)],
            vec![
                vec![int(-4), int(4)],
                vec![int(-3), int(3)],
                vec![int(-4), int(4)],
            ],
            Tail::FiniteHorizon,
        )
        .unwrap();
        let report = t.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == Condition::Convexity));
    }

    #[test]
    fn malformed_is_distinct_from_invalid() {
        let err = Template::new(
            dims(1, 1),
            vec![int(0), int(0)],
            vec![vec![int(0), int(0)], vec![int(0), int(0)]],
            Tail::FiniteHorizon,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
        let err = Template::new(
            dims(1, 1),
            vec![int(0)],
            vec![vec![int(0)]],
            Tail::FiniteHorizon,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn equivariant_structural_checks() {
        // Anchor value scaling enforced by validate, t_N = factor * t_a by new.
        let err = Template::new(
            dims(1, 1),
            vec![int(0), int(1), int(3)],
            vec![vec![int(0); 2], vec![int(0); 2], vec![int(0); 2]],
            Tail::Equivariant {
                factor: int(2),
                anchor: 1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn negation_swaps_dims_and_is_valid() {
        let t = figure_basic_12();
        let neg = t.negate();
        assert_eq!(neg.dims(), dims(2, 1));
        assert!(neg.validate().ok());
        assert_eq!(
            neg.value_at(&int(2)).unwrap(),
            vec![rat(-1, 2), rat(-1, 2), int(1)]
        );
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let t = figure_basic_12();
        let s = serde_json::to_string(&t).unwrap();
        let back: Template = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        let s2 = serde_json::to_string(&back).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn maximal_intervals_merge_equal_slopes() {
        // Insert a redundant breakpoint into the zero template.
        let t = Template::new(
            dims(1, 1),
            vec![int(0), int(1), int(2)],
            vec![vec![int(0); 2], vec![int(0); 2], vec![int(0); 2]],
            Tail::FiniteHorizon,
        )
        .unwrap();
        assert_eq!(t.maximal_intervals().len(), 1);
    }
}
