//! Potential functions and their derivative inequalities.
//!
//! For a balanced template, `phi = max((m^2 n/d)|f_1|, (m n^2/d)|f_d|)`
//! satisfies `phi' <= delta_mn - delta(f, .)` on every interval of linearity
//! where `f != 0` and `phi` is differentiable, with equality exactly in four
//! configurations of `S+`; off the equality cases the slack is at least
//! `1/max(m, n)`. The variant `psi`, defined for `n >= 2`, replaces the
//! first branch by `(mn/d)|(m+1) f_1 + (d-1) f_2|` and satisfies the same
//! bound with two (non-exhaustively) listed equality cases.
//!
//! Intervals are split at interior zeros of `f` and at points where the max
//! switches branch, so that the derivative is well-defined on every piece
//! that gets a verdict.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::{analyze_span, IntervalAnalysis};
use crate::formulas::delta_mn;
use crate::rational::{int, rat, Rational};
use crate::template::{LinearityInterval, Template};
use crate::{Error, Result};

/// Outcome of comparing `phi'` against `delta_mn - delta` on one piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiCase {
    /// `S+ = {1..m}`.
    Equality1,
    /// `S+ = {1..m-1, m+1}` with both component groups fully merged.
    Equality2,
    /// `S+ = {2..m+1}` and `m|f_1| >= n|f_d|`.
    Equality3a,
    /// `S+ = {1..m-1, m+n}` and `n|f_d| >= m|f_1|`.
    Equality3b,
    /// Strict inequality; the gap must be at least `1/max(m,n)`.
    Strict,
    /// `f = 0` on the piece: the inequality does not apply.
    Skipped,
}

/// Outcome for the `psi` checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsiCase {
    /// `f_1 < f_2 = f_d`.
    Equality1,
    /// `f_1 < f_2 < f_3 = f_d` and `f_2' = -1/n`.
    Equality2,
    /// Equality attained outside the two listed configurations (the list is
    /// not exhaustive).
    EqualityOther,
    Strict,
    Skipped,
}

/// Per-piece verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceReport<C> {
    #[serde(with = "crate::rational::serde_ratio")]
    pub start: Rational,
    /// `None` on an unbounded constant-slope tail piece.
    pub end: Option<String>,
    /// Derivative of the potential on the piece.
    #[serde(with = "crate::rational::serde_ratio")]
    pub lhs: Rational,
    /// `delta_mn - delta(f, piece)`.
    #[serde(with = "crate::rational::serde_ratio")]
    pub rhs: Rational,
    pub case: C,
    /// `lhs <= rhs` (vacuously true on skipped pieces).
    pub ok: bool,
    /// For strict pieces: `rhs - lhs >= 1/max(m, n)`.
    pub strict_gap_ok: bool,
}

fn require_balanced(template: &Template) -> Result<()> {
    if !template.balance_check() {
        return Err(Error::Unsupported(
            "potential functions require a balanced template".into(),
        ));
    }
    Ok(())
}

/// `phi(t)` for a balanced template.
pub fn potential_phi(template: &Template, time: &Rational) -> Result<Rational> {
    require_balanced(template)?;
    let v = template.value_at(time)?;
    let dims = template.dims();
    let (m, n, d) = (dims.m as i64, dims.n as i64, dims.d() as i64);
    let a = rat(m * m * n, d) * v[0].abs();
    let b = rat(m * n * n, d) * v[v.len() - 1].abs();
    Ok(if a > b { a } else { b })
}

/// `psi(t)` for a balanced template with `n >= 2`.
pub fn potential_psi(template: &Template, time: &Rational) -> Result<Rational> {
    require_balanced(template)?;
    let dims = template.dims();
    if dims.n < 2 {
        return Err(Error::Unsupported(
            "psi requires n >= 2 (its derivative bound fails for n = 1)".into(),
        ));
    }
    let v = template.value_at(time)?;
    let (m, n, d) = (dims.m as i64, dims.n as i64, dims.d() as i64);
    let inner = rat(m + 1, 1) * &v[0] + rat(d - 1, 1) * &v[1];
    let a = rat(m * n, d) * inner.abs();
    let b = rat(m * n * n, d) * v[v.len() - 1].abs();
    Ok(if a > b { a } else { b })
}

/// An affine scalar on an interval: value at the interval start plus slope.
#[derive(Clone, Debug)]
struct Affine {
    at_start: Rational,
    slope: Rational,
}

impl Affine {
    fn at(&self, dt: &Rational) -> Rational {
        &self.at_start + &self.slope * dt
    }
}

/// A sub-piece of a linearity interval, carrying where it sits.
struct Piece {
    start: Rational,
    end: Option<Rational>,
    values_at_start: Vec<Rational>,
    slopes: Vec<Rational>,
}

impl Piece {
    fn len(&self) -> Option<Rational> {
        self.end.as_ref().map(|e| e - &self.start)
    }

    fn midpoint_offset(&self) -> Rational {
        match self.len() {
            Some(l) => l / int(2),
            // Unbounded: probe one unit in.
            None => int(1),
        }
    }
}

/// Splits a linearity interval at the interior roots of the given affine
/// functions (each root subdivides every piece containing it).
fn split_interval(span: &LinearityInterval, cuts: &[Rational]) -> Vec<Piece> {
    let mut cut_points: Vec<Rational> = cuts
        .iter()
        .filter(|c| {
            **c > span.start
                && match &span.end {
                    Some(e) => *c < e,
                    None => true,
                }
        })
        .cloned()
        .collect();
    cut_points.sort();
    cut_points.dedup();
    let mut bounds = vec![span.start.clone()];
    bounds.extend(cut_points);
    let mut pieces = Vec::new();
    for (i, b) in bounds.iter().enumerate() {
        let end = if i + 1 < bounds.len() {
            Some(bounds[i + 1].clone())
        } else {
            span.end.clone()
        };
        pieces.push(Piece {
            start: b.clone(),
            end,
            values_at_start: span.value_at(b),
            slopes: span.slopes.clone(),
        });
    }
    pieces
}

/// Root of an affine function relative to the span start, if any.
fn affine_root(value_at_start: &Rational, slope: &Rational, start: &Rational) -> Option<Rational> {
    if slope.is_zero() {
        None
    } else {
        Some(start - value_at_start / slope)
    }
}

/// True when the affine function is `>= 0` on the whole piece.
fn affine_nonneg(piece_len: &Option<Rational>, at_start: &Rational, slope: &Rational) -> bool {
    if at_start.is_negative() {
        return false;
    }
    match piece_len {
        Some(l) => !(at_start + slope * l).is_negative(),
        None => !slope.is_negative(),
    }
}

fn is_zero_throughout(piece: &Piece) -> bool {
    piece.values_at_start.iter().all(Zero::is_zero) && piece.slopes.iter().all(Zero::is_zero)
}

/// Common driver: walks every maximal interval, splits it, computes the
/// potential's slope per piece, and classifies.
fn check_inequality<C, FBranches, FClassify>(
    template: &Template,
    branches: FBranches,
    classify: FClassify,
) -> Result<Vec<PieceReport<C>>>
where
    C: Copy,
    FBranches: Fn(&Piece) -> (Affine, Affine),
    FClassify: Fn(&Piece, &IntervalAnalysis, bool) -> C,
{
    require_balanced(template)?;
    let dims = template.dims();
    let dmn = delta_mn(dims);
    let mut reports = Vec::new();
    for span in template.maximal_intervals() {
        if span.end.as_ref() == Some(&span.start) {
            continue; // degenerate single-point domain
        }
        let analysis = analyze_span(dims, &span)?;
        // Cut at interior zeros of f (all components vanish simultaneously;
        // since f is affine it can only happen at one point unless f = 0).
        let mut cuts: Vec<Rational> = Vec::new();
        if !is_zero_throughout(&Piece {
            start: span.start.clone(),
            end: span.end.clone(),
            values_at_start: span.start_values.clone(),
            slopes: span.slopes.clone(),
        }) {
            // A common zero exists only where the first component with a
            // nonzero (value, slope) pair vanishes; check the candidate.
            let candidate = span
                .start_values
                .iter()
                .zip(&span.slopes)
                .find_map(|(v, s)| affine_root(v, s, &span.start).filter(|_| !s.is_zero() || !v.is_zero()));
            if let Some(t0) = candidate {
                let dt = &t0 - &span.start;
                let all_zero = span
                    .start_values
                    .iter()
                    .zip(&span.slopes)
                    .all(|(v, s)| (v + s * &dt).is_zero());
                if all_zero {
                    cuts.push(t0);
                }
            }
        }
        // Cut where the two max branches cross.
        {
            let probe = Piece {
                start: span.start.clone(),
                end: span.end.clone(),
                values_at_start: span.start_values.clone(),
                slopes: span.slopes.clone(),
            };
            let (a, b) = branches(&probe);
            let diff0 = &a.at_start - &b.at_start;
            let dslope = &a.slope - &b.slope;
            if let Some(t0) = affine_root(&diff0, &dslope, &span.start) {
                cuts.push(t0);
            }
        }
        for piece in split_interval(&span, &cuts) {
            if is_zero_throughout(&piece) {
                reports.push(PieceReport {
                    start: piece.start.clone(),
                    end: piece.end.as_ref().map(|e| e.to_string()),
                    lhs: int(0),
                    rhs: &dmn - int(analysis.delta as i64),
                    case: classify(&piece, &analysis, true),
                    ok: true,
                    strict_gap_ok: true,
                });
                continue;
            }
            let (a, b) = branches(&piece);
            // Active branch on the open piece, probed at the midpoint.
            let mid = piece.midpoint_offset();
            let lhs = if a.at(&mid) >= b.at(&mid) { a.slope.clone() } else { b.slope.clone() };
            let rhs = &dmn - int(analysis.delta as i64);
            let ok = lhs <= rhs;
            let case = classify(&piece, &analysis, false);
            reports.push(PieceReport {
                start: piece.start.clone(),
                end: piece.end.as_ref().map(|e| e.to_string()),
                lhs,
                rhs,
                case,
                ok,
                strict_gap_ok: true, // refined by the specific checkers
            });
        }
    }
    Ok(reports)
}

/// Checks `phi' <= delta_mn - delta` on every piece, classifying equality
/// cases against the four configurations.
pub fn check_phi_inequality(template: &Template) -> Result<Vec<PieceReport<PhiCase>>> {
    let dims = template.dims();
    let (m, n, d) = (dims.m as i64, dims.n as i64, dims.d() as i64);
    let c1 = rat(m * m * n, d);
    let c2 = rat(m * n * n, d);
    let last = dims.d() - 1;
    let branches = move |piece: &Piece| {
        // Balanced and ordered: f_1 <= 0 <= f_d, so |f_1| = -f_1, |f_d| = f_d.
        (
            Affine {
                at_start: &c1 * -&piece.values_at_start[0],
                slope: &c1 * -&piece.slopes[0],
            },
            Affine {
                at_start: &c2 * &piece.values_at_start[last],
                slope: &c2 * &piece.slopes[last],
            },
        )
    };
    let m_us = dims.m;
    let n_us = dims.n;
    let classify = move |piece: &Piece, analysis: &IntervalAnalysis, skipped: bool| -> PhiCase {
        if skipped {
            return PhiCase::Skipped;
        }
        let s_plus = &analysis.s_plus;
        let case1: Vec<usize> = (1..=m_us).collect();
        let case2: Vec<usize> = (1..m_us).chain([m_us + 1]).collect();
        let case3a: Vec<usize> = (2..=m_us + 1).collect();
        let case3b: Vec<usize> = (1..m_us).chain([m_us + n_us]).collect();
        let len = piece.len();
        // m|f_1| - n|f_d| = -m f_1 - n f_d as an affine function.
        let side_at = -rat(m_us as i64, 1) * &piece.values_at_start[0]
            - rat(n_us as i64, 1) * &piece.values_at_start[m_us + n_us - 1];
        let side_slope = -rat(m_us as i64, 1) * &piece.slopes[0]
            - rat(n_us as i64, 1) * &piece.slopes[m_us + n_us - 1];
        // For m = 1 the sets of cases 2 and 3a coincide (and for n = 1
        // those of 2 and 3b do), so the side-condition cases are matched
        // first.
        if *s_plus == case1 {
            PhiCase::Equality1
        } else if *s_plus == case3a && affine_nonneg(&len, &side_at, &side_slope) {
            PhiCase::Equality3a
        } else if *s_plus == case3b && affine_nonneg(&len, &(-&side_at), &(-&side_slope)) {
            PhiCase::Equality3b
        } else if *s_plus == case2
            && analysis.equality_blocks == vec![(0, m_us), (m_us, m_us + n_us)]
        {
            PhiCase::Equality2
        } else {
            PhiCase::Strict
        }
    };
    let mut reports = check_inequality(template, branches, classify)?;
    // Strict pieces must show slack of at least 1/max(m, n); an equality on
    // a piece classified strict would surface here as a failing gap.
    let gap_floor = rat(1, dims.m.max(dims.n) as i64);
    for r in &mut reports {
        if r.case == PhiCase::Strict {
            r.strict_gap_ok = (&r.rhs - &r.lhs) >= gap_floor;
        }
    }
    Ok(reports)
}

/// Checks `psi' <= delta_mn - delta` (`n >= 2`), flagging the two stated
/// equality cases.
pub fn check_psi_inequality(template: &Template) -> Result<Vec<PieceReport<PsiCase>>> {
    let dims = template.dims();
    if dims.n < 2 {
        return Err(Error::Unsupported(
            "psi requires n >= 2 (its derivative bound fails for n = 1)".into(),
        ));
    }
    let (m, n, d) = (dims.m as i64, dims.n as i64, dims.d() as i64);
    let ca = rat(m * n, d);
    let cb = rat(m * n * n, d);
    let last = dims.d() - 1;
    let branches = move |piece: &Piece| {
        // (m+1) f_1 + (d-1) f_2 <= 0 for balanced templates, so the absolute
        // value is its negation; f_d >= 0.
        let inner_v = rat(m + 1, 1) * &piece.values_at_start[0] + rat(d - 1, 1) * &piece.values_at_start[1];
        let inner_s = rat(m + 1, 1) * &piece.slopes[0] + rat(d - 1, 1) * &piece.slopes[1];
        (
            Affine {
                at_start: &ca * -inner_v,
                slope: &ca * -inner_s,
            },
            Affine {
                at_start: &cb * &piece.values_at_start[last],
                slope: &cb * &piece.slopes[last],
            },
        )
    };
    let n_us = dims.n;
    let d_us = dims.d();
    let classify = move |piece: &Piece, analysis: &IntervalAnalysis, skipped: bool| -> PsiCase {
        if skipped {
            return PsiCase::Skipped;
        }
        // Equality can only be detected by the caller comparing lhs to rhs,
        // so classification here describes the configuration; the Strict
        // variant is used when neither configuration matches.
        let blocks = &analysis.equality_blocks;
        let two_blocks_1_rest = *blocks == vec![(0, 1), (1, d_us)];
        let three_blocks_1_1_rest = *blocks == vec![(0, 1), (1, 2), (2, d_us)];
        if two_blocks_1_rest {
            PsiCase::Equality1
        } else if three_blocks_1_1_rest && piece.slopes[1] == -rat(1, n_us as i64) {
            PsiCase::Equality2
        } else {
            PsiCase::Strict
        }
    };
    let mut reports = check_inequality(template, branches, classify)?;
    // The psi lemma's equality list is non-exhaustive, so labels are
    // reconciled with the actual outcome instead of trusted.
    for r in &mut reports {
        let equality = r.lhs == r.rhs;
        r.case = match (equality, r.case) {
            (_, PsiCase::Skipped) => PsiCase::Skipped,
            (true, PsiCase::Strict) => PsiCase::EqualityOther,
            (true, c) => c,
            (false, _) => PsiCase::Strict,
        };
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::Dims;
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
    fn phi_of_zero_template() {
        let t = Template::zero(dims(2, 1), int(5)).unwrap();
        assert_eq!(potential_phi(&t, &int(3)).unwrap(), int(0));
    }

    #[test]
    fn phi_rejects_unbalanced() {
        let t = Template::zero(dims(2, 1), int(5)).unwrap();
        let shifted = t.translate(&[int(1), int(1), int(1)]).unwrap();
        assert!(potential_phi(&shifted, &int(1)).is_err());
    }

    #[test]
    fn phi_direct_substitution() {
        // (1,2) template f(t) = (-2 tau t, -tau t, 3 tau t) is NOT sorted for
        // the spec's variant; use f(t) = (-tau t, -tau t, 2 tau t):
        // phi = max((2/3) tau t, (4/3) 2 tau t) = (8/3) tau t.
        let tau = rat(1, 8);
        let horizon = int(4);
        let t = Template::new(
            dims(1, 2),
            vec![int(0), horizon.clone()],
            vec![
                vec![int(0), int(0), int(0)],
                vec![-&tau * &horizon, -&tau * &horizon, rat(2, 1) * &tau * &horizon],
            ],
            Tail::FiniteHorizon,
        )
        .unwrap();
        let at = int(2);
        assert_eq!(
            potential_phi(&t, &at).unwrap(),
            rat(8, 3) * &tau * &at
        );
    }

    #[test]
    fn figure_basic_phi_cases() {
        let t = figure_basic_12();
        let reports = check_phi_inequality(&t).unwrap();
        // Interval 1 has S+ = {2} = {2..m+1}: case 3a (m|f1| >= n|fd| holds
        // since 1*|f1| = |f1| and f1 = -(f2+f3) = 2|f2|...), interval 2 has
        // S+ = {1}: case 1. Both equalities.
        assert!(reports.iter().all(|r| r.ok));
        assert_eq!(reports[0].case, PhiCase::Equality3a);
        assert_eq!(reports.last().unwrap().case, PhiCase::Equality1);
    }

    #[test]
    fn psi_requires_n_at_least_two() {
        let t = Template::zero(dims(2, 1), int(5)).unwrap();
        assert!(potential_psi(&t, &int(1)).is_err());
        assert!(check_psi_inequality(&t).is_err());
    }

    #[test]
    fn psi_dominates_phi() {
        let t = figure_basic_12();
        for k in 0..=12 {
            let time = rat(k, 4);
            let phi = potential_phi(&t, &time).unwrap();
            let psi = potential_psi(&t, &time).unwrap();
            assert!(psi >= phi, "psi {psi} < phi {phi} at t = {time}");
        }
    }

    #[test]
    fn psi_checker_on_figure_basic() {
        let t = figure_basic_12();
        let reports = check_psi_inequality(&t).unwrap();
        assert!(reports.iter().all(|r| r.ok), "{reports:?}");
    }
}
