//! The quantized slope sets `Z(j)`.
//!
//! `Z(j) = { L+/m - L-/n : L+ in [0,m], L- in [0,n], L+ + L- = j }` is the
//! finite set of slopes available to the partial sum `F_j` on an interval
//! where `f_j < f_{j+1}`. Membership is an exact equality test, which is why
//! everything upstream is rational.

use crate::dims::Dims;
use crate::rational::{rat, Rational};
use crate::{Error, Result};

/// The slope set at level `j`, with the witnessing `(L+, L-)` decomposition
/// for each member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeSet {
    pub dims: Dims,
    pub j: usize,
    /// `(L+, L-, slope)` triples, ascending in `L+` (hence in slope).
    pub members: Vec<(usize, usize, Rational)>,
}

impl SlopeSet {
    /// Enumerates `Z(j)` for `0 <= j <= d`.
    pub fn new(dims: Dims, j: usize) -> Result<Self> {
        let d = dims.d();
        if j > d {
            return Err(Error::Domain(format!("slope level {j} out of [0, {d}]")));
        }
        let lo = j.saturating_sub(dims.n);
        let hi = j.min(dims.m);
        let members = (lo..=hi)
            .map(|lp| {
                let lm = j - lp;
                (lp, lm, slope_value(dims, lp, lm))
            })
            .collect();
        Ok(SlopeSet { dims, j, members })
    }

    /// Exact membership test; returns the `(L+, L-)` witness.
    pub fn decompose(&self, slope: &Rational) -> Option<(usize, usize)> {
        self.members
            .iter()
            .find(|(_, _, s)| s == slope)
            .map(|(lp, lm, _)| (*lp, *lm))
    }

    pub fn contains(&self, slope: &Rational) -> bool {
        self.decompose(slope).is_some()
    }

    pub fn min_slope(&self) -> &Rational {
        &self.members.first().expect("Z(j) nonempty").2
    }

    pub fn max_slope(&self) -> &Rational {
        &self.members.last().expect("Z(j) nonempty").2
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `L+/m - L-/n` as an exact rational.
pub fn slope_value(dims: Dims, l_plus: usize, l_minus: usize) -> Rational {
    rat(l_plus as i64, dims.m as i64) - rat(l_minus as i64, dims.n as i64)
}

/// Solves `L+/m - L-/n = slope`, `L+ + L- = j` for nonnegative integers in
/// range. The solution is unique when it exists: `L+ = (mn*slope + j*m)/d`.
pub fn decompose_slope(dims: Dims, j: usize, slope: &Rational) -> Option<(usize, usize)> {
    let d = dims.d() as i64;
    let lp_times_d =
        slope * rat((dims.m * dims.n) as i64, 1) + rat((j * dims.m) as i64, 1);
    let lp = lp_times_d / rat(d, 1);
    if !crate::rational::is_integer(&lp) {
        return None;
    }
    let lp_int: i64 = match i64::try_from(lp.numer().clone()) {
        Ok(v) => v,
        Err(_) => return None,
    };
    if lp_int < 0 || lp_int as usize > dims.m || (lp_int as usize) > j {
        return None;
    }
    let lm = j - lp_int as usize;
    if lm > dims.n {
        return None;
    }
    Some((lp_int as usize, lm))
}
