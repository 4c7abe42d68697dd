//! Successive-minima profiles of the one-parameter family `g_t u_A Z^d`.

use super::mat::{determinant, gram};
use super::minima::successive_minima;
use super::LatticeError;
use crate::dims::Dims;
use crate::rational::to_f64;
use crate::slopes::SlopeSet;
use crate::template::Template;

/// A matrix generating the flow family.
#[derive(Clone, Debug)]
pub struct FlowMatrix {
    pub dims: Dims,
    /// Row-major `m x n` entries.
    pub a: Vec<Vec<f64>>,
}

impl FlowMatrix {
    pub fn new(dims: Dims, a: Vec<Vec<f64>>) -> Result<Self, LatticeError> {
        if a.len() != dims.m || a.iter().any(|r| r.len() != dims.n) {
            return Err(LatticeError::BadBasis(format!(
                "matrix shape mismatch for dims {dims}"
            )));
        }
        if a.iter().flatten().any(|x| !x.is_finite()) {
            return Err(LatticeError::BadBasis("non-finite matrix entry".into()));
        }
        Ok(FlowMatrix { dims, a })
    }

    /// Basis vectors of `g_t u_A Z^d` (each of length `d`): the columns of
    /// `g_t u_A`, where `u_A` has the identity blocks on the diagonal and
    /// `A` in the upper-right corner, and `g_t` scales the first `m`
    /// coordinates by `e^{t/m}` and the last `n` by `e^{-t/n}`.
    pub fn basis_at(&self, t: f64) -> Vec<Vec<f64>> {
        let (m, n) = (self.dims.m, self.dims.n);
        let d = m + n;
        let em = (t / m as f64).exp();
        let en = (-t / n as f64).exp();
        let mut cols = Vec::with_capacity(d);
        for i in 0..m {
            let mut v = vec![0.0; d];
            v[i] = em;
            cols.push(v);
        }
        for j in 0..n {
            let mut v = vec![0.0; d];
            for i in 0..m {
                v[i] = em * self.a[i][j];
            }
            v[m + j] = en;
            cols.push(v);
        }
        cols
    }
}

/// Log successive minima along a time grid, with witnesses.
#[derive(Clone, Debug)]
pub struct MinimaProfile {
    pub dims: Dims,
    pub times: Vec<f64>,
    /// `h[i][j] = log lambda_{j+1}(g_{t_i} u_A Z^d)`, sorted per row.
    pub h: Vec<Vec<f64>>,
    /// Witness coefficient vectors per time (integer coordinates in `Z^d`).
    pub witness_coeffs: Vec<Vec<Vec<i64>>>,
}

/// Computes the profile over the grid. Budget errors carry the offending
/// time in the message.
pub fn h_profile(
    flow: &FlowMatrix,
    grid: &[f64],
    budget: u64,
) -> Result<MinimaProfile, LatticeError> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LatticeError::Usage("grid must strictly increase".into()));
    }
    let mut h = Vec::with_capacity(grid.len());
    let mut witness_coeffs = Vec::with_capacity(grid.len());
    for &t in grid {
        let basis = flow.basis_at(t);
        let minima = successive_minima(&basis, budget).map_err(|e| match e {
            LatticeError::BudgetExceeded { explored, budget } => LatticeError::Usage(format!(
                "budget exceeded at t = {t}: {explored} nodes of {budget}"
            )),
            other => other,
        })?;
        h.push(minima.values.iter().map(|x| x.ln()).collect());
        witness_coeffs.push(minima.witnesses.iter().map(|w| w.coeffs.clone()).collect());
    }
    Ok(MinimaProfile {
        dims: flow.dims,
        times: grid.to_vec(),
        h,
        witness_coeffs,
    })
}

/// `|sum_j log lambda_j - log covolume|`: by Minkowski's second theorem the
/// product of the minima matches the covolume up to a dimension constant.
pub fn minkowski_check(minima: &[f64], det_log: f64) -> f64 {
    let s: f64 = minima.iter().map(|x| x.ln()).sum();
    (s - det_log).abs()
}

/// Log covolume of the sublattice spanned by the given independent vectors:
/// half the log Gram determinant.
pub fn rational_subspace_covolume(vectors: &[Vec<f64>]) -> Result<f64, LatticeError> {
    if vectors.is_empty() {
        return Err(LatticeError::Usage("need at least one vector".into()));
    }
    let g = gram(vectors);
    let det = determinant(&g);
    if det <= 1e-18 {
        return Err(LatticeError::DependentVectors);
    }
    Ok(0.5 * det.ln())
}

/// Verdict of checking a profile against the template conditions.
#[derive(Clone, Debug)]
pub struct ApproxTemplateReport {
    /// Rows where sortedness failed (should be empty).
    pub ordering_violations: Vec<usize>,
    /// `(grid index, component, quotient)` for difference quotients outside
    /// `[-1/n - tol, 1/m + tol]`.
    pub slope_violations: Vec<(usize, usize, f64)>,
    /// Per separated stretch: level `j`, time range, width of the band
    /// containing `F_j` above its best quantized convex minorant.
    pub band_reports: Vec<BandReport>,
    pub tolerance: f64,
}

#[derive(Clone, Debug)]
pub struct BandReport {
    pub level: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub band_width: f64,
}

impl ApproxTemplateReport {
    pub fn ordering_ok(&self) -> bool {
        self.ordering_violations.is_empty()
    }

    pub fn slopes_ok(&self) -> bool {
        self.slope_violations.is_empty()
    }
}

/// Checks the three template conditions on a sampled profile: sortedness,
/// difference-quotient bounds within `tol` (plus grid-step slack), and on
/// every maximal stretch where `h_{j+1} - h_j` exceeds the separation
/// threshold, the distance from `F_j` to the largest convex function with
/// quantized slopes lying below it.
pub fn approx_template_check(
    profile: &MinimaProfile,
    tol: f64,
    separation: f64,
) -> ApproxTemplateReport {
    let dims = profile.dims;
    let d = dims.d();
    let mut ordering_violations = Vec::new();
    for (i, row) in profile.h.iter().enumerate() {
        if row.windows(2).any(|w| w[0] > w[1] + 1e-12) {
            ordering_violations.push(i);
        }
    }
    let lo = -1.0 / dims.n as f64 - tol;
    let hi = 1.0 / dims.m as f64 + tol;
    let mut slope_violations = Vec::new();
    for i in 0..profile.times.len().saturating_sub(1) {
        let dt = profile.times[i + 1] - profile.times[i];
        for c in 0..d {
            let q = (profile.h[i + 1][c] - profile.h[i][c]) / dt;
            if q < lo || q > hi {
                slope_violations.push((i, c, q));
            }
        }
    }

    let mut band_reports = Vec::new();
    for j in 1..d {
        let mut run_start: Option<usize> = None;
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for i in 0..profile.times.len() {
            let gap = profile.h[i][j] - profile.h[i][j - 1];
            if gap > separation {
                if run_start.is_none() {
                    run_start = Some(i);
                }
            } else if let Some(s) = run_start.take() {
                if i - s >= 3 {
                    runs.push((s, i - 1));
                }
            }
        }
        if let Some(s) = run_start {
            let e = profile.times.len() - 1;
            if e - s >= 3 {
                runs.push((s, e));
            }
        }
        let z = SlopeSet::new(dims, j).expect("level in range");
        for (s, e) in runs {
            let pts: Vec<(f64, f64)> = (s..=e)
                .map(|i| {
                    let fj: f64 = profile.h[i][..j].iter().sum();
                    (profile.times[i], fj)
                })
                .collect();
            // Largest convex minorant with slopes in Z(j): the upper
            // envelope of the best line of each admissible slope.
            let mut band: f64 = 0.0;
            for &(t, f) in &pts {
                let mut best = f64::NEG_INFINITY;
                for (_, _, slope) in &z.members {
                    let sl = to_f64(slope);
                    let c = pts
                        .iter()
                        .map(|&(u, g)| g - sl * u)
                        .fold(f64::INFINITY, f64::min);
                    best = best.max(sl * t + c);
                }
                band = band.max(f - best);
            }
            band_reports.push(BandReport {
                level: j,
                t_start: pts[0].0,
                t_end: pts[pts.len() - 1].0,
                band_width: band,
            });
        }
    }
    ApproxTemplateReport {
        ordering_violations,
        slope_violations,
        band_reports,
        tolerance: tol,
    }
}

/// Sup-norm distance between a profile and a template over the shared
/// domain.
pub fn template_distance(
    profile: &MinimaProfile,
    template: &Template,
) -> Result<f64, LatticeError> {
    if profile.dims != template.dims() {
        return Err(LatticeError::Usage("dimension mismatch".into()));
    }
    let mut best: Option<f64> = None;
    for (i, &t) in profile.times.iter().enumerate() {
        let tr = match crate::rational::from_f64(t) {
            Some(r) => r,
            None => continue,
        };
        let fv = match template.value_at(&tr) {
            Ok(v) => v,
            Err(_) => continue, // outside the template's domain
        };
        let dist = profile.h[i]
            .iter()
            .zip(&fv)
            .map(|(h, f)| (h - to_f64(f)).abs())
            .fold(0.0_f64, f64::max);
        best = Some(best.map_or(dist, |b: f64| b.max(dist)));
    }
    best.ok_or_else(|| LatticeError::Usage("domains do not overlap".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn grid(t_max: f64, step: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut t = 0.0;
        while t <= t_max + 1e-12 {
            out.push(t);
            t += step;
        }
        out
    }

    #[test]
    fn zero_matrix_profile_is_exact() {
        // A = 0, (1,1): h(t) = (-t, t) exactly.
        let dims = Dims::new(1, 1).unwrap();
        let flow = FlowMatrix::new(dims, vec![vec![0.0]]).unwrap();
        let g = grid(5.0, 0.5);
        let p = h_profile(&flow, &g, 1_000_000).unwrap();
        for (i, &t) in p.times.iter().enumerate() {
            assert!((p.h[i][0] + t).abs() < 1e-9);
            assert!((p.h[i][1] - t).abs() < 1e-9);
        }
        let report = approx_template_check(&p, 1e-6, 1.0);
        assert!(report.ordering_ok());
        assert!(report.slopes_ok());
    }

    #[test]
    fn template_distance_zero_matrix() {
        // Distance from the A = 0 profile to the matching explicit template
        // (f = (-t, t) via a constant-slope tail) is ~0; to the zero
        // template it grows linearly.
        let dims = Dims::new(1, 1).unwrap();
        let flow = FlowMatrix::new(dims, vec![vec![0.0]]).unwrap();
        let g = grid(10.0, 1.0);
        let p = h_profile(&flow, &g, 1_000_000).unwrap();

        let matching = Template::new(
            dims,
            vec![int(0), int(1)],
            vec![vec![int(0), int(0)], vec![int(-1), int(1)]],
            crate::template::Tail::ConstantSlope {
                slope: vec![int(-1), int(1)],
            },
        )
        .unwrap();
        assert!(template_distance(&p, &matching).unwrap() < 1e-9);

        let zero = Template::new(
            dims,
            vec![int(0), int(20)],
            vec![vec![int(0), int(0)], vec![int(0), int(0)]],
            crate::template::Tail::FiniteHorizon,
        )
        .unwrap();
        assert!(template_distance(&p, &zero).unwrap() >= 5.0);
    }

    #[test]
    fn covolume_basics() {
        // Single vector: log norm. Orthogonal pair: sum of log norms.
        let v = vec![3.0, 4.0, 0.0];
        assert!((rational_subspace_covolume(&[v.clone()]).unwrap() - 5.0_f64.ln()).abs() < 1e-12);
        let pair = vec![vec![2.0, 0.0, 0.0], vec![0.0, 3.0, 0.0]];
        assert!((rational_subspace_covolume(&pair).unwrap() - 6.0_f64.ln()).abs() < 1e-12);
        // e1, e1 + e2 in Z^3: covolume 1, log 0.
        let skew = vec![vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0]];
        assert!(rational_subspace_covolume(&skew).unwrap().abs() < 1e-12);
        // Dependent vectors error.
        let dep = vec![vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]];
        assert!(matches!(
            rational_subspace_covolume(&dep),
            Err(LatticeError::DependentVectors)
        ));
    }

    #[test]
    fn adversarial_slope_violation_is_flagged() {
        let dims = Dims::new(1, 1).unwrap();
        let profile = MinimaProfile {
            dims,
            times: vec![0.0, 1.0, 2.0],
            h: vec![vec![0.0, 0.0], vec![-2.0, 2.0], vec![-4.0, 4.0]],
            witness_coeffs: vec![vec![], vec![], vec![]],
        };
        let report = approx_template_check(&profile, 1e-6, 1.0);
        assert!(!report.slopes_ok());
    }
}
