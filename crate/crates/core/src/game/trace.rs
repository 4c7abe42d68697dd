//! Lattice encoding of game progress.
//!
//! Turn `k` determines the unimodular lattice
//! `Lambda_{k+1} = g_{-alpha log(beta^{k+1} rho_{-1})} u_{Y_k} Z^d` with
//! `alpha = mn/(m+n)` and `Y_k` the partial outcome; equivalently the
//! recursion `Lambda_{k+1} = g_gamma u_{X_k} Lambda_k` with
//! `gamma = -alpha log beta`. Computing both ways and comparing is a
//! numerical-health check; the successive minima of the `Lambda_k`,
//! read at times `gamma k`, track the minima function of the outcome
//! matrix up to bounded error.

use crate::lattice::mat::{identity, mat_mul};
use crate::lattice::minima::successive_minima;
use crate::lattice::profile::FlowMatrix;
use crate::lattice::LatticeError;

use super::{outcome, GameError, GameTranscript};

/// The sequence of basis matrices and derived data.
#[derive(Clone, Debug)]
pub struct LatticeTrace {
    pub gamma: f64,
    pub alpha: f64,
    /// `Lambda_k` for `k = 1..=K`, as d x d basis matrices (row-major; the
    /// columns generate the lattice).
    pub lattices: Vec<Vec<Vec<f64>>>,
    /// Largest relative discrepancy between the direct and recursive
    /// computations.
    pub max_relative_mismatch: f64,
}

/// `u_Y` as a d x d matrix for an m x n matrix `Y` (flattened row-major).
fn u_matrix(m: usize, n: usize, y: &[f64]) -> Vec<Vec<f64>> {
    let d = m + n;
    let mut u = identity(d);
    for i in 0..m {
        for j in 0..n {
            u[i][m + j] = y[i * n + j];
        }
    }
    u
}

/// `g_s` as a d x d diagonal matrix.
fn g_matrix(m: usize, n: usize, s: f64) -> Vec<Vec<f64>> {
    let d = m + n;
    let mut g = identity(d);
    let em = (s / m as f64).exp();
    let en = (-s / n as f64).exp();
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = if i < m { em } else { en };
    }
    g
}

/// Verifies the shear/flow semiconjugacy
/// `u_X g_{-alpha log l} = g_{-alpha log l} u_{l X}` entrywise.
pub fn semiconjugacy_residual(m: usize, n: usize, x: &[f64], l: f64, alpha: f64) -> f64 {
    let s = -alpha * l.ln();
    let lhs = mat_mul(&u_matrix(m, n, x), &g_matrix(m, n, s));
    let scaled: Vec<f64> = x.iter().map(|v| v * l).collect();
    let rhs = mat_mul(&g_matrix(m, n, s), &u_matrix(m, n, &scaled));
    lhs.iter()
        .flatten()
        .zip(rhs.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Builds the lattice trace from a transcript, cross-validating the direct
/// and recursive constructions to `rel_tol` (relative, entrywise).
pub fn lattice_trace(transcript: &GameTranscript, rel_tol: f64) -> Result<LatticeTrace, GameError> {
    let config = &transcript.config;
    let (m, n) = (config.dims.m, config.dims.n);
    let mn = (m * n) as f64;
    let alpha = mn / (m + n) as f64;
    let gamma = -alpha * config.beta.ln();
    let rho_m1 = config.rho_minus_one();

    let picks: Vec<&Vec<f64>> = transcript
        .alice_sets
        .iter()
        .zip(&transcript.bob_picks)
        .map(|(set, &p)| &set[p])
        .collect();

    // Partial outcomes Y_k = X_0 + sum_{i=1}^k beta^i rho_{-1} X_i.
    let space = config.space_dim();
    let mut y = picks[0].clone();
    let mut direct: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut recursive: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut max_rel: f64 = 0.0;
    for k in 0..picks.len() {
        if k > 0 {
            let w = config.beta.powi(k as i32) * rho_m1;
            for (yi, xi) in y.iter_mut().zip(picks[k]) {
                *yi += w * xi;
            }
        }
        let s = -alpha * (config.beta.powi(k as i32 + 1) * rho_m1).ln();
        let lam = mat_mul(&g_matrix(m, n, s), &u_matrix(m, n, &y));
        direct.push(lam.clone());
        if k == 0 {
            recursive.push(lam);
        } else {
            let prev = &recursive[k - 1];
            let shear = u_matrix(m, n, picks[k]);
            let step = mat_mul(&g_matrix(m, n, gamma), &mat_mul(&shear, prev));
            // Relative mismatch against the direct form.
            let scale = direct[k]
                .iter()
                .flatten()
                .map(|x| x.abs())
                .fold(1.0_f64, f64::max);
            let diff = direct[k]
                .iter()
                .flatten()
                .zip(step.iter().flatten())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            max_rel = max_rel.max(diff / scale);
            if diff / scale > rel_tol {
                return Err(GameError::NumericalInstability(format!(
                    "direct and recursive lattices diverge at turn {k}: relative error {}",
                    diff / scale
                )));
            }
            recursive.push(step);
        }
        let _ = space;
    }
    Ok(LatticeTrace {
        gamma,
        alpha,
        lattices: recursive,
        max_relative_mismatch: max_rel,
    })
}

/// Report comparing `h(Lambda_k)` against the outcome matrix's minima
/// function at the matching times.
#[derive(Clone, Debug)]
pub struct MsReport {
    pub times: Vec<f64>,
    /// Sup-norm discrepancies per turn.
    pub discrepancy: Vec<f64>,
    pub sup_discrepancy: f64,
    /// Least-squares slope of discrepancy against turn index.
    pub trend_slope: f64,
}

/// Computes both sides over the trace. The discrepancy should stay bounded
/// (it is an additive-constant correspondence), not small.
pub fn ms_consistency(
    transcript: &GameTranscript,
    trace: &LatticeTrace,
    budget: u64,
) -> Result<MsReport, LatticeError> {
    let config = &transcript.config;
    let (x_inf, _) = outcome(transcript);
    let a: Vec<Vec<f64>> = (0..config.dims.m)
        .map(|i| x_inf[i * config.dims.n..(i + 1) * config.dims.n].to_vec())
        .collect();
    let flow = FlowMatrix::new(config.dims, a)?;
    let rho_m1 = config.rho_minus_one();
    let offset = -trace.alpha * rho_m1.ln();
    let mut times = Vec::new();
    let mut discrepancy = Vec::new();
    for (k, lam) in trace.lattices.iter().enumerate() {
        // Basis vectors are the columns of the matrix.
        let d = lam.len();
        let cols: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|i| lam[i][j]).collect()).collect();
        let h_lam = successive_minima(&cols, budget)?;
        let t = offset + trace.gamma * (k as f64 + 1.0);
        let h_out = successive_minima(&flow.basis_at(t), budget)?;
        let diff = h_lam
            .values
            .iter()
            .zip(&h_out.values)
            .map(|(a, b)| (a.ln() - b.ln()).abs())
            .fold(0.0_f64, f64::max);
        times.push(t);
        discrepancy.push(diff);
    }
    let sup = discrepancy.iter().cloned().fold(0.0_f64, f64::max);
    // Least-squares slope of discrepancy vs turn index.
    let n = discrepancy.len() as f64;
    let mean_x = (discrepancy.len() as f64 - 1.0) / 2.0;
    let mean_y = discrepancy.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, y) in discrepancy.iter().enumerate() {
        let dx = i as f64 - mean_x;
        num += dx * (y - mean_y);
        den += dx * dx;
    }
    let trend_slope = if den > 0.0 { num / den } else { 0.0 };
    Ok(MsReport {
        times,
        discrepancy,
        sup_discrepancy: sup,
        trend_slope,
    })
}
