//! Depth-first enumeration of all lattice vectors inside a ball.
//!
//! Works on the Gram-Schmidt data of a (preferably reduced) basis: at level
//! `i` the coefficient `x_i` ranges over an interval determined by the
//! remaining norm budget, and the partial sums prune the tree. Deterministic
//! and budgeted; exceeding the budget is an error, never a truncated result.

use super::mat::dot;
use super::LatticeError;

/// A lattice point found by enumeration: coefficients w.r.t. the enumerated
/// basis and the squared norm.
#[derive(Clone, Debug)]
pub struct EnumPoint {
    pub coeffs: Vec<i64>,
    pub norm_sq: f64,
}

/// Enumerates all nonzero vectors `v = sum x_i b_i` with `||v||^2 <=
/// radius_sq`, up to the sign symmetry: exactly one of `v, -v` is reported
/// (the one whose highest nonzero coefficient is positive).
pub fn enumerate_ball(
    basis: &[Vec<f64>],
    radius_sq: f64,
    budget: u64,
) -> Result<Vec<EnumPoint>, LatticeError> {
    let n = basis.len();
    // GSO data.
    let mut b_star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v = basis[i].clone();
        for j in 0..i {
            let denom = dot(&b_star[j], &b_star[j]);
            let m = if denom > 0.0 {
                dot(&basis[i], &b_star[j]) / denom
            } else {
                0.0
            };
            mu[i][j] = m;
            for (vk, bk) in v.iter_mut().zip(&b_star[j]) {
                *vk -= m * bk;
            }
        }
        b_star.push(v);
    }
    let c: Vec<f64> = b_star.iter().map(|v| dot(v, v)).collect();
    if c.iter().any(|&x| x <= 0.0) {
        return Err(LatticeError::BadBasis(
            "Gram-Schmidt degenerate; basis not independent".into(),
        ));
    }

    // Iterative DFS from the last level down to 0.
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    let mut explored: u64 = 0;
    // centers[i] = -sum_{j>i} x_j mu[j][i]; partial[i] = norm^2 contributed
    // by levels > i.
    fn recurse(
        level: usize,
        n: usize,
        x: &mut Vec<i64>,
        mu: &[Vec<f64>],
        c: &[f64],
        radius_sq: f64,
        partial: f64,
        out: &mut Vec<EnumPoint>,
        explored: &mut u64,
        budget: u64,
    ) -> Result<(), LatticeError> {
        let center: f64 = -(level + 1..n)
            .map(|j| x[j] as f64 * mu[j][level])
            .sum::<f64>();
        let room = radius_sq - partial;
        if room < -1e-12 {
            return Ok(());
        }
        let half_width = (room.max(0.0) / c[level]).sqrt();
        let lo = (center - half_width - 1e-9).ceil() as i64;
        let hi = (center + half_width + 1e-9).floor() as i64;
        for xi in lo..=hi {
            *explored += 1;
            if *explored > budget {
                return Err(LatticeError::BudgetExceeded {
                    explored: *explored,
                    budget,
                });
            }
            x[level] = xi;
            let diff = xi as f64 - center;
            let new_partial = partial + diff * diff * c[level];
            if new_partial > radius_sq + 1e-9 {
                continue;
            }
            if level == 0 {
                // Skip zero and the negative representative.
                if let Some(top) = (0..n).rev().find(|&i| x[i] != 0) {
                    if x[top] > 0 {
                        out.push(EnumPoint {
                            coeffs: x.clone(),
                            norm_sq: new_partial,
                        });
                    }
                }
            } else {
                recurse(
                    level - 1,
                    n,
                    x,
                    mu,
                    c,
                    radius_sq,
                    new_partial,
                    out,
                    explored,
                    budget,
                )?;
            }
        }
        x[level] = 0;
        Ok(())
    }
    recurse(
        n - 1,
        n,
        &mut x,
        &mu,
        &c,
        radius_sq,
        0.0,
        &mut out,
        &mut explored,
        budget,
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_count() {
        // Z^2 with radius 1: representatives of (+-1, 0), (0, +-1): two.
        let basis = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let pts = enumerate_ball(&basis, 1.0 + 1e-9, 10_000).unwrap();
        assert_eq!(pts.len(), 2);
        // Radius sqrt(2): adds (1, +-1): four representatives total.
        let pts = enumerate_ball(&basis, 2.0 + 1e-9, 10_000).unwrap();
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn budget_is_enforced() {
        let basis = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let err = enumerate_ball(&basis, 10_000.0, 100).unwrap_err();
        assert!(matches!(err, LatticeError::BudgetExceeded { .. }));
    }
}
