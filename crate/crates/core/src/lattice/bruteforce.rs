//! Reference successive minima by exhaustive coefficient-box search.
//!
//! Independent of the reduction/enumeration pipeline: given a radius, a
//! sound per-coefficient box is derived from the inverse basis, every
//! integer point inside it is tried, and the flag is extracted greedily.
//! Exponential in dimension; intended for cross-checking in low dimensions.

use super::mat::{norm, RankTracker};
use super::reduce::lll_reduce;
use super::{LatticeError, Minima, Witness};

/// Inverse of a small square matrix by Gauss-Jordan.
fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| f64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(pivot, col);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        let t = m[col][c];
                        m[row][c] -= f * t;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// All `d` successive minima by brute force. The search radius defaults to
/// the longest LLL-reduced vector (which always bounds `lambda_d`); the
/// coefficient box is `|c_i| <= radius * ||row_i(B^-1)||`, which covers
/// every lattice vector within the radius. Errors if the box exceeds
/// `max_points`.
pub fn brute_force_minima(
    basis: &[Vec<f64>],
    max_points: u64,
) -> Result<Minima, LatticeError> {
    let d = basis.len();
    if d == 0 || d > 6 {
        return Err(LatticeError::Dimension(
            "brute force supports dimensions 1..=6".into(),
        ));
    }
    let reduced = lll_reduce(basis, 0.99);
    let radius = reduced
        .basis
        .iter()
        .map(|v| norm(v))
        .fold(0.0_f64, f64::max)
        * (1.0 + 1e-9);
    let inv = invert(basis).ok_or_else(|| LatticeError::BadBasis("singular basis".into()))?;
    // v = B^T c in the column picture; with basis vectors as rows here,
    // c = v * B^{-1} row-wise: bound |c_i| by radius * norm of column i of
    // the inverse. Use both row and column norms to stay sound under either
    // convention of the caller.
    let mut bounds = Vec::with_capacity(d);
    for i in 0..d {
        let col_norm: f64 = (0..d).map(|r| inv[r][i] * inv[r][i]).sum::<f64>().sqrt();
        let row_norm: f64 = norm(&inv[i]);
        bounds.push((radius * col_norm.max(row_norm)).ceil() as i64 + 1);
    }
    let total: u64 = bounds
        .iter()
        .map(|b| (2 * b + 1) as u64)
        .try_fold(1u64, |acc, x| acc.checked_mul(x))
        .ok_or(LatticeError::BudgetExceeded {
            explored: u64::MAX,
            budget: max_points,
        })?;
    if total > max_points {
        return Err(LatticeError::BudgetExceeded {
            explored: total,
            budget: max_points,
        });
    }

    let mut candidates: Vec<(f64, Vec<i64>, Vec<f64>)> = Vec::new();
    let mut coeffs = vec![0i64; d];
    fn walk(
        level: usize,
        bounds: &[i64],
        coeffs: &mut Vec<i64>,
        basis: &[Vec<f64>],
        radius: f64,
        out: &mut Vec<(f64, Vec<i64>, Vec<f64>)>,
    ) {
        if level == bounds.len() {
            if coeffs.iter().all(|&c| c == 0) {
                return;
            }
            let d = basis.len();
            let v: Vec<f64> = (0..d)
                .map(|c| {
                    coeffs
                        .iter()
                        .zip(basis)
                        .map(|(x, b)| *x as f64 * b[c])
                        .sum()
                })
                .collect();
            let nrm = norm(&v);
            if nrm <= radius {
                out.push((nrm, coeffs.clone(), v));
            }
            return;
        }
        for x in -bounds[level]..=bounds[level] {
            coeffs[level] = x;
            walk(level + 1, bounds, coeffs, basis, radius, out);
        }
        coeffs[level] = 0;
    }
    walk(0, &bounds, &mut coeffs, basis, radius, &mut candidates);
    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut tracker = RankTracker::new(1e-8);
    let mut values = Vec::new();
    let mut witnesses = Vec::new();
    for (nrm, coeffs, v) in candidates {
        if witnesses.len() == d {
            break;
        }
        if tracker.try_add(&v) {
            values.push(nrm);
            witnesses.push(Witness {
                coeffs,
                vector: v,
                norm: nrm,
            });
        }
    }
    if witnesses.len() < d {
        return Err(LatticeError::BadBasis(
            "brute-force flag incomplete (radius too small?)".into(),
        ));
    }
    Ok(Minima { values, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::minima::successive_minima;

    #[test]
    fn agrees_with_enumeration_on_simple_cases() {
        let cases = vec![
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![vec![0.5, 0.0], vec![0.0, 2.0]],
            vec![vec![3.0, 1.0], vec![2.0, 1.0]],
            vec![
                vec![1.0, 2.0, 0.0],
                vec![0.0, 1.0, 3.0],
                vec![0.0, 0.0, 1.0],
            ],
        ];
        for basis in cases {
            let a = brute_force_minima(&basis, 100_000_000).unwrap();
            let b = successive_minima(&basis, 10_000_000).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() < 1e-9, "{:?} vs {:?}", a.values, b.values);
            }
        }
    }
}
