//! LLL reduction with transform tracking.
//!
//! Reduction is a preconditioner here: enumeration radii and coefficient
//! boxes derived from a reduced basis stay small. The integer transform `u`
//! maps coefficients w.r.t. the reduced basis back to the original one.

use super::mat::dot;

/// Result of reducing a basis: the reduced vectors and the unimodular
/// transform such that `reduced[i] = sum_j u[i][j] * original[j]`.
pub struct Reduced {
    pub basis: Vec<Vec<f64>>,
    pub transform: Vec<Vec<i64>>,
}

/// Gram-Schmidt orthogonalization; returns (b_star, mu).
fn gso(basis: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = basis.len();
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
    (b_star, mu)
}

/// In-place LLL with Lovász parameter `delta`.
pub fn lll_reduce(basis: &[Vec<f64>], delta: f64) -> Reduced {
    let n = basis.len();
    let mut b: Vec<Vec<f64>> = basis.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let (mut b_star, mut mu) = gso(&b);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break; // numerical stalemate; the basis is still usable
        }
        // Size-reduce b_k against b_{k-1}..b_0.
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 && r.is_finite() {
                let ri = r as i64;
                for c in 0..b[k].len() {
                    let t = b[j][c];
                    b[k][c] -= r * t;
                }
                for c in 0..n {
                    u[k][c] -= ri * u[j][c];
                }
                let (bs, m) = gso(&b);
                b_star = bs;
                mu = m;
            }
        }
        let lhs = dot(&b_star[k], &b_star[k]);
        let rhs = (delta - mu[k][k - 1] * mu[k][k - 1]) * dot(&b_star[k - 1], &b_star[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            let (bs, m) = gso(&b);
            b_star = bs;
            mu = m;
            k = k.max(2) - 1;
            if k == 0 {
                k = 1;
            }
        }
    }
    Reduced {
        basis: b,
        transform: u,
    }
}


/// Exact Gauss reduction of a rank-2 basis: iterate size-reduction and
/// swaps until `||b1|| <= ||b2||` and `|mu| <= 1/2`. For a Gauss-reduced
/// basis the two vector norms are exactly the two successive minima.
pub fn gauss_reduce_2d(basis: &[Vec<f64>]) -> Reduced {
    let mut b: Vec<Vec<f64>> = basis.to_vec();
    let mut u: Vec<Vec<i64>> = vec![vec![1, 0], vec![0, 1]];
    for _ in 0..10_000 {
        if dot(&b[0], &b[0]) > dot(&b[1], &b[1]) {
            b.swap(0, 1);
            u.swap(0, 1);
        }
        let denom = dot(&b[0], &b[0]);
        if denom == 0.0 {
            break;
        }
        let mu = dot(&b[1], &b[0]) / denom;
        let r = mu.round();
        if r == 0.0 {
            break;
        }
        let ri = r as i64;
        for c in 0..b[1].len() {
            let t = b[0][c];
            b[1][c] -= r * t;
        }
        for c in 0..2 {
            u[1][c] -= ri * u[0][c];
        }
    }
    Reduced {
        basis: b,
        transform: u,
    }
}
