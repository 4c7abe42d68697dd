//! Small dense float-matrix helpers shared by the lattice and game code.

/// `a * b` for square matrices stored row-major.
pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Determinant by LU with partial pivoting.
pub fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for c in col..n {
                m[row][c] -= f * m[col][c];
            }
        }
    }
    det
}

/// Rank bookkeeping for greedy extraction of independent vectors: row
/// echelon with a relative pivot threshold.
pub struct RankTracker {
    rows: Vec<Vec<f64>>,
    threshold: f64,
}

impl RankTracker {
    pub fn new(threshold: f64) -> Self {
        RankTracker {
            rows: Vec::new(),
            threshold,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Tries to add the vector; returns true when it enlarges the span.
    pub fn try_add(&mut self, v: &[f64]) -> bool {
        let scale = norm(v).max(1e-300);
        let mut w = v.to_vec();
        for row in &self.rows {
            // Row is normalized with its pivot at 1.
            let pivot_col = row
                .iter()
                .position(|x| x.abs() > 0.5)
                .expect("stored rows keep a unit pivot");
            let f = w[pivot_col];
            if f != 0.0 {
                for (wi, ri) in w.iter_mut().zip(row) {
                    *wi -= f * ri;
                }
            }
        }
        let (best, best_abs) = w
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x.abs()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if best_abs <= self.threshold * scale {
            return false;
        }
        let pivot = w[best];
        for x in w.iter_mut() {
            *x /= pivot;
        }
        // Eliminate the new pivot from existing rows to keep reductions
        // one-pass.
        for row in self.rows.iter_mut() {
            let f = row[best];
            if f != 0.0 {
                for (ri, wi) in row.iter_mut().zip(&w) {
                    *ri -= f * wi;
                }
            }
        }
        self.rows.push(w);
        true
    }
}

/// Gram matrix of a set of (not necessarily square) vectors.
pub fn gram(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = vectors.len();
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = dot(&vectors[i], &vectors[j]);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_triangular() {
        let a = vec![
            vec![2.0, 1.0, 0.0],
            vec![0.0, 3.0, 5.0],
            vec![0.0, 0.0, -1.0],
        ];
        assert!((determinant(&a) + 6.0).abs() < 1e-12);
    }

    #[test]
    fn rank_tracker_counts() {
        let mut rt = RankTracker::new(1e-8);
        assert!(rt.try_add(&[1.0, 0.0, 0.0]));
        assert!(rt.try_add(&[1.0, 1.0, 0.0]));
        assert!(!rt.try_add(&[3.0, 5.0, 0.0]));
        assert!(rt.try_add(&[0.0, 0.0, 2.0]));
        assert_eq!(rt.rank(), 3);
    }
}
