//! Successive minima by reduction + enumeration + greedy flag extraction.

use super::enumerate::enumerate_ball;
use super::mat::{norm, RankTracker};
use super::reduce::{gauss_reduce_2d, lll_reduce};
use super::{LatticeError, DEFAULT_BUDGET, MAX_DIM};

/// A lattice vector achieving one of the minima.
#[derive(Clone, Debug)]
pub struct Witness {
    /// Integer coefficients w.r.t. the *original* basis.
    pub coeffs: Vec<i64>,
    /// The vector itself.
    pub vector: Vec<f64>,
    pub norm: f64,
}

/// The successive minima `lambda_1 <= ... <= lambda_d` with witnesses.
#[derive(Clone, Debug)]
pub struct Minima {
    pub values: Vec<f64>,
    pub witnesses: Vec<Witness>,
}

/// Computes all `d` successive minima of the lattice spanned by `basis`.
///
/// The basis is LLL-reduced first; all vectors within the radius of the
/// longest reduced basis vector are enumerated (that ball always contains a
/// full flag), sorted by norm, and a maximal independent chain is extracted
/// greedily. Independence uses a relative pivot threshold of `1e-8`.
pub fn successive_minima(basis: &[Vec<f64>], budget: u64) -> Result<Minima, LatticeError> {
    let d = basis.len();
    if d == 0 || d > MAX_DIM {
        return Err(LatticeError::Dimension(format!(
            "dimension {d} outside [1, {MAX_DIM}]"
        )));
    }
    if basis.iter().any(|v| v.len() != d) {
        return Err(LatticeError::BadBasis("basis is not square".into()));
    }
    if d <= 2 {
        // In rank <= 2 the Gauss-reduced basis achieves the minima exactly;
        // no enumeration, so arbitrarily skewed lattices stay cheap.
        return exact_low_rank(basis);
    }
    let reduced = lll_reduce(basis, 0.99);
    let radius = reduced
        .basis
        .iter()
        .map(|v| norm(v))
        .fold(0.0_f64, f64::max);
    if !(radius.is_finite() && radius > 0.0) {
        return Err(LatticeError::BadBasis("degenerate reduced basis".into()));
    }
    let mut points = enumerate_ball(&reduced.basis, radius * radius * (1.0 + 1e-9), budget)?;
    points.sort_by(|a, b| a.norm_sq.partial_cmp(&b.norm_sq).unwrap());

    let mut tracker = RankTracker::new(1e-8);
    let mut values = Vec::with_capacity(d);
    let mut witnesses = Vec::with_capacity(d);
    for p in &points {
        if witnesses.len() == d {
            break;
        }
        let vector: Vec<f64> = (0..d)
            .map(|c| {
                p.coeffs
                    .iter()
                    .zip(&reduced.basis)
                    .map(|(x, b)| *x as f64 * b[c])
                    .sum()
            })
            .collect();
        if tracker.try_add(&vector) {
            // Map coefficients back through the reduction transform.
            let coeffs: Vec<i64> = (0..d)
                .map(|j| {
                    p.coeffs
                        .iter()
                        .zip(&reduced.transform)
                        .map(|(x, row)| x * row[j])
                        .sum()
                })
                .collect();
            values.push(p.norm_sq.sqrt());
            witnesses.push(Witness {
                coeffs,
                vector,
                norm: p.norm_sq.sqrt(),
            });
        }
    }
    if witnesses.len() < d {
        // The enumeration ball provably contains d independent vectors (the
        // reduced basis itself); short counts indicate numerics went wrong.
        return Err(LatticeError::BadBasis(
            "failed to extract a full independent flag".into(),
        ));
    }
    Ok(Minima { values, witnesses })
}

/// Rank 1 and 2: reduced basis vectors are the witnesses.
fn exact_low_rank(basis: &[Vec<f64>]) -> Result<Minima, LatticeError> {
    let d = basis.len();
    let reduced = if d == 1 {
        super::reduce::Reduced {
            basis: basis.to_vec(),
            transform: vec![vec![1]],
        }
    } else {
        gauss_reduce_2d(basis)
    };
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        norm(&reduced.basis[i])
            .partial_cmp(&norm(&reduced.basis[j]))
            .unwrap()
    });
    let mut values = Vec::with_capacity(d);
    let mut witnesses = Vec::with_capacity(d);
    for &i in &order {
        let nrm = norm(&reduced.basis[i]);
        if !(nrm.is_finite() && nrm > 0.0) {
            return Err(LatticeError::BadBasis("degenerate reduced basis".into()));
        }
        values.push(nrm);
        witnesses.push(Witness {
            coeffs: reduced.transform[i].clone(),
            vector: reduced.basis[i].clone(),
            norm: nrm,
        });
    }
    Ok(Minima { values, witnesses })
}

/// Convenience wrapper with the default budget.
pub fn successive_minima_default(basis: &[Vec<f64>]) -> Result<Minima, LatticeError> {
    successive_minima(basis, DEFAULT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_lattice() {
        let basis = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let m = successive_minima(&basis, 100_000).unwrap();
        assert!((m.values[0] - 1.0).abs() < 1e-12);
        assert!((m.values[1] - 1.0).abs() < 1e-12);
        // Witnesses are +-e1, +-e2 up to sign.
        for w in &m.witnesses {
            assert!((norm(&w.vector) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_lattice() {
        let basis = vec![vec![0.5, 0.0], vec![0.0, 2.0]];
        let m = successive_minima(&basis, 100_000).unwrap();
        assert!((m.values[0] - 0.5).abs() < 1e-12);
        assert!((m.values[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn skewed_basis_of_z2() {
        // Unimodular integer transform of Z^2 keeps minima at 1.
        let basis = vec![vec![997.0, 1.0], vec![996.0, 1.0]];
        let m = successive_minima(&basis, 1_000_000).unwrap();
        assert!((m.values[0] - 1.0).abs() < 1e-9, "{:?}", m.values);
        assert!((m.values[1] - 1.0).abs() < 1e-9);
        // Witness coefficients must rebuild the witness vector exactly.
        for w in &m.witnesses {
            for c in 0..2 {
                let rebuilt: f64 = w
                    .coeffs
                    .iter()
                    .zip(&basis)
                    .map(|(x, b)| *x as f64 * b[c])
                    .sum();
                assert!((rebuilt - w.vector[c]).abs() < 1e-8);
            }
        }
    }
}
