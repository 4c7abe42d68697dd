//! Matrix shape `(m, n)` carried by every computation.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The pair `(m, n)` with `d = m + n`. `m` counts expanding flow directions
/// (matrix rows), `n` contracting ones (columns).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Malformed(format!(
                "dims require m >= 1 and n >= 1, got ({m}, {n})"
            )));
        }
        Ok(Dims { m, n })
    }

    /// Total dimension `d = m + n`.
    pub fn d(&self) -> usize {
        self.m + self.n
    }

    /// Product `mn`, the ambient dimension of the matrix space.
    pub fn mn(&self) -> usize {
        self.m * self.n
    }

    /// The transposed shape `(n, m)`; negating a template swaps to this.
    pub fn transpose(&self) -> Dims {
        Dims {
            m: self.n,
            n: self.m,
        }
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero() {
        assert!(Dims::new(0, 1).is_err());
        assert!(Dims::new(1, 0).is_err());
        let d = Dims::new(2, 3).unwrap();
        assert_eq!(d.d(), 5);
        assert_eq!(d.mn(), 6);
        assert_eq!(d.transpose(), Dims::new(3, 2).unwrap());
    }
}
