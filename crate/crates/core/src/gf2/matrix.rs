//! Sparse binary parity-check matrices.
//!
//! A matrix is stored as two incidence lists that mirror each other: for
//! every check the sorted bit indices it touches, and for every bit the
//! sorted check indices touching it.

use crate::error::{Error, Result};

/// Sparse M x N parity-check matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n_checks: usize,
    n_bits: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from per-check support lists.
    ///
    /// Entries may arrive unsorted; they are sorted here. Every check must
    /// touch at least one bit, every bit at least one check, and no check
    /// may list the same bit twice.
    ///
    /// # Errors
    ///
    /// `EmptyMatrix`, `EmptyCheck`, `UncoveredBit`, `DuplicateIncidence`,
    /// or `IndexOutOfRange` when the support lists violate the above.
    pub fn from_rows(n_bits: usize, mut rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.is_empty() || n_bits == 0 {
            return Err(Error::EmptyMatrix);
        }
        let n_checks = rows.len();
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n_bits];
        for (m, row) in rows.iter_mut().enumerate() {
            if row.is_empty() {
                return Err(Error::EmptyCheck { check: m });
            }
            row.sort_unstable();
            for pair in row.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::DuplicateIncidence {
                        check: m,
                        bit: pair[0],
                    });
                }
            }
            for &j in row.iter() {
                if j >= n_bits {
                    return Err(Error::IndexOutOfRange {
                        what: "bit",
                        got: j,
                        limit: n_bits,
                    });
                }
                cols[j].push(m);
            }
        }
        if let Some(j) = cols.iter().position(Vec::is_empty) {
            return Err(Error::UncoveredBit { bit: j });
        }
        Ok(Self {
            n_checks,
            n_bits,
            rows,
            cols,
        })
    }

    /// Builds a matrix from dense 0/1 rows.
    ///
    /// # Errors
    ///
    /// `RaggedRows` when rows differ in length, `InvalidBit` for entries
    /// other than 0 or 1, plus the structural errors of [`Self::from_rows`].
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let n_bits = rows[0].len();
        let mut support = Vec::with_capacity(rows.len());
        for (m, row) in rows.iter().enumerate() {
            if row.len() != n_bits {
                return Err(Error::RaggedRows {
                    row: m,
                    expected: n_bits,
                    got: row.len(),
                });
            }
            let mut idx = Vec::new();
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => idx.push(j),
                    other => return Err(Error::InvalidBit { pos: j, value: other }),
                }
            }
            support.push(idx);
        }
        Self::from_rows(n_bits, support)
    }

    pub fn n_checks(&self) -> usize {
        self.n_checks
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    /// Sorted bit indices of check `m`.
    pub fn row(&self, m: usize) -> &[usize] {
        &self.rows[m]
    }

    /// Sorted check indices incident to bit `j`.
    pub fn col(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Number of ones in the matrix.
    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Rate implied by the matrix shape, (N - M) / N.
    ///
    /// This counts rows, not rank: a matrix with dependent rows supports
    /// more message bits than the shape suggests (see
    /// [`GeneratorSpec::rate`](crate::gf2::GeneratorSpec::rate)).
    pub fn design_rate(&self) -> f64 {
        (self.n_bits as f64 - self.n_checks as f64) / self.n_bits as f64
    }

    /// Computes the syndrome H*c over GF(2), one bit per check.
    ///
    /// # Errors
    ///
    /// `LengthMismatch` when `bits` is not N long, `InvalidBit` for
    /// entries other than 0 or 1.
    pub fn syndrome(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.n_bits {
            return Err(Error::LengthMismatch {
                what: "codeword",
                expected: self.n_bits,
                got: bits.len(),
            });
        }
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidBit {
                pos,
                value: bits[pos],
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &j| acc ^ bits[j]))
            .collect())
    }

    /// True when every check is satisfied.
    pub fn syndrome_is_zero(&self, bits: &[u8]) -> Result<bool> {
        Ok(self.syndrome(bits)?.iter().all(|&s| s == 0))
    }

    /// Dense 0/1 expansion, mostly for tests and small-code display.
    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.n_bits]; self.n_checks];
        for (m, row) in self.rows.iter().enumerate() {
            for &j in row {
                out[m][j] = 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::example_4x8;

    #[test]
    fn from_dense_builds_consistent_incidence_lists() {
        let h = ParityCheckMatrix::from_dense(&example_4x8()).unwrap();
        assert_eq!(h.n_checks(), 4);
        assert_eq!(h.n_bits(), 8);
        assert_eq!(h.count_ones(), 16);
        assert_eq!(h.design_rate(), 0.5);
        // transpose consistency both ways
        for m in 0..h.n_checks() {
            for &j in h.row(m) {
                assert!(h.col(j).contains(&m));
            }
        }
        for j in 0..h.n_bits() {
            for &m in h.col(j) {
                assert!(h.row(m).contains(&j));
            }
        }
    }

    #[test]
    fn from_dense_rejects_bad_shapes() {
        assert!(matches!(
            ParityCheckMatrix::from_dense(&[]),
            Err(Error::EmptyMatrix)
        ));
        assert!(matches!(
            ParityCheckMatrix::from_dense(&[vec![1, 0], vec![1]]),
            Err(Error::RaggedRows { row: 1, .. })
        ));
        assert!(matches!(
            ParityCheckMatrix::from_dense(&[vec![0, 0], vec![1, 1]]),
            Err(Error::EmptyCheck { check: 0 })
        ));
        // column 1 never used
        assert!(matches!(
            ParityCheckMatrix::from_dense(&[vec![1, 0, 1], vec![1, 0, 1]]),
            Err(Error::UncoveredBit { bit: 1 })
        ));
        assert!(matches!(
            ParityCheckMatrix::from_dense(&[vec![2, 1], vec![1, 1]]),
            Err(Error::InvalidBit { value: 2, .. })
        ));
    }

    #[test]
    fn syndrome_of_single_one_selects_its_column() {
        let h = ParityCheckMatrix::from_dense(&example_4x8()).unwrap();
        let mut word = vec![0u8; 8];
        word[0] = 1;
        // bit 0 is checked by rows 1 and 3
        assert_eq!(h.syndrome(&word).unwrap(), vec![0, 1, 0, 1]);
        assert_eq!(h.syndrome(&[0u8; 8]).unwrap(), vec![0; 4]);
    }

    #[test]
    fn syndrome_validates_input() {
        let h = ParityCheckMatrix::from_dense(&example_4x8()).unwrap();
        assert!(matches!(
            h.syndrome(&[0u8; 7]),
            Err(Error::LengthMismatch { expected: 8, got: 7, .. })
        ));
        let mut word = vec![0u8; 8];
        word[3] = 9;
        assert!(matches!(h.syndrome(&word), Err(Error::InvalidBit { pos: 3, value: 9 })));
    }
}
