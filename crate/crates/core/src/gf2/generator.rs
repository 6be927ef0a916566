//! Systematic generator derivation by GF(2) elimination.
//!
//! Reduction runs over bit-packed rows with column pivoting: pivot columns
//! carry parity bits, the remaining (free) columns carry message bits. Rank
//! deficiency is allowed; k = N - rank(H), so dependent checks buy extra
//! message bits rather than failing the derivation.

use crate::error::{Error, Result};
use crate::gf2::ParityCheckMatrix;

/// A codeword produced by [`GeneratorSpec::encode`]; satisfies H*c = 0 by
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    bits: Vec<u8>,
}

impl Codeword {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Systematic encoder for a parity-check matrix.
///
/// Message bit i lands in codeword column `message_columns()[i]`; parity
/// bit p lands in `parity_columns()[p]` and is the GF(2) inner product of
/// the message with row p of the parity dependence matrix.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    n_bits: usize,
    k: usize,
    parity_cols: Vec<usize>,
    message_cols: Vec<usize>,
    /// One row per parity bit: k message-bit coefficients, bit-packed.
    parity_rows: Vec<Vec<u64>>,
}

fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

impl GeneratorSpec {
    /// Derives a systematic generator from `h`.
    ///
    /// # Errors
    ///
    /// `ZeroRate` when H has full column rank, leaving no message bits.
    pub fn derive(h: &ParityCheckMatrix) -> Result<Self> {
        let n = h.n_bits();
        let m = h.n_checks();
        let words = n.div_ceil(64);
        let mut work: Vec<Vec<u64>> = vec![vec![0u64; words]; m];
        for (mi, row) in h.rows().iter().enumerate() {
            for &j in row {
                set_bit(&mut work[mi], j);
            }
        }

        // reduced row echelon form with free column pivoting
        let mut parity_cols = Vec::new();
        let mut rank = 0usize;
        for c in 0..n {
            let Some(pivot) = (rank..m).find(|&r| get_bit(&work[r], c)) else {
                continue;
            };
            work.swap(rank, pivot);
            let pivot_row = work[rank].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r != rank && get_bit(row, c) {
                    for (w, p) in row.iter_mut().zip(&pivot_row) {
                        *w ^= p;
                    }
                }
            }
            parity_cols.push(c);
            rank += 1;
            if rank == m {
                break;
            }
        }

        let k = n - rank;
        if k == 0 {
            return Err(Error::ZeroRate);
        }
        let mut is_parity = vec![false; n];
        for &c in &parity_cols {
            is_parity[c] = true;
        }
        let message_cols: Vec<usize> = (0..n).filter(|&c| !is_parity[c]).collect();

        let msg_words = k.div_ceil(64);
        let mut parity_rows = vec![vec![0u64; msg_words]; rank];
        for (p, packed) in parity_rows.iter_mut().enumerate() {
            for (i, &c) in message_cols.iter().enumerate() {
                if get_bit(&work[p], c) {
                    set_bit(packed, i);
                }
            }
        }

        Ok(Self {
            n_bits: n,
            k,
            parity_cols,
            message_cols,
            parity_rows,
        })
    }

    /// Message length k = N - rank(H).
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn rank(&self) -> usize {
        self.parity_cols.len()
    }

    /// True code rate k / N.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n_bits as f64
    }

    /// Codeword columns holding message bits, ascending.
    pub fn message_columns(&self) -> &[usize] {
        &self.message_cols
    }

    /// Codeword columns holding parity bits, ascending.
    pub fn parity_columns(&self) -> &[usize] {
        &self.parity_cols
    }

    /// Permutation from systematic order (parity block, then message block)
    /// back to codeword column indices.
    pub fn column_permutation(&self) -> Vec<usize> {
        let mut perm = Vec::with_capacity(self.n_bits);
        perm.extend_from_slice(&self.parity_cols);
        perm.extend_from_slice(&self.message_cols);
        perm
    }

    /// Dense k x (N - k) parity dependence matrix; entry (i, p) is the
    /// coefficient of message bit i in parity bit p.
    pub fn parity_dense(&self) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.rank()]; self.k];
        for (p, row) in self.parity_rows.iter().enumerate() {
            for (i, cell) in out.iter_mut().enumerate() {
                cell[p] = get_bit(row, i) as u8;
            }
        }
        out
    }

    /// Encodes a k-bit message into an N-bit codeword.
    ///
    /// # Errors
    ///
    /// `LengthMismatch` when the message is not k bits, `InvalidBit` for
    /// entries other than 0 or 1.
    pub fn encode(&self, message: &[u8]) -> Result<Codeword> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                what: "message",
                expected: self.k,
                got: message.len(),
            });
        }
        let mut packed = vec![0u64; self.k.div_ceil(64)];
        for (i, &b) in message.iter().enumerate() {
            match b {
                0 => {}
                1 => set_bit(&mut packed, i),
                other => return Err(Error::InvalidBit { pos: i, value: other }),
            }
        }
        let mut bits = vec![0u8; self.n_bits];
        for (i, &c) in self.message_cols.iter().enumerate() {
            bits[c] = message[i];
        }
        for (p, row) in self.parity_rows.iter().enumerate() {
            let ones: u32 = row
                .iter()
                .zip(&packed)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            bits[self.parity_cols[p]] = (ones & 1) as u8;
        }
        Ok(Codeword { bits })
    }

    /// Reads the message bits back out of an N-bit word, inverting
    /// [`Self::encode`] on valid codewords.
    ///
    /// # Errors
    ///
    /// `LengthMismatch` when the word is not N bits.
    pub fn extract_message(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.n_bits {
            return Err(Error::LengthMismatch {
                what: "codeword",
                expected: self.n_bits,
                got: bits.len(),
            });
        }
        Ok(self.message_cols.iter().map(|&c| bits[c]).collect())
    }
}

/// Convenience wrapper matching the operation name used elsewhere.
pub fn derive_generator(h: &ParityCheckMatrix) -> Result<GeneratorSpec> {
    GeneratorSpec::derive(h)
}
