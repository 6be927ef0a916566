//! Tanner-graph view of a parity-check matrix.
//!
//! Edges are numbered row-major: the edges of check 0 come first, in
//! ascending bit order, then the edges of check 1, and so on. The layered
//! decoder keys its per-edge message store by this numbering.

use std::ops::Range;

use crate::gf2::ParityCheckMatrix;

/// Bipartite check/variable adjacency with a stable edge numbering.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    n_checks: usize,
    n_bits: usize,
    /// Edge ranges per check; check m owns edges `row_start[m]..row_start[m+1]`.
    row_start: Vec<usize>,
    /// Bit index per edge, row-major.
    edge_bit: Vec<usize>,
    /// Per bit: (check, edge) pairs, ascending by check.
    bit_edges: Vec<Vec<(usize, usize)>>,
    max_check_degree: usize,
}

impl TannerGraph {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let n_checks = h.n_checks();
        let n_bits = h.n_bits();
        let mut row_start = Vec::with_capacity(n_checks + 1);
        let mut edge_bit = Vec::with_capacity(h.count_ones());
        let mut bit_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_bits];
        let mut max_check_degree = 0;
        row_start.push(0);
        for m in 0..n_checks {
            let row = h.row(m);
            max_check_degree = max_check_degree.max(row.len());
            for &j in row {
                bit_edges[j].push((m, edge_bit.len()));
                edge_bit.push(j);
            }
            row_start.push(edge_bit.len());
        }
        Self {
            n_checks,
            n_bits,
            row_start,
            edge_bit,
            bit_edges,
            max_check_degree,
        }
    }

    pub fn n_checks(&self) -> usize {
        self.n_checks
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn n_edges(&self) -> usize {
        self.edge_bit.len()
    }

    pub fn max_check_degree(&self) -> usize {
        self.max_check_degree
    }

    pub fn check_degree(&self, m: usize) -> usize {
        self.row_start[m + 1] - self.row_start[m]
    }

    /// Edge ids owned by check `m`.
    pub fn check_edges(&self, m: usize) -> Range<usize> {
        self.row_start[m]..self.row_start[m + 1]
    }

    /// Bit indices adjacent to check `m`, ascending.
    pub fn check_bits(&self, m: usize) -> &[usize] {
        &self.edge_bit[self.row_start[m]..self.row_start[m + 1]]
    }

    /// (check, edge) pairs adjacent to bit `j`, ascending by check.
    pub fn bit_edges(&self, j: usize) -> &[(usize, usize)] {
        &self.bit_edges[j]
    }

    /// Edge id for the incidence (check m, bit j), if present.
    pub fn edge_index(&self, m: usize, j: usize) -> Option<usize> {
        let bits = self.check_bits(m);
        bits.binary_search(&j).ok().map(|k| self.row_start[m] + k)
    }

    /// True when the hard-decision word satisfies every check.
    pub fn syndrome_is_zero(&self, bits: &[u8]) -> bool {
        (0..self.n_checks).all(|m| {
            self.check_bits(m)
                .iter()
                .fold(0u8, |acc, &j| acc ^ bits[j])
                == 0
        })
    }
}
