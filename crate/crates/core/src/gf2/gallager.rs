//! Random regular LDPC construction.
//!
//! Builds an (n, col_weight, row_weight)-regular parity-check matrix by the
//! socket-matching construction: every bit exposes `col_weight` sockets,
//! every check `row_weight`, and a random permutation pairs them up. A
//! permutation can wire the same bit twice into one check; offending sockets
//! are resampled (swapped against random partners) until the graph is
//! simple, which keeps both degree sequences exact.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::ParityCheckMatrix;

/// Upper bound on duplicate-repair passes before giving up.
const REPAIR_PASS_BUDGET: usize = 10_000;

/// Draws a random (col_weight, row_weight)-regular parity-check matrix with
/// `n` columns and `n * col_weight / row_weight` rows. Deterministic for a
/// fixed seed.
///
/// # Errors
///
/// `WeightDivisibility` when `n * col_weight` is not a multiple of
/// `row_weight`, `ColWeightTooSmall` for col_weight < 2, and
/// `RetryBudgetExhausted` if duplicate repair fails to converge (not
/// observed in practice for feasible parameters).
pub fn gallager_regular(
    n: usize,
    col_weight: usize,
    row_weight: usize,
    seed: u64,
) -> Result<ParityCheckMatrix> {
    if col_weight < 2 {
        return Err(Error::ColWeightTooSmall(col_weight));
    }
    if n == 0 || row_weight == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !(n * col_weight).is_multiple_of(row_weight) {
        return Err(Error::WeightDivisibility {
            n,
            col_weight,
            row_weight,
        });
    }
    let n_edges = n * col_weight;
    let n_checks = n_edges / row_weight;
    if row_weight > n {
        // a simple graph cannot repeat a bit within a check
        return Err(Error::InvalidConfig(format!(
            "row_weight {row_weight} exceeds n = {n}; checks would need duplicate bits"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // sockets[p] = bit owning socket p; check p / row_weight consumes it
    let mut sockets: Vec<usize> = (0..n_edges).map(|p| p / col_weight).collect();
    sockets.shuffle(&mut rng);

    let mut seen = vec![usize::MAX; n];
    for pass in 0..REPAIR_PASS_BUDGET {
        let mut offenders = Vec::new();
        for m in 0..n_checks {
            let base = m * row_weight;
            for (p, &bit) in sockets.iter().enumerate().skip(base).take(row_weight) {
                if seen[bit] == m {
                    offenders.push(p);
                } else {
                    seen[bit] = m;
                }
            }
        }
        if offenders.is_empty() {
            let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n_checks);
            for m in 0..n_checks {
                let base = m * row_weight;
                rows.push(sockets[base..base + row_weight].to_vec());
            }
            return ParityCheckMatrix::from_rows(n, rows);
        }
        for p in offenders {
            let q = rng.random_range(0..n_edges);
            sockets.swap(p, q);
        }
        let _ = pass;
        seen.fill(usize::MAX);
    }
    Err(Error::RetryBudgetExhausted(REPAIR_PASS_BUDGET))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_regular(h: &ParityCheckMatrix, col_weight: usize, row_weight: usize) {
        for m in 0..h.n_checks() {
            assert_eq!(h.row(m).len(), row_weight, "check {m} degree");
        }
        for j in 0..h.n_bits() {
            assert_eq!(h.col(j).len(), col_weight, "bit {j} degree");
        }
    }

    #[test]
    fn small_code_is_exactly_regular() {
        let h = gallager_regular(8, 2, 4, 1).unwrap();
        assert_eq!(h.n_checks(), 4);
        assert_eq!(h.n_bits(), 8);
        assert_regular(&h, 2, 4);
    }

    #[test]
    fn rate_half_and_rate_three_quarter_shapes() {
        let h = gallager_regular(1024, 3, 6, 7).unwrap();
        assert_eq!((h.n_checks(), h.n_bits()), (512, 1024));
        assert_regular(&h, 3, 6);
        assert_eq!(h.design_rate(), 0.5);

        let h = gallager_regular(1024, 3, 12, 7).unwrap();
        assert_eq!((h.n_checks(), h.n_bits()), (256, 1024));
        assert_regular(&h, 3, 12);
        assert_eq!(h.design_rate(), 0.75);
    }

    #[test]
    fn same_seed_same_matrix_different_seed_differs() {
        let a = gallager_regular(256, 3, 6, 42).unwrap();
        let b = gallager_regular(256, 3, 6, 42).unwrap();
        let c = gallager_regular(256, 3, 6, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_infeasible_parameters() {
        assert!(matches!(
            gallager_regular(1023, 3, 6, 1),
            Err(Error::WeightDivisibility { .. })
        ));
        assert!(matches!(
            gallager_regular(8, 1, 4, 1),
            Err(Error::ColWeightTooSmall(1))
        ));
        assert!(matches!(
            gallager_regular(4, 2, 8, 1),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn tight_parameters_still_produce_simple_graphs() {
        // n == row_weight forces every check to touch every bit exactly once
        let h = gallager_regular(4, 2, 4, 5).unwrap();
        assert_regular(&h, 2, 4);
        for m in 0..h.n_checks() {
            assert_eq!(h.row(m), &[0, 1, 2, 3]);
        }
    }
}
