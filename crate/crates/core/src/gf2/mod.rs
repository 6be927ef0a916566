//! Binary linear codes: parity-check matrices, Tanner graphs, systematic
//! generators, random regular construction, and alist serialization.

mod alist;
mod gallager;
mod generator;
mod matrix;
mod tanner;

pub use alist::{from_alist, to_alist};
pub use gallager::gallager_regular;
pub use generator::{derive_generator, Codeword, GeneratorSpec};
pub use matrix::ParityCheckMatrix;
pub use tanner::TannerGraph;

/// Small worked 4x8 example used across the test suite: every column has
/// weight 2, every row weight 4, and the rows sum to zero over GF(2), so
/// the matrix has rank 3 and the code carries 5 message bits.
pub fn example_4x8() -> Vec<Vec<u8>> {
    vec![
        vec![0, 1, 0, 1, 1, 0, 0, 1],
        vec![1, 1, 1, 0, 0, 1, 0, 0],
        vec![0, 0, 1, 0, 0, 1, 1, 1],
        vec![1, 0, 0, 1, 1, 0, 1, 0],
    ]
}
