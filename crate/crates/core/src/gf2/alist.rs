//! alist interchange format.
//!
//! The text layout is the one most LDPC tools exchange: dimensions
//! `N M`, maximum column and row weights, the per-column weights, the
//! per-row weights, then 1-based adjacency lists column by column and row
//! by row. Writers disagree on zero-padding the adjacency lines to the
//! maximum weight; the parser here accepts both padded and unpadded input
//! and the writer emits unpadded lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::ParityCheckMatrix;

/// Serializes a matrix to alist text.
pub fn to_alist(h: &ParityCheckMatrix) -> String {
    let max_col = (0..h.n_bits()).map(|j| h.col(j).len()).max().unwrap_or(0);
    let max_row = (0..h.n_checks()).map(|m| h.row(m).len()).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n_bits(), h.n_checks());
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join((0..h.n_bits()).map(|j| h.col(j).len())));
    let _ = writeln!(out, "{}", join((0..h.n_checks()).map(|m| h.row(m).len())));
    for j in 0..h.n_bits() {
        let _ = writeln!(out, "{}", join(h.col(j).iter().map(|&m| m + 1)));
    }
    for m in 0..h.n_checks() {
        let _ = writeln!(out, "{}", join(h.row(m).iter().map(|&j| j + 1)));
    }
    out
}

fn join(values: impl Iterator<Item = usize>) -> String {
    let mut s = String::new();
    for (i, v) in values.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{v}");
    }
    s
}

/// Parses alist text into a matrix.
///
/// The column and row adjacency sections must describe the same matrix;
/// a mismatch is rejected rather than silently trusting one side.
///
/// # Errors
///
/// `AlistParse` for malformed text, plus the structural errors of
/// [`ParityCheckMatrix::from_rows`].
pub fn from_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let mut next_ints = |expect: &str| -> Result<Vec<usize>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::AlistParse(format!("missing {expect}")))?;
        line.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::AlistParse(format!("bad integer {tok:?} in {expect}")))
            })
            .collect()
    };

    let dims = next_ints("dimensions line")?;
    if dims.len() != 2 {
        return Err(Error::AlistParse("dimensions line must be `N M`".into()));
    }
    let (n_bits, n_checks) = (dims[0], dims[1]);
    if n_bits == 0 || n_checks == 0 {
        return Err(Error::EmptyMatrix);
    }
    let maxw = next_ints("max-weight line")?;
    if maxw.len() != 2 {
        return Err(Error::AlistParse("max-weight line must be two integers".into()));
    }
    let col_weights = next_ints("column weights")?;
    if col_weights.len() != n_bits {
        return Err(Error::AlistParse(format!(
            "expected {n_bits} column weights, got {}",
            col_weights.len()
        )));
    }
    let row_weights = next_ints("row weights")?;
    if row_weights.len() != n_checks {
        return Err(Error::AlistParse(format!(
            "expected {n_checks} row weights, got {}",
            row_weights.len()
        )));
    }

    let mut read_adjacency = |count: usize,
                              weights: &[usize],
                              max_index: usize,
                              what: &str|
     -> Result<Vec<Vec<usize>>> {
        let mut lists = Vec::with_capacity(count);
        for (i, &w) in weights.iter().enumerate().take(count) {
            let raw = next_ints(&format!("{what} {i}"))?;
            let entries: Vec<usize> = raw.iter().copied().filter(|&v| v != 0).collect();
            if entries.len() != w {
                return Err(Error::AlistParse(format!(
                    "{what} {i}: expected {w} nonzero entries, got {}",
                    entries.len()
                )));
            }
            let mut list = Vec::with_capacity(w);
            for v in entries {
                if v > max_index {
                    return Err(Error::AlistParse(format!(
                        "{what} {i}: index {v} exceeds {max_index}"
                    )));
                }
                list.push(v - 1);
            }
            lists.push(list);
        }
        Ok(lists)
    };

    let col_lists = read_adjacency(n_bits, &col_weights, n_checks, "column")?;
    let row_lists = read_adjacency(n_checks, &row_weights, n_bits, "row")?;

    let h = ParityCheckMatrix::from_rows(n_bits, row_lists)?;
    for (j, mut stated) in col_lists.into_iter().enumerate() {
        stated.sort_unstable();
        if h.col(j) != stated.as_slice() {
            return Err(Error::AlistParse(format!(
                "column {j} adjacency disagrees with the row section"
            )));
        }
    }
    Ok(h)
}
