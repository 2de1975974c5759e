//! Configuration counting over packed columns.
//!
//! Counts are the sufficient statistics for the per-variable logistic models: the
//! likelihood of a blanket only depends on how many rows fall into each joint
//! configuration of the target and its conditioners.

use super::dataset::BinaryDataset;
use crate::error::{Error, Result};

/// Largest conditioning set for which a full table is materialized.
pub const MAX_TABLE_BLANKET: usize = 25;

/// Above this many conditioners, grouped counts are gathered by scanning rows
/// instead of splitting bit masks.
pub const STREAMING_THRESHOLD: usize = 12;

/// Full contingency table of `(x_j, x_S)`.
///
/// Index encoding: bit 0 is `x_j`, bit `k` (1-based) is the `k`-th smallest member of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub target: usize,
    pub conditioners: Vec<usize>,
    pub counts: Vec<u64>,
}

impl ContingencyTable {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, x_target: bool, x_conditioners: u32) -> u64 {
        self.counts[((x_conditioners as usize) << 1) | x_target as usize]
    }
}

/// Counts for one occupied configuration of the conditioners.
///
/// `config` bit `k` holds the value of the `k`-th conditioner (0-based, ascending order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellCounts {
    pub config: u32,
    pub zeros: u32,
    pub ones: u32,
}

impl CellCounts {
    pub fn total(&self) -> u32 {
        self.zeros + self.ones
    }
}

/// Checks that `blanket` is strictly increasing, in range, and excludes `target`.
pub fn validate_blanket(n_cols: usize, target: usize, blanket: &[usize]) -> Result<()> {
    if target >= n_cols {
        return Err(Error::Index { index: target, len: n_cols });
    }
    for (k, &v) in blanket.iter().enumerate() {
        if v >= n_cols {
            return Err(Error::Index { index: v, len: n_cols });
        }
        if v == target {
            return Err(Error::InvalidBlanket { target, msg: format!("contains the target {v}") });
        }
        if k > 0 && blanket[k - 1] >= v {
            return Err(Error::InvalidBlanket { target, msg: "members must be distinct and sorted ascending".into() });
        }
    }
    Ok(())
}

/// Materializes the full `2^(|S|+1)` table for target `j` and conditioners `s`.
pub fn count_configurations(data: &BinaryDataset, j: usize, s: &[usize]) -> Result<ContingencyTable> {
    if s.len() > MAX_TABLE_BLANKET {
        return Err(Error::BlanketTooLarge { size: s.len(), cap: MAX_TABLE_BLANKET });
    }
    let cells = grouped_counts(data, j, s)?;
    let mut counts = vec![0u64; 1 << (s.len() + 1)];
    for c in cells {
        let base = (c.config as usize) << 1;
        counts[base] = c.zeros as u64;
        counts[base | 1] = c.ones as u64;
    }
    Ok(ContingencyTable { target: j, conditioners: s.to_vec(), counts })
}

/// Occupied cells of the `(x_j, x_S)` table, sorted by `config`.
pub fn grouped_counts(data: &BinaryDataset, j: usize, s: &[usize]) -> Result<Vec<CellCounts>> {
    validate_blanket(data.n_cols(), j, s)?;
    if s.len() > MAX_TABLE_BLANKET {
        return Err(Error::BlanketTooLarge { size: s.len(), cap: MAX_TABLE_BLANKET });
    }
    if s.len() > STREAMING_THRESHOLD {
        Ok(stream_rows(data, j, s))
    } else {
        Ok(split_masks(data, j, s))
    }
}

/// Depth-first refinement of the row mask by each conditioner, highest member first
/// so that leaves come out in ascending `config` order. Empty branches are pruned.
fn split_masks(data: &BinaryDataset, j: usize, s: &[usize]) -> Vec<CellCounts> {
    let w = data.words_per_col();
    let k = s.len();
    let mut scratch = vec![0u64; (k + 1) * w];
    scratch[..w].copy_from_slice(&data.row_mask());
    let mut out = Vec::new();
    split_level(data, data.column(j), s, 0, 0, &mut scratch, w, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn split_level(
    data: &BinaryDataset,
    target: &[u64],
    s: &[usize],
    depth: usize,
    config: u32,
    scratch: &mut [u64],
    w: usize,
    out: &mut Vec<CellCounts>,
) {
    let k = s.len();
    if depth == k {
        let mask = &scratch[depth * w..(depth + 1) * w];
        let mut total = 0u32;
        let mut ones = 0u32;
        for (m, t) in mask.iter().zip(target) {
            total += m.count_ones();
            ones += (m & t).count_ones();
        }
        if total > 0 {
            out.push(CellCounts { config, zeros: total - ones, ones });
        }
        return;
    }
    let bit = k - 1 - depth;
    let col = data.column(s[bit]);
    for value in [false, true] {
        let occupied = {
            let (head, tail) = scratch.split_at_mut((depth + 1) * w);
            let parent = &head[depth * w..];
            let mut any = 0u64;
            for ((c, p), x) in tail[..w].iter_mut().zip(parent).zip(col) {
                *c = if value { p & x } else { p & !x };
                any |= *c;
            }
            any != 0
        };
        if occupied {
            let next = if value { config | (1 << bit) } else { config };
            split_level(data, target, s, depth + 1, next, scratch, w, out);
        }
    }
}

fn stream_rows(data: &BinaryDataset, j: usize, s: &[usize]) -> Vec<CellCounts> {
    let mut cells = std::collections::HashMap::<u32, (u32, u32)>::new();
    for i in 0..data.n_rows() {
        let mut config = 0u32;
        for (bit, &v) in s.iter().enumerate() {
            config |= (data.get(i, v) as u32) << bit;
        }
        let e = cells.entry(config).or_default();
        if data.get(i, j) {
            e.1 += 1;
        } else {
            e.0 += 1;
        }
    }
    let mut out: Vec<CellCounts> =
        cells.into_iter().map(|(config, (zeros, ones))| CellCounts { config, zeros, ones }).collect();
    out.sort_unstable_by_key(|c| c.config);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_rows() -> BinaryDataset {
        BinaryDataset::from_rows(&[[0u8, 0], [0, 1], [1, 1], [1, 1]]).unwrap()
    }

    #[test]
    fn small_table_by_hand() {
        let t = count_configurations(&four_rows(), 0, &[1]).unwrap();
        // index = (x1 << 1) | x0
        assert_eq!(t.counts, vec![1, 0, 1, 2]);
        assert_eq!(t.count(false, 0), 1);
        assert_eq!(t.count(true, 0), 0);
        assert_eq!(t.count(false, 1), 1);
        assert_eq!(t.count(true, 1), 2);
        assert_eq!(t.total(), 4);
    }

    #[test]
    fn empty_conditioners_is_marginal() {
        let t = count_configurations(&four_rows(), 0, &[]).unwrap();
        assert_eq!(t.counts, vec![2, 2]);
        let t = count_configurations(&four_rows(), 1, &[]).unwrap();
        assert_eq!(t.counts, vec![1, 3]);
    }

    #[test]
    fn blanket_errors() {
        let data = four_rows();
        assert!(matches!(count_configurations(&data, 0, &[0]), Err(Error::InvalidBlanket { .. })));
        assert!(matches!(count_configurations(&data, 0, &[5]), Err(Error::Index { .. })));
        assert!(matches!(count_configurations(&data, 7, &[]), Err(Error::Index { .. })));
        let big: Vec<usize> = (1..=26).collect();
        assert!(matches!(count_configurations(&data, 0, &big), Err(Error::BlanketTooLarge { size: 26, .. })));
    }

    #[test]
    fn unsorted_blanket_rejected() {
        let data = BinaryDataset::from_fn(5, 4, |i, j| (i + j) % 2 == 0).unwrap();
        assert!(matches!(grouped_counts(&data, 0, &[3, 1]), Err(Error::InvalidBlanket { .. })));
        assert!(matches!(grouped_counts(&data, 0, &[1, 1]), Err(Error::InvalidBlanket { .. })));
    }

    #[test]
    fn streaming_matches_mask_splitting() {
        let d = 16;
        let data = BinaryDataset::from_fn(300, d, |i, j| (i * 7 + j * 13 + (i * j) % 5) % 3 == 0).unwrap();
        let s: Vec<usize> = (1..d).collect();
        assert!(s.len() > STREAMING_THRESHOLD);
        assert_eq!(stream_rows(&data, 0, &s), split_masks(&data, 0, &s));
        let cells = grouped_counts(&data, 0, &s).unwrap();
        assert_eq!(cells.iter().map(|c| c.total() as usize).sum::<usize>(), 300);
        assert!(cells.windows(2).all(|w| w[0].config < w[1].config));
    }
}
