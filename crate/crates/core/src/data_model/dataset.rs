use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// An immutable N×d matrix of binary observations stored column-wise as packed bits.
///
/// Bit `i % 64` of word `i / 64` in column `j` holds observation `x_{ij}`. Bits past
/// `n_rows` in the last word of every column are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryDataset {
    n_rows: usize,
    n_cols: usize,
    words_per_col: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for BinaryDataset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BinaryDataset").field("n_rows", &self.n_rows).field("n_cols", &self.n_cols).finish()
    }
}

impl BinaryDataset {
    /// Builds a dataset from row-major observations. Every value must be 0 or 1.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n_cols = rows[0].as_ref().len();
        let mut builder = DatasetBuilder::new(n_cols)?;
        for row in rows {
            builder.push_row(row.as_ref())?;
        }
        builder.finish()
    }

    /// Builds a dataset by evaluating `value(i, j)` for every cell.
    pub fn from_fn(n_rows: usize, n_cols: usize, value: impl Fn(usize, usize) -> bool) -> Result<Self> {
        check_shape(n_rows, n_cols)?;
        let words_per_col = n_rows.div_ceil(WORD_BITS);
        let mut bits = vec![0u64; words_per_col * n_cols];
        for j in 0..n_cols {
            let col = &mut bits[j * words_per_col..(j + 1) * words_per_col];
            for i in 0..n_rows {
                if value(i, j) {
                    col[i / WORD_BITS] |= 1 << (i % WORD_BITS);
                }
            }
        }
        Ok(Self { n_rows, n_cols, words_per_col, bits })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn words_per_col(&self) -> usize {
        self.words_per_col
    }

    /// Packed bits of column `j`.
    pub fn column(&self, j: usize) -> &[u64] {
        &self.bits[j * self.words_per_col..(j + 1) * self.words_per_col]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        (self.column(j)[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn row(&self, i: usize) -> Vec<u8> {
        (0..self.n_cols).map(|j| self.get(i, j) as u8).collect()
    }

    /// Number of ones in column `j`.
    pub fn ones(&self, j: usize) -> usize {
        self.column(j).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Word mask with one bit set for every valid row.
    pub fn row_mask(&self) -> Vec<u64> {
        let mut mask = vec![u64::MAX; self.words_per_col];
        let tail = self.n_rows % WORD_BITS;
        if tail != 0 {
            if let Some(last) = mask.last_mut() {
                *last = (1u64 << tail) - 1;
            }
        }
        mask
    }

    /// Returns a copy whose row `i` is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n_rows {
            return Err(Error::Shape(format!("permutation of length {} for {} rows", perm.len(), self.n_rows)));
        }
        Self::from_fn(self.n_rows, self.n_cols, |i, j| self.get(perm[i], j))
    }

    /// Keeps only the first `n` rows.
    pub fn head(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n_rows {
            return Err(Error::Shape(format!("cannot take {n} of {} rows", self.n_rows)));
        }
        Self::from_fn(n, self.n_cols, |i, j| self.get(i, j))
    }
}

fn check_shape(n_rows: usize, n_cols: usize) -> Result<()> {
    if n_rows == 0 {
        return Err(Error::EmptyInput);
    }
    if n_cols < 2 {
        return Err(Error::Shape(format!("need at least 2 variables, got {n_cols}")));
    }
    if n_rows > u32::MAX as usize {
        return Err(Error::Shape(format!("too many rows: {n_rows}")));
    }
    Ok(())
}

/// Row-at-a-time construction, used by the parser and the Gibbs sampler.
pub struct DatasetBuilder {
    n_cols: usize,
    n_rows: usize,
    // Column-major, grown one word per column every 64 rows.
    cols: Vec<Vec<u64>>,
}

impl DatasetBuilder {
    pub fn new(n_cols: usize) -> Result<Self> {
        if n_cols < 2 {
            return Err(Error::Shape(format!("need at least 2 variables, got {n_cols}")));
        }
        Ok(Self { n_cols, n_rows: 0, cols: vec![Vec::new(); n_cols] })
    }

    pub fn with_capacity(n_cols: usize, n_rows: usize) -> Result<Self> {
        let mut b = Self::new(n_cols)?;
        for col in &mut b.cols {
            col.reserve(n_rows.div_ceil(WORD_BITS));
        }
        Ok(b)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn push_row(&mut self, row: &[u8]) -> Result<()> {
        if row.len() != self.n_cols {
            return Err(Error::Shape(format!(
                "row {} has {} values, expected {}",
                self.n_rows + 1,
                row.len(),
                self.n_cols
            )));
        }
        let (word, bit) = (self.n_rows / WORD_BITS, self.n_rows % WORD_BITS);
        for (j, &v) in row.iter().enumerate() {
            if v > 1 {
                return Err(Error::Parse { row: self.n_rows + 1, col: j + 1, token: v.to_string() });
            }
            let col = &mut self.cols[j];
            if bit == 0 {
                col.push(0);
            }
            col[word] |= (v as u64) << bit;
        }
        self.n_rows += 1;
        Ok(())
    }

    pub fn finish(self) -> Result<BinaryDataset> {
        check_shape(self.n_rows, self.n_cols)?;
        let words_per_col = self.n_rows.div_ceil(WORD_BITS);
        let bits = self.cols.into_iter().flatten().collect();
        Ok(BinaryDataset { n_rows: self.n_rows, n_cols: self.n_cols, words_per_col, bits })
    }
}
