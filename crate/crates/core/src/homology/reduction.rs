//! Z/2 column reduction of boundary matrices.
//!
//! Rows are local indices within one dimension, ordered by filtration
//! position, so the pivot ("low") of a column is its largest row index.
//! Blocks with at most [`DENSE_ROW_LIMIT`] rows store columns as one `u64`
//! bitmask; larger blocks use sorted index lists.

use std::collections::HashMap;

pub const DENSE_ROW_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Column {
    Dense(u64),
    Sparse(Vec<u32>),
}

impl Column {
    /// Column with the given (unsorted, distinct) row indices.
    pub fn from_rows(mut rows: Vec<u32>, n_rows: usize) -> Column {
        if n_rows <= DENSE_ROW_LIMIT {
            Column::Dense(rows.iter().fold(0u64, |m, &r| m | 1u64 << r))
        } else {
            rows.sort_unstable();
            Column::Sparse(rows)
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Column::Dense(m) => *m == 0,
            Column::Sparse(v) => v.is_empty(),
        }
    }

    pub fn low(&self) -> Option<u32> {
        match self {
            Column::Dense(0) => None,
            Column::Dense(m) => Some(63 - m.leading_zeros()),
            Column::Sparse(v) => v.last().copied(),
        }
    }

    /// `self += other` over Z/2.
    pub fn add(&mut self, other: &Column) {
        match (self, other) {
            (Column::Dense(a), Column::Dense(b)) => *a ^= b,
            (Column::Sparse(a), Column::Sparse(b)) => *a = symmetric_difference(a, b),
            _ => panic!("mixed column representations in one block"),
        }
    }

    pub fn clear(&mut self) {
        match self {
            Column::Dense(m) => *m = 0,
            Column::Sparse(v) => v.clear(),
        }
    }
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Reduces one boundary block in place (left to right) and returns, for
/// every column, its final pivot. Columns listed in `cleared` are known to
/// reduce to zero and are skipped.
pub fn reduce_block(columns: &mut [Column], cleared: &[bool]) -> Vec<Option<u32>> {
    let mut owner: HashMap<u32, usize> = HashMap::new();
    let mut lows = vec![None; columns.len()];
    for j in 0..columns.len() {
        if cleared.get(j).copied().unwrap_or(false) {
            columns[j].clear();
            continue;
        }
        while let Some(low) = columns[j].low() {
            match owner.get(&low) {
                Some(&k) => {
                    let (left, right) = columns.split_at_mut(j);
                    right[0].add(&left[k]);
                }
                None => {
                    owner.insert(low, j);
                    lows[j] = Some(low);
                    break;
                }
            }
        }
    }
    lows
}

/// Rank over Z/2 of the matrix whose columns are given as row lists.
pub fn rank(columns: Vec<Vec<u32>>, n_rows: usize) -> usize {
    let mut cols: Vec<Column> = columns
        .into_iter()
        .map(|c| Column::from_rows(c, n_rows))
        .collect();
    reduce_block(&mut cols, &[])
        .iter()
        .filter(|l| l.is_some())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_sparse_agree() {
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]];
        assert_eq!(rank(cols.clone(), 4), 3);
        let shifted: Vec<Vec<u32>> = cols
            .iter()
            .map(|c| c.iter().map(|r| r + 100).collect())
            .collect();
        assert_eq!(rank(shifted, 200), 3);
    }

    #[test]
    fn cleared_columns_are_zeroed() {
        let mut cols = vec![
            Column::from_rows(vec![0, 1], 4),
            Column::from_rows(vec![1, 2], 4),
        ];
        let lows = reduce_block(&mut cols, &[false, true]);
        assert_eq!(lows, vec![Some(1), None]);
        assert!(cols[1].is_empty());
    }

    #[test]
    fn symmetric_difference_merges() {
        assert_eq!(
            symmetric_difference(&[1, 3, 5], &[2, 3, 6]),
            vec![1, 2, 5, 6]
        );
    }
}
