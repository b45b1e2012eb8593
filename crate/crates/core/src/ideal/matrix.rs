//! Exact row reduction over prime fields.
//!
//! Everything here reduces to the unique reduced row echelon form, so the
//! outputs (rank, pivot columns, kernel basis, particular solutions) are
//! canonical: they depend only on the row space of the input, never on row
//! order or on which internal engine ran. Two engines share the contract —
//! a general residue engine for odd primes and a bit-packed engine for
//! modulus two, where rows become `u64` words and elimination is XOR.

use crate::algebra::{inv_mod, mul_mod, sub_mod, validate_modulus, FpScalar};
use crate::error::{Error, Result};

/// A dense matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpMatrix {
    modulus: u16,
    cols: usize,
    rows: Vec<Vec<u16>>,
}

impl FpMatrix {
    /// Builds a matrix from integer entries, reduced mod `modulus`. Every row
    /// must have length `cols`.
    pub fn from_rows(modulus: u64, cols: usize, entries: &[Vec<i64>]) -> Result<Self> {
        let p = validate_modulus(modulus)?;
        let mut rows = Vec::with_capacity(entries.len());
        for row in entries {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(cols, row.len()));
            }
            rows.push(row.iter().map(|&v| v.rem_euclid(p as i64) as u16).collect());
        }
        Ok(Self {
            modulus: p,
            cols,
            rows,
        })
    }

    pub fn modulus(&self) -> u16 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> FpScalar {
        FpScalar::from_raw(self.rows[row][col], self.modulus)
    }
}

/// Rank and a canonical kernel basis of `m`.
///
/// The kernel vectors come from the reduced row echelon form: one per free
/// column in ascending column order, each with a `1` in its free coordinate.
/// This basis is itself in echelon form, so equality of kernels can be
/// tested by comparing the returned bases directly.
pub fn row_reduce(m: &FpMatrix) -> (usize, Vec<Vec<FpScalar>>) {
    let red = Reduction::compute(m.modulus, m.cols, m.rows.clone());
    let kernel = red
        .kernel_basis()
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|r| FpScalar::from_raw(r, m.modulus))
                .collect()
        })
        .collect();
    (red.rank(), kernel)
}

/// The reduced row echelon form of a matrix over `F_p`, with zero rows
/// dropped.
pub(crate) struct Reduction {
    modulus: u16,
    cols: usize,
    /// Pivot column of row `i`, strictly increasing.
    pivots: Vec<usize>,
    /// The `rank` nonzero rows, each of length `cols`.
    rows: Vec<Vec<u16>>,
}

impl Reduction {
    pub(crate) fn compute(modulus: u16, cols: usize, rows: Vec<Vec<u16>>) -> Self {
        let (pivots, rows) = if modulus == 2 {
            rref_mod_two(cols, rows)
        } else {
            rref_general(modulus, cols, rows)
        };
        Self {
            modulus,
            cols,
            pivots,
            rows,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub(crate) fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub(crate) fn rows(&self) -> &[Vec<u16>] {
        &self.rows
    }

    /// Canonical kernel basis: one vector per free column, ascending, with a
    /// `1` in the free coordinate and the pivot coordinates solved from the
    /// echelon rows.
    pub(crate) fn kernel_basis(&self) -> Vec<Vec<u16>> {
        let p = self.modulus;
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - self.rank());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u16; self.cols];
            v[free] = 1;
            for (i, &pc) in self.pivots.iter().enumerate() {
                let entry = self.rows[i][free];
                if entry != 0 {
                    v[pc] = p - entry;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Solves `A x = rhs` over `F_p`, returning the particular solution whose
/// free coordinates are all zero, or `None` when the system is inconsistent.
pub(crate) fn solve_linear(
    modulus: u16,
    cols: usize,
    rows: &[Vec<u16>],
    rhs: &[u16],
) -> Option<Vec<u16>> {
    debug_assert_eq!(rows.len(), rhs.len());
    let augmented: Vec<Vec<u16>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = Vec::with_capacity(cols + 1);
            r.extend_from_slice(row);
            r.push(b);
            r
        })
        .collect();
    let red = Reduction::compute(modulus, cols + 1, augmented);
    if red.pivots().last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0u16; cols];
    for (i, &pc) in red.pivots().iter().enumerate() {
        x[pc] = red.rows()[i][cols];
    }
    Some(x)
}

/// General-modulus engine: Gauss–Jordan with the leftmost-column,
/// lowest-row pivot rule.
fn rref_general(p: u16, cols: usize, mut rows: Vec<Vec<u16>>) -> (Vec<usize>, Vec<Vec<u16>>) {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let lead = rows[rank][col];
        if lead != 1 {
            let inv = inv_mod(lead, p);
            for entry in rows[rank][col..].iter_mut() {
                *entry = mul_mod(*entry, inv, p);
            }
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let factor = rows[r][col];
            // Split borrows: the pivot row is disjoint from row r.
            let (head, tail) = rows.split_at_mut(rank.max(r));
            let (target, source) = if r < rank {
                (&mut head[r], &tail[0])
            } else {
                (&mut tail[0], &head[rank])
            };
            for c in col..cols {
                target[c] = sub_mod(target[c], mul_mod(factor, source[c], p), p);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (pivots, rows)
}

/// Modulus-two engine: rows packed 64 columns to a word, elimination by XOR.
fn rref_mod_two(cols: usize, rows: Vec<Vec<u16>>) -> (Vec<usize>, Vec<Vec<u16>>) {
    let words = cols.div_ceil(64);
    let mut packed: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut w = vec![0u64; words];
            for (c, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    w[c / 64] |= 1u64 << (c % 64);
                }
            }
            w
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == packed.len() {
            break;
        }
        let (word, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot_row) = (rank..packed.len()).find(|&r| packed[r][word] & bit != 0) else {
            continue;
        };
        packed.swap(rank, pivot_row);
        for r in 0..packed.len() {
            if r == rank || packed[r][word] & bit == 0 {
                continue;
            }
            let (head, tail) = packed.split_at_mut(rank.max(r));
            let (target, source) = if r < rank {
                (&mut head[r], &tail[0])
            } else {
                (&mut tail[0], &head[rank])
            };
            // Both rows are zero left of `col` apart from settled pivots,
            // which the pivot row does not touch, so XOR from `word` on.
            for w in word..words {
                target[w] ^= source[w];
            }
        }
        pivots.push(col);
        rank += 1;
    }
    packed.truncate(rank);
    let unpacked = packed
        .into_iter()
        .map(|w| {
            (0..cols)
                .map(|c| ((w[c / 64] >> (c % 64)) & 1) as u16)
                .collect()
        })
        .collect();
    (pivots, unpacked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(p: u64, cols: usize, entries: &[&[i64]]) -> FpMatrix {
        let owned: Vec<Vec<i64>> = entries.iter().map(|r| r.to_vec()).collect();
        FpMatrix::from_rows(p, cols, &owned).unwrap()
    }

    fn apply(m: &FpMatrix, v: &[FpScalar]) -> Vec<u16> {
        (0..m.rows())
            .map(|r| {
                let mut acc = FpScalar::zero(u64::from(m.modulus())).unwrap();
                for (c, value) in v.iter().enumerate().take(m.cols()) {
                    acc = acc + m.get(r, c) * *value;
                }
                acc.value()
            })
            .collect()
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let m = matrix(5, 4, &[&[0, 0, 0, 0], &[0, 0, 0, 0]]);
        let (rank, kernel) = row_reduce(&m);
        assert_eq!(rank, 0);
        assert_eq!(kernel.len(), 4);
        for (i, v) in kernel.iter().enumerate() {
            for (j, s) in v.iter().enumerate() {
                assert_eq!(s.value(), u16::from(i == j));
            }
        }
    }

    #[test]
    fn kernel_over_f3() {
        let m = matrix(3, 3, &[&[1, 2, 0], &[0, 1, 1]]);
        let (rank, kernel) = row_reduce(&m);
        assert_eq!(rank, 2);
        assert_eq!(kernel.len(), 1);
        let values: Vec<u16> = kernel[0].iter().map(|s| s.value()).collect();
        assert_eq!(values, vec![2, 2, 1]);
        assert!(apply(&m, &kernel[0]).iter().all(|&v| v == 0));
    }

    #[test]
    fn rank_ignores_dependent_rows() {
        let m = matrix(7, 3, &[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        let (rank, kernel) = row_reduce(&m);
        assert_eq!(rank, 2);
        assert_eq!(kernel.len(), 1);
        assert!(apply(&m, &kernel[0]).iter().all(|&v| v == 0));
    }

    #[test]
    fn engines_agree_on_modulus_two() {
        // Pseudo-random 20x13 matrices from a fixed linear congruential
        // stream, reduced once by each engine.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state >> 33
        };
        for _ in 0..25 {
            let rows: Vec<Vec<u16>> = (0..20)
                .map(|_| (0..13).map(|_| (next() & 1) as u16).collect())
                .collect();
            let bit = rref_mod_two(13, rows.clone());
            let general = rref_general(2, 13, rows);
            assert_eq!(bit.0, general.0);
            assert_eq!(bit.1, general.1);
        }
    }

    #[test]
    fn packed_rows_wider_than_one_word() {
        // 70 columns forces the two-word path: a single row with bits at 0
        // and 69 has rank 1 and kernel dimension 69.
        let mut row = vec![0i64; 70];
        row[0] = 1;
        row[69] = 1;
        let m = FpMatrix::from_rows(2, 70, &[row]).unwrap();
        let (rank, kernel) = row_reduce(&m);
        assert_eq!(rank, 1);
        assert_eq!(kernel.len(), 69);
        for v in &kernel {
            assert!(apply(&m, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        // x + 2y = 1, 2x + 4y = 2 over F_5: consistent, y free → x = 1.
        let rows = vec![vec![1u16, 2], vec![2, 4]];
        let x = solve_linear(5, 2, &rows, &[1, 2]).unwrap();
        assert_eq!(x, vec![1, 0]);
        // Same left side, incompatible right side.
        assert_eq!(solve_linear(5, 2, &rows, &[1, 3]), None);
    }

    #[test]
    fn solve_prefers_zero_free_coordinates() {
        // Single equation x + y + z = 4 over F_7: free y, z stay zero.
        let x = solve_linear(7, 3, &[vec![1, 1, 1]], &[4]).unwrap();
        assert_eq!(x, vec![4, 0, 0]);
    }

    #[test]
    fn from_rows_validates_shape_and_modulus() {
        assert!(FpMatrix::from_rows(4, 2, &[vec![0, 1]]).is_err());
        assert!(FpMatrix::from_rows(3, 2, &[vec![0, 1, 2]]).is_err());
        let m = FpMatrix::from_rows(3, 2, &[vec![-1, 5]]).unwrap();
        assert_eq!(m.get(0, 0).value(), 2);
        assert_eq!(m.get(0, 1).value(), 2);
    }
}
