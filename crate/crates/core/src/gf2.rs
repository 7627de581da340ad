//! Linear algebra over GF(2).
//!
//! Short vectors (component codes, at most 32 positions) are `u32` masks with
//! bit `i` holding position `i`. Long vectors use [`BitVec`] rows of `u64` words.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Rank of a set of short vectors.
pub fn rank_u32(rows: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Basis of `{ h : <h, g> = 0 for every row g }` over `ncols` positions.
pub fn null_space_u32(rows: &[u32], ncols: usize) -> Vec<u32> {
    // Reduced row echelon form, pivots on the lowest set bit.
    let mut rref: Vec<u32> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for &row in rows {
        let mut r = row;
        for (b, &p) in rref.iter().zip(&pivots) {
            if r >> p & 1 == 1 {
                r ^= b;
            }
        }
        if r == 0 {
            continue;
        }
        let p = r.trailing_zeros() as usize;
        for b in rref.iter_mut() {
            if *b >> p & 1 == 1 {
                *b ^= r;
            }
        }
        rref.push(r);
        pivots.push(p);
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut h = 1u32 << free;
        for (b, &p) in rref.iter().zip(&pivots) {
            if b >> free & 1 == 1 {
                h |= 1 << p;
            }
        }
        basis.push(h);
    }
    basis
}

/// Dense bit vector of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

/// Sparse binary matrix stored by rows (sorted column indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBinMatrix {
    num_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl SparseBinMatrix {
    pub fn new(num_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut rows = rows;
        for row in rows.iter_mut() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse("repeated column inside a row".into()));
            }
            if row.last().is_some_and(|&c| c >= num_cols) {
                return Err(Error::Parse("column index out of range".into()));
            }
        }
        Ok(Self { num_cols, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.num_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    /// `H · word = 0` over GF(2).
    pub fn is_codeword(&self, word: &[u8]) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ (word[c] & 1)) == 0)
    }

    pub fn syndrome_weight(&self, word: &[u8]) -> usize {
        self.rows
            .iter()
            .filter(|row| row.iter().fold(0u8, |acc, &c| acc ^ (word[c] & 1)) == 1)
            .count()
    }

    fn dense_rows(&self) -> Vec<BitVec> {
        self.rows
            .iter()
            .map(|row| {
                let mut v = BitVec::zeros(self.num_cols);
                for &c in row {
                    v.set(c, true);
                }
                v
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        reduce(self.dense_rows(), self.num_cols).pivots.len()
    }

    /// Basis of the code `{ c : H c = 0 }`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let reduced = reduce(self.dense_rows(), self.num_cols);
        let mut is_pivot = vec![false; self.num_cols];
        for &p in &reduced.pivots {
            is_pivot[p] = true;
        }
        (0..self.num_cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::zeros(self.num_cols);
                v.set(free, true);
                for (row, &p) in reduced.rows.iter().zip(&reduced.pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Renders the matrix in alist format (columns first, then rows; 1-based indices).
    pub fn to_alist(&self) -> String {
        let cols = self.columns();
        let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.num_cols, self.rows.len());
        let _ = writeln!(out, "{max_col} {max_row}");
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "{}", join(&mut cols.iter().map(|c| c.len().to_string())));
        let _ = writeln!(out, "{}", join(&mut self.rows.iter().map(|r| r.len().to_string())));
        for col in &cols {
            let _ = writeln!(out, "{}", join(&mut col.iter().map(|r| (r + 1).to_string())));
        }
        for row in &self.rows {
            let _ = writeln!(out, "{}", join(&mut row.iter().map(|c| (c + 1).to_string())));
        }
        out
    }

    /// Parses alist text. Zero entries used as padding are ignored.
    pub fn from_alist(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut numbers = |what: &str| -> Result<Vec<usize>> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("alist: missing {what}")))?;
            line.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("alist: bad {what}"))))
                .collect()
        };
        let dims = numbers("dimensions")?;
        if dims.len() != 2 {
            return Err(Error::Parse("alist: bad dimensions line".into()));
        }
        let (ncols, nrows) = (dims[0], dims[1]);
        numbers("maximum degrees")?;
        let col_degrees = numbers("column degrees")?;
        let row_degrees = numbers("row degrees")?;
        if col_degrees.len() != ncols || row_degrees.len() != nrows {
            return Err(Error::Parse("alist: degree list length mismatch".into()));
        }
        let mut col_entries = Vec::with_capacity(ncols);
        for c in 0..ncols {
            let entries: Vec<usize> = numbers("column")?.into_iter().filter(|&e| e != 0).collect();
            if entries.len() != col_degrees[c] || entries.iter().any(|&r| r > nrows) {
                return Err(Error::Parse(format!("alist: column {} inconsistent", c + 1)));
            }
            col_entries.push(entries);
        }
        let mut rows = Vec::with_capacity(nrows);
        for r in 0..nrows {
            let entries: Vec<usize> = numbers("row")?.into_iter().filter(|&e| e != 0).collect();
            if entries.len() != row_degrees[r] || entries.iter().any(|&c| c > ncols) {
                return Err(Error::Parse(format!("alist: row {} inconsistent", r + 1)));
            }
            rows.push(entries.into_iter().map(|c| c - 1).collect());
        }
        let matrix = Self::new(ncols, rows)?;
        let cols = matrix.columns();
        for (c, entries) in col_entries.iter().enumerate() {
            let mut expected: Vec<usize> = entries.iter().map(|r| r - 1).collect();
            expected.sort_unstable();
            if expected != cols[c] {
                return Err(Error::Parse(format!("alist: column {} disagrees with rows", c + 1)));
            }
        }
        Ok(matrix)
    }
}

struct Reduced {
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

/// Reduced row echelon form (zero rows dropped).
fn reduce(mut rows: Vec<BitVec>, ncols: usize) -> Reduced {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Reduced { rows, pivots }
}

/// Minimum Hamming weight of a nonzero codeword of `{ c : H c = 0 }`, by Gray-code
/// enumeration of the kernel. Returns `None` for the zero code.
pub fn min_distance_exhaustive(h: &SparseBinMatrix, max_dimension: usize) -> Result<Option<usize>> {
    let basis = h.kernel_basis();
    let k = basis.len();
    if k > max_dimension {
        return Err(Error::EnumerationBudget(format!(
            "code dimension {k} exceeds the limit {max_dimension}"
        )));
    }
    if k == 0 {
        return Ok(None);
    }
    let mut current = BitVec::zeros(h.num_cols());
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        current.xor_assign(&basis[flip]);
        best = best.min(current.count_ones());
    }
    Ok(Some(best))
}

/// Systematic encoder obtained by Gaussian elimination on a parity-check matrix.
#[derive(Debug, Clone)]
pub struct SystematicEncoder {
    n: usize,
    info_positions: Vec<usize>,
    /// For each pivot (parity) position: the information indices it depends on.
    parity_rules: Vec<(usize, Vec<usize>)>,
}

impl SystematicEncoder {
    pub fn from_parity(h: &SparseBinMatrix) -> Self {
        let n = h.num_cols();
        let reduced = reduce(h.dense_rows(), n);
        let mut is_pivot = vec![false; n];
        for &p in &reduced.pivots {
            is_pivot[p] = true;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut info_index = vec![usize::MAX; n];
        for (i, &c) in info_positions.iter().enumerate() {
            info_index[c] = i;
        }
        let parity_rules = reduced
            .rows
            .iter()
            .zip(&reduced.pivots)
            .map(|(row, &p)| {
                let deps = (0..n).filter(|&c| c != p && row.get(c)).map(|c| info_index[c]).collect();
                (p, deps)
            })
            .collect();
        Self { n, info_positions, parity_rules }
    }

    pub fn dimension(&self) -> usize {
        self.info_positions.len()
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.dimension() {
            return Err(Error::LengthMismatch { expected: self.dimension(), actual: info.len() });
        }
        let mut word = vec![0u8; self.n];
        for (&pos, &bit) in self.info_positions.iter().zip(info) {
            word[pos] = bit & 1;
        }
        for (p, deps) in &self.parity_rules {
            word[*p] = deps.iter().fold(0u8, |acc, &i| acc ^ (info[i] & 1));
        }
        Ok(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming_7_4() -> SparseBinMatrix {
        SparseBinMatrix::new(7, vec![vec![0, 1, 2, 4], vec![1, 2, 3, 5], vec![0, 2, 3, 6]]).unwrap()
    }

    #[test]
    fn small_rank_and_null_space() {
        let gens = [0b000111u32, 0b101001, 0b110101];
        assert_eq!(rank_u32(&gens), 3);
        assert_eq!(rank_u32(&[0b11, 0b01, 0b10]), 2);
        let dual = null_space_u32(&gens, 6);
        assert_eq!(dual.len(), 3);
        for h in &dual {
            for g in &gens {
                assert_eq!((h & g).count_ones() % 2, 0);
            }
        }
    }

    #[test]
    fn hamming_code_properties() {
        let h = hamming_7_4();
        assert_eq!(h.rank(), 3);
        let basis = h.kernel_basis();
        assert_eq!(basis.len(), 4);
        for b in &basis {
            assert!(h.is_codeword(&b.to_bits()));
        }
        assert_eq!(min_distance_exhaustive(&h, 24).unwrap(), Some(3));
    }

    #[test]
    fn exhaustive_distance_matches_vector_scan() {
        let h = hamming_7_4();
        let best = (1u32..128)
            .map(|w| (0..7).map(|i| (w >> i & 1) as u8).collect::<Vec<_>>())
            .filter(|v| h.is_codeword(v))
            .map(|v| v.iter().filter(|&&b| b == 1).count())
            .min();
        assert_eq!(min_distance_exhaustive(&h, 24).unwrap(), best);
    }

    #[test]
    fn alist_round_trip_is_bit_exact() {
        let h = hamming_7_4();
        let text = h.to_alist();
        assert!(text.starts_with("7 3\n3 4\n2 2 3 2 1 1 1\n4 4 4\n1 3\n"));
        let back = SparseBinMatrix::from_alist(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_alist(), text);
    }

    #[test]
    fn alist_rejects_inconsistent_input() {
        let bad = "2 1\n1 2\n1 1\n2\n1\n1\n1 2\n";
        assert!(SparseBinMatrix::from_alist(bad).is_ok());
        let bad = "2 1\n1 2\n1 1\n2\n1\n1\n1\n";
        assert!(SparseBinMatrix::from_alist(bad).is_err());
    }

    #[test]
    fn systematic_encoder_produces_codewords() {
        let h = hamming_7_4();
        let enc = SystematicEncoder::from_parity(&h);
        assert_eq!(enc.dimension(), 4);
        for m in 0u8..16 {
            let info: Vec<u8> = (0..4).map(|i| m >> i & 1).collect();
            let word = enc.encode(&info).unwrap();
            assert!(h.is_codeword(&word));
            for (&p, &b) in enc.info_positions().iter().zip(&info) {
                assert_eq!(word[p], b);
            }
        }
    }
}
