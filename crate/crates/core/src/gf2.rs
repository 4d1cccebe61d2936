//! Dense, bit-packed vectors and matrices over GF(2).
//!
//! Bits are packed little-endian into `u64` words: bit `i` lives in word
//! `i / 64` at position `i % 64`. Padding bits above `len` are always zero,
//! which lets equality, hashing and popcount work word-wise.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Vector with ones exactly at `indices` (repeated indices cancel).
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters. Spaces and underscores are
    /// ignored so grouped strings like `"111 000"` are accepted.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                ' ' | '_' => {}
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {other:?} in bit string {s:?}"
                    )))
                }
            }
        }
        Ok(BitVec::from_bools(&bits))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// In-place `self ^= other`. Panics on length mismatch; use
    /// [`BitVec::checked_xor`] at API boundaries.
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn checked_xor(&self, other: &BitVec) -> Result<BitVec> {
        if self.len != other.len {
            return Err(Error::shape(format!(
                "xor of length {} with length {}",
                self.len, other.len
            )));
        }
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let tz = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Copy of bits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Index of the first set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }

    /// Lexicographic comparison reading bit 0 first, where `0 < 1`.
    pub fn lex_cmp(&self, other: &BitVec) -> std::cmp::Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if (a >> bit) & 1 == 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitVec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::shape(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Convenience constructor from 0/1 literals. Panics on ragged input.
    pub fn from_dense<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let data = rows
            .iter()
            .map(|r| {
                let r = r.as_ref();
                assert_eq!(r.len(), cols, "ragged dense matrix");
                BitVec::from_bools(&r.iter().map(|&b| b & 1 == 1).collect::<Vec<_>>())
            })
            .collect();
        BitMatrix { rows: rows.len(), cols, data }
    }

    /// Parses rows of `0`/`1` strings.
    pub fn parse_rows<S: AsRef<str>>(cols: usize, rows: &[S]) -> Result<Self> {
        let data = rows
            .iter()
            .map(|r| BitVec::parse(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c)
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.data
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // Row i of the product is the XOR of the rows of `other` selected by
        // the ones of row i of `self`.
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for t in row.ones() {
                    acc.xor_assign(&other.data[t]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::shape(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn xor(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut a = a.clone();
                a.xor_assign(b);
                a
            })
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::shape(format!(
                "cannot stack {} rows beside {} rows",
                self.rows, other.rows
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.concat(b))
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    /// Copy of columns `start..start + len`.
    pub fn column_block(&self, start: usize, len: usize) -> BitMatrix {
        BitMatrix {
            rows: self.rows,
            cols: len,
            data: self.data.iter().map(|r| r.slice(start, len)).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self.get(i, i))
    }

    /// GF(2) row rank. The matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        RowSpace::new(self).dim()
    }

    /// Whether `v` is a GF(2) combination of the rows.
    pub fn in_row_space(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(RowSpace::new(self).contains(v))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.data.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.data.len() != repr.rows {
            return Err(serde::de::Error::custom(format!(
                "matrix declares {} rows but has {}",
                repr.rows,
                repr.data.len()
            )));
        }
        BitMatrix::from_rows(repr.cols, repr.data).map_err(serde::de::Error::custom)
    }
}

/// Reduced row-echelon basis of a row space, for repeated membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    // (pivot column, basis row); each pivot column is zero in every other row.
    basis: Vec<(usize, BitVec)>,
}

impl RowSpace {
    pub fn new(m: &BitMatrix) -> Self {
        let mut rows: Vec<BitVec> = m.row_vecs().to_vec();
        let mut basis: Vec<(usize, BitVec)> = Vec::new();
        let mut next = 0;
        for col in 0..m.cols() {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            for (_, b) in basis.iter_mut() {
                if b.get(col) {
                    b.xor_assign(&pivot);
                }
            }
            basis.push((col, pivot));
            next += 1;
        }
        RowSpace { cols: m.cols(), basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (pivot, row) in &self.basis {
            if r.get(*pivot) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.cols, "row-space membership length mismatch");
        self.reduce(v).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), cols), rows).prop_map(
            move |bits| {
                let data = bits.iter().map(|r| BitVec::from_bools(r)).collect();
                BitMatrix::from_rows(cols, data).unwrap()
            },
        )
    }

    #[test]
    fn identity_is_neutral() {
        let a = BitMatrix::from_dense(&[[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 0]]);
        assert_eq!(BitMatrix::identity(3).mul(&a).unwrap(), a);
        assert_eq!(a.mul(&BitMatrix::identity(4)).unwrap(), a);
    }

    #[test]
    fn product_of_small_adjacency_blocks() {
        // bit-check and phase-check incidence of the two-data-qubit detection code
        let mb = BitMatrix::from_dense(&[[1, 0], [1, 0]]);
        let mp = BitMatrix::from_dense(&[[0, 1], [0, 1]]);
        assert_eq!(mb.transpose().mul(&mp).unwrap(), BitMatrix::zeros(2, 2));
    }

    #[test]
    fn mul_shape_mismatch_errors() {
        let a = BitMatrix::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::Shape(_))));
        assert!(matches!(a.mul_vec(&BitVec::zeros(2)), Err(Error::Shape(_))));
    }

    #[test]
    fn rank_basics() {
        assert_eq!(BitMatrix::zeros(4, 5).rank(), 0);
        assert_eq!(BitMatrix::identity(7).rank(), 7);
        let dup = BitMatrix::from_dense(&[[1, 1, 0], [1, 1, 0], [0, 1, 1]]);
        assert_eq!(dup.rank(), 2);
        let g = BitMatrix::parse_rows(8, &["0001 1110", "1110 0001"]).unwrap();
        assert_eq!(g.rank(), 2);
    }

    #[test]
    fn row_space_membership() {
        let g = BitMatrix::parse_rows(8, &["0001 1110", "1110 0001"]).unwrap();
        assert!(g.in_row_space(&BitVec::zeros(8)).unwrap());
        let sum = g.row(0).checked_xor(g.row(1)).unwrap();
        assert!(g.in_row_space(&sum).unwrap());
        // X on the first data qubit only
        let x1 = BitVec::parse("1000 0000").unwrap();
        assert!(!g.in_row_space(&x1).unwrap());
        assert!(g.in_row_space(&BitVec::zeros(3)).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let v = BitVec::parse("101 001").unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v.to_string(), "101001");
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert!(BitVec::parse("10x").is_err());
    }

    #[test]
    fn words_beyond_64_bits() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        let w = BitVec::from_indices(130, &[64, 129]);
        assert!(!v.dot(&w));
        assert_eq!(v.lex_cmp(&w), std::cmp::Ordering::Greater);
    }

    #[test]
    fn serde_uses_bit_strings() {
        let m = BitMatrix::from_dense(&[[1, 0], [0, 1]]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"rows":2,"cols":2,"data":["10","01"]}"#);
        let back: BitMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    proptest! {
        #[test]
        fn self_xor_is_zero(a in arb_matrix(5, 7)) {
            prop_assert!(a.xor(&a).unwrap().is_zero());
        }

        #[test]
        fn distributive_over_xor(a in arb_matrix(4, 6), b in arb_matrix(6, 5), c in arb_matrix(6, 5)) {
            let lhs = a.mul(&b.xor(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().xor(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn transpose_of_product(a in arb_matrix(4, 70), b in arb_matrix(70, 3)) {
            let lhs = a.mul(&b).unwrap().transpose();
            let rhs = b.transpose().mul(&a.transpose()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn transpose_is_involution(a in arb_matrix(5, 9)) {
            prop_assert_eq!(a.transpose().transpose(), a);
        }

        #[test]
        fn rank_bounds_and_row_swap(a in arb_matrix(6, 5), i in 0usize..6, j in 0usize..6) {
            let r = a.rank();
            prop_assert!(r <= 5);
            let mut b = a.clone();
            b.swap_rows(i, j);
            prop_assert_eq!(b.rank(), r);
            prop_assert_eq!(a.transpose().rank(), r);
        }

        #[test]
        fn row_combinations_are_members(a in arb_matrix(5, 12), pick in proptest::collection::vec(any::<bool>(), 5)) {
            let mut v = BitVec::zeros(12);
            for (row, &p) in a.row_vecs().iter().zip(&pick) {
                if p { v.xor_assign(row); }
            }
            prop_assert!(a.in_row_space(&v).unwrap());
        }
    }
}
