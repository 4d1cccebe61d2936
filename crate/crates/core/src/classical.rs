//! Classical binary block codes in the suppressed-parity-node Tanner form.
//!
//! A code on `k` data bits is described by its parity checks only: row `i`
//! of `checks` lists the data bits summed by check `i`, and every check owns
//! exactly one parity bit. The codeword is the data bits followed by the
//! parity bits, so `n = k + checks.rows()`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Largest `k` accepted by [`ClassicalCode::distance`].
pub const MAX_EXHAUSTIVE_K: usize = 24;

/// Names accepted by [`ClassicalCode::builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["detect-3-2-2", "hamming-7-4-3-bit", "hamming-7-4-3-phase"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalCode {
    name: String,
    k: usize,
    checks: BitMatrix,
}

impl ClassicalCode {
    pub fn new(name: impl Into<String>, checks: BitMatrix) -> Self {
        ClassicalCode {
            name: name.into(),
            k: checks.cols(),
            checks,
        }
    }

    /// Builds a code from per-check lists of 0-based data-bit indices.
    pub fn from_check_lists(name: impl Into<String>, k: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let mut checks = BitMatrix::zeros(lists.len(), k);
        for (row, list) in lists.iter().enumerate() {
            for &bit in list {
                if bit >= k {
                    return Err(Error::shape(format!(
                        "check {row} references data bit {bit} but k = {k}"
                    )));
                }
                checks.flip(row, bit);
            }
        }
        Ok(ClassicalCode::new(name, checks))
    }

    /// The built-in codes used throughout the examples.
    ///
    /// The two Hamming variants use different check supports so that the
    /// combined ten-qubit code reproduces the reference syndrome table.
    pub fn builtin(name: &str) -> Result<Self> {
        let lists: &[&[usize]] = match name {
            "detect-3-2-2" => &[&[0, 1]],
            "hamming-7-4-3-bit" => &[&[0, 1, 2], &[0, 2, 3], &[0, 1, 3]],
            "hamming-7-4-3-phase" => &[&[0, 1, 3], &[0, 1, 2], &[0, 2, 3]],
            other => return Err(Error::UnknownCode(other.to_string())),
        };
        let k = if name == "detect-3-2-2" { 2 } else { 4 };
        let lists: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        ClassicalCode::from_check_lists(name, k, &lists)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of data bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Block length: data bits plus one parity bit per check.
    pub fn n(&self) -> usize {
        self.k + self.checks.rows()
    }

    pub fn num_checks(&self) -> usize {
        self.checks.rows()
    }

    pub fn checks(&self) -> &BitMatrix {
        &self.checks
    }

    /// Data-bit indices of one check.
    pub fn check_support(&self, check: usize) -> Vec<usize> {
        self.checks.row(check).ones().collect()
    }

    /// Indices of checks that duplicate an earlier check.
    pub fn redundant_checks(&self) -> Vec<usize> {
        let rows = self.checks.row_vecs();
        (0..rows.len())
            .filter(|&i| rows[..i].contains(&rows[i]))
            .collect()
    }

    /// Parity bits `p_i = Σ_j checks[i,j]·data[j]`.
    pub fn parity(&self, data: &BitVec) -> Result<BitVec> {
        if data.len() != self.k {
            return Err(Error::shape(format!(
                "data of length {} for a code with k = {}",
                data.len(),
                self.k
            )));
        }
        self.checks.mul_vec(data)
    }

    /// Codeword: data bits followed by parity bits.
    pub fn encode(&self, data: &BitVec) -> Result<BitVec> {
        Ok(data.concat(&self.parity(data)?))
    }

    /// Minimum Hamming weight over all nonzero codewords, by enumeration.
    pub fn distance(&self) -> Result<usize> {
        if self.k == 0 {
            return Err(Error::Range("a code with k = 0 has no nonzero codewords".into()));
        }
        if self.k > MAX_EXHAUSTIVE_K {
            return Err(Error::TooLarge(format!(
                "k = {} is too large for exhaustive distance (limit {MAX_EXHAUSTIVE_K})",
                self.k
            )));
        }
        // Gray-code walk: each step flips one data bit, so the parity
        // vector changes by one column of `checks`.
        let columns: Vec<BitVec> = (0..self.k).map(|j| self.checks.column(j)).collect();
        let mut parity = BitVec::zeros(self.num_checks());
        let mut best = usize::MAX;
        let mut gray: u64 = 0;
        for step in 1u64..(1u64 << self.k) {
            let bit = step.trailing_zeros() as usize;
            gray ^= 1 << bit;
            parity.xor_assign(&columns[bit]);
            let weight = gray.count_ones() as usize + parity.count_ones();
            best = best.min(weight);
        }
        Ok(best)
    }
}

/// On-disk JSON form: `{"name": str, "k": int, "checks": [[int,...],...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFile {
    pub name: String,
    pub k: usize,
    pub checks: Vec<Vec<usize>>,
}

impl From<&ClassicalCode> for CodeFile {
    fn from(code: &ClassicalCode) -> Self {
        CodeFile {
            name: code.name.clone(),
            k: code.k,
            checks: (0..code.num_checks()).map(|i| code.check_support(i)).collect(),
        }
    }
}

impl TryFrom<CodeFile> for ClassicalCode {
    type Error = Error;

    fn try_from(file: CodeFile) -> Result<Self> {
        ClassicalCode::from_check_lists(file.name, file.k, &file.checks)
    }
}

impl Serialize for ClassicalCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CodeFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClassicalCode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = CodeFile::deserialize(deserializer)?;
        ClassicalCode::try_from(file).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn detection_code_encodes_sum() {
        let code = ClassicalCode::builtin("detect-3-2-2").unwrap();
        assert_eq!((code.n(), code.k()), (3, 2));
        let c = code.encode(&BitVec::parse("10").unwrap()).unwrap();
        assert_eq!(c.to_string(), "101");
        assert_eq!(code.distance().unwrap(), 2);
    }

    #[test]
    fn zero_data_encodes_to_zero() {
        for name in BUILTIN_NAMES {
            let code = ClassicalCode::builtin(name).unwrap();
            assert!(code.encode(&BitVec::zeros(code.k())).unwrap().is_zero());
        }
    }

    #[test]
    fn hamming_bit_encoding() {
        let code = ClassicalCode::builtin("hamming-7-4-3-bit").unwrap();
        let c = code.encode(&BitVec::parse("1000").unwrap()).unwrap();
        assert_eq!(c.to_string(), "1000111");
        assert_eq!(code.distance().unwrap(), 3);
    }

    #[test]
    fn builtin_columns_match_reference_syndromes() {
        let bit = ClassicalCode::builtin("hamming-7-4-3-bit").unwrap();
        assert_eq!(bit.checks().column(0).to_string(), "111");
        let phase = ClassicalCode::builtin("hamming-7-4-3-phase").unwrap();
        assert_eq!(phase.checks().column(2).to_string(), "011");
        assert_eq!(phase.distance().unwrap(), 3);
    }

    #[test]
    fn lone_data_bit_has_distance_one() {
        let code = ClassicalCode::new("lone", BitMatrix::zeros(0, 1));
        assert_eq!(code.n(), 1);
        assert_eq!(code.distance().unwrap(), 1);
    }

    #[test]
    fn distance_refuses_large_k() {
        let code = ClassicalCode::new("big", BitMatrix::zeros(1, 25));
        assert!(matches!(code.distance(), Err(Error::TooLarge(_))));
    }

    #[test]
    fn errors() {
        assert!(matches!(ClassicalCode::builtin("golay"), Err(Error::UnknownCode(_))));
        let code = ClassicalCode::builtin("detect-3-2-2").unwrap();
        assert!(matches!(code.encode(&BitVec::zeros(3)), Err(Error::Shape(_))));
        assert!(ClassicalCode::from_check_lists("bad", 2, &[vec![2]]).is_err());
    }

    #[test]
    fn duplicate_checks_are_flagged() {
        let code = ClassicalCode::from_check_lists("dup", 3, &[vec![0, 1], vec![1, 2], vec![0, 1]]).unwrap();
        assert_eq!(code.redundant_checks(), vec![2]);
    }

    #[test]
    fn hamming_single_flips_have_distinct_patterns() {
        for name in ["hamming-7-4-3-bit", "hamming-7-4-3-phase"] {
            let code = ClassicalCode::builtin(name).unwrap();
            // flips on a parity bit show up as unit vectors
            let mut seen: Vec<BitVec> = (0..3).map(|i| BitVec::from_indices(3, &[i])).collect();
            for a in 0..4 {
                let p = code.parity(&BitVec::from_indices(4, &[a])).unwrap();
                assert!(p.count_ones() >= 2, "{name}: weak pattern {p}");
                assert!(!seen.contains(&p), "{name}: repeated pattern {p}");
                seen.push(p);
            }
        }
    }

    #[test]
    fn json_format() {
        let code = ClassicalCode::builtin("hamming-7-4-3-bit").unwrap();
        let json = serde_json::to_string(&code).unwrap();
        assert_eq!(json, r#"{"name":"hamming-7-4-3-bit","k":4,"checks":[[0,1,2],[0,2,3],[0,1,3]]}"#);
        let back: ClassicalCode = serde_json::from_str(&json).unwrap();
        assert_eq!(back, code);
    }

    proptest! {
        #[test]
        fn encoding_is_linear(a in proptest::collection::vec(any::<bool>(), 4), b in proptest::collection::vec(any::<bool>(), 4)) {
            let code = ClassicalCode::builtin("hamming-7-4-3-bit").unwrap();
            let (a, b) = (BitVec::from_bools(&a), BitVec::from_bools(&b));
            let lhs = code.encode(&a.checked_xor(&b).unwrap()).unwrap();
            let rhs = code.encode(&a).unwrap().checked_xor(&code.encode(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
