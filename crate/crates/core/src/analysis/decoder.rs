use std::cmp::Ordering;
use std::ops::ControlFlow;

use serde::Serialize;

use super::enumerate::{for_each_error, to_error, SingleSyndromes};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, RowSpace};
use crate::stabilizer::{PauliError, QuantumParityMatrix};

/// Largest number of checks a lookup table is built for.
pub const MAX_DECODER_CHECKS: usize = 20;

/// Default enumeration depth for [`LookupDecoder::build`].
pub const DEFAULT_DECODER_WEIGHT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoderEntry {
    pub correction: PauliError,
    /// Another error of the same minimum weight gives this syndrome and
    /// differs from `correction` by a logical operator, so the correction
    /// is a guess.
    pub ambiguous: bool,
}

/// Syndrome → minimum-weight correction table.
#[derive(Clone, Debug)]
pub struct LookupDecoder {
    n: usize,
    m: usize,
    // indexed by the syndrome read as a little-endian integer
    table: Vec<Option<DecoderEntry>>,
    max_weight: usize,
}

fn key(s: &BitVec) -> usize {
    s.words().first().copied().unwrap_or(0) as usize
}

impl LookupDecoder {
    pub fn build(q: &QuantumParityMatrix) -> Result<Self> {
        LookupDecoder::build_to_weight(q, DEFAULT_DECODER_WEIGHT)
    }

    /// Enumerates errors by increasing weight up to `max_weight`, stopping
    /// early once every syndrome has a correction. Ties within a weight go
    /// to the lexicographically smallest `(x, z)`.
    pub fn build_to_weight(q: &QuantumParityMatrix, max_weight: usize) -> Result<Self> {
        let (n, m) = (q.n(), q.m());
        if m > MAX_DECODER_CHECKS {
            return Err(Error::TooLarge(format!(
                "{m} checks is too many for a lookup table (limit {MAX_DECODER_CHECKS})"
            )));
        }
        let singles = SingleSyndromes::new(q);
        let stabilizers = RowSpace::new(&q.stacked());
        let size = 1usize << m;
        let mut table: Vec<Option<DecoderEntry>> = vec![None; size];
        let mut filled = 0usize;
        for w in 0..=max_weight.min(n) {
            if filled == size {
                break;
            }
            // Candidates at this weight for syndromes not reached before.
            let mut fresh: Vec<Option<DecoderEntry>> = vec![None; size];
            let _ = for_each_error::<()>(&singles, w, 0..n.max(1), &mut |support, s| {
                let k = key(s);
                if table[k].is_some() {
                    return ControlFlow::Continue(());
                }
                let e = to_error(n, support);
                match &mut fresh[k] {
                    slot @ None => {
                        *slot = Some(DecoderEntry {
                            correction: e,
                            ambiguous: false,
                        })
                    }
                    Some(entry) => {
                        if !stabilizers.contains(&entry.correction.compose(&e).symplectic()) {
                            entry.ambiguous = true;
                        }
                        if e.lex_cmp(&entry.correction) == Ordering::Less {
                            entry.correction = e;
                        }
                    }
                }
                ControlFlow::Continue(())
            });
            for (slot, candidate) in table.iter_mut().zip(fresh) {
                if slot.is_none() && candidate.is_some() {
                    *slot = candidate;
                    filled += 1;
                }
            }
        }
        Ok(LookupDecoder { n, m, table, max_weight })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    /// Correction for a syndrome, or `None` when the syndrome was not
    /// reached (detected but uncorrectable).
    pub fn decode(&self, syndrome: &BitVec) -> Option<&DecoderEntry> {
        assert_eq!(syndrome.len(), self.m, "syndrome length");
        self.table[key(syndrome)].as_ref()
    }

    /// Number of syndromes that have a correction.
    pub fn coverage(&self) -> usize {
        self.table.iter().filter(|e| e.is_some()).count()
    }

    /// True when every nonzero syndrome is either uncorrectable or ambiguous:
    /// the code can only flag errors.
    pub fn detection_only(&self) -> bool {
        self.table
            .iter()
            .skip(1)
            .all(|e| e.as_ref().is_none_or(|e| e.ambiguous))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;
    use crate::stabilizer::{CpcAdjacency, Pauli};

    fn code_422() -> QuantumParityMatrix {
        CpcAdjacency::new(
            BitMatrix::from_dense(&[[1, 0], [1, 0]]),
            BitMatrix::from_dense(&[[0, 1], [0, 1]]),
            BitMatrix::from_dense(&[[0, 1], [1, 0]]),
        )
        .unwrap()
        .quantum_parity_matrix()
        .unwrap()
    }

    #[test]
    fn zero_syndrome_decodes_to_identity() {
        let dec = LookupDecoder::build(&code_422()).unwrap();
        let entry = dec.decode(&BitVec::zeros(2)).unwrap();
        assert!(entry.correction.is_identity());
        assert!(!entry.ambiguous);
    }

    #[test]
    fn detection_code_is_detection_only() {
        let dec = LookupDecoder::build(&code_422()).unwrap();
        assert_eq!(dec.coverage(), 4);
        assert!(dec.detection_only());
        // X_D1, X_D2, X_p1 and Z_p2 all give 10; Z_p2 has the smallest x part
        let entry = dec.decode(&BitVec::parse("10").unwrap()).unwrap();
        assert_eq!(entry.correction, PauliError::single(4, 3, Pauli::Z));
    }

    #[test]
    fn too_many_checks() {
        let q = CpcAdjacency::new(BitMatrix::zeros(1, 21), BitMatrix::zeros(1, 21), BitMatrix::zeros(21, 21))
            .unwrap()
            .quantum_parity_matrix()
            .unwrap();
        assert!(matches!(LookupDecoder::build(&q), Err(Error::TooLarge(_))));
    }
}
