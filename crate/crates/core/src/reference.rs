//! Worked example codes: the detection codes [[4,2,1]] and [[4,2,2]] built
//! from two 3-bit parity codes, and the [[10,4,1]] and [[10,4,3]] codes
//! built from two Hamming codes.

use crate::builder::{recover_mc_from_syndromes, DesignSession};
use crate::classical::ClassicalCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Reference codes by name.
pub const REFERENCE_NAMES: [&str; 4] = ["4-2-1", "4-2-2", "10-4-1", "10-4-3"];

/// Single-qubit syndromes of the [[10,4,3]] code, one row per qubit
/// (D1..D4 then p1..p6), columns X, Z, Y. Each entry is the three `S₁`
/// bits, a space, then the three `S₂` bits.
pub const HAMMING_10_4_3_SYNDROMES: [[&str; 3]; 10] = [
    ["111 000", "000 111", "111 111"],
    ["101 000", "000 110", "101 110"],
    ["110 000", "000 011", "110 011"],
    ["011 000", "000 101", "011 101"],
    ["100 000", "011 100", "111 100"],
    ["010 000", "101 010", "111 010"],
    ["001 000", "110 001", "111 001"],
    ["000 100", "101 011", "101 111"],
    ["000 010", "110 101", "110 111"],
    ["000 001", "011 110", "011 111"],
];

/// Column `j` is the Z syndrome of parity qubit `j` from
/// [`HAMMING_10_4_3_SYNDROMES`].
pub fn hamming_10_4_3_zsyndromes() -> BitMatrix {
    let mut z = BitMatrix::zeros(6, 6);
    for (j, row) in HAMMING_10_4_3_SYNDROMES[4..].iter().enumerate() {
        let col = BitVec::parse(row[1]).expect("well-formed constant");
        for i in col.ones() {
            z.set(i, j, true);
        }
    }
    z
}

fn detect() -> ClassicalCode {
    ClassicalCode::builtin("detect-3-2-2").expect("builtin")
}

pub fn detection_4_2_1() -> DesignSession {
    DesignSession::combine(&detect(), &detect()).expect("equal k")
}

pub fn detection_4_2_2() -> DesignSession {
    let mut s = detection_4_2_1();
    s.apply_cross_checks(&[(0, 1)]).expect("valid pair");
    s
}

pub fn hamming_10_4_1() -> DesignSession {
    let bit = ClassicalCode::builtin("hamming-7-4-3-bit").expect("builtin");
    let phase = ClassicalCode::builtin("hamming-7-4-3-phase").expect("builtin");
    DesignSession::combine(&bit, &phase).expect("equal k")
}

/// Cross-check pairs of the [[10,4,3]] code, recovered from the Z columns
/// of its syndrome table.
pub fn hamming_10_4_3_cross_checks() -> Vec<(usize, usize)> {
    let s = hamming_10_4_1();
    let m_c = recover_mc_from_syndromes(&hamming_10_4_3_zsyndromes(), &s.adjacency()).expect("consistent table");
    (0..6)
        .flat_map(|a| (a + 1..6).map(move |b| (a, b)))
        .filter(|&(a, b)| m_c.get(a, b))
        .collect()
}

pub fn hamming_10_4_3() -> DesignSession {
    let mut s = hamming_10_4_1();
    s.apply_cross_checks(&hamming_10_4_3_cross_checks()).expect("valid pairs");
    s
}

pub fn by_name(name: &str) -> Result<DesignSession> {
    Ok(match name {
        "4-2-1" => detection_4_2_1(),
        "4-2-2" => detection_4_2_2(),
        "10-4-1" => hamming_10_4_1(),
        "10-4-3" => hamming_10_4_3(),
        other => {
            return Err(Error::UnknownCode(format!(
                "no reference code {other:?}; known: {}",
                REFERENCE_NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_checks_pair_up_the_partitions() {
        let pairs = hamming_10_4_3_cross_checks();
        // all pairs inside S1, all pairs inside S2, and one matching between them
        assert_eq!(
            pairs,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
        );
    }

    #[test]
    fn names_resolve() {
        for name in REFERENCE_NAMES {
            assert!(by_name(name).is_ok());
        }
        assert!(matches!(by_name("5-1-3"), Err(Error::UnknownCode(_))));
    }
}
