//! Syndromes, syndrome tables, error-signature profiles, code distance,
//! lookup decoding and Monte Carlo failure-rate estimation.

mod decoder;
mod distance;
mod enumerate;
mod montecarlo;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::stabilizer::{Pauli, PauliError, QuantumParityMatrix};

pub use decoder::{DecoderEntry, LookupDecoder, DEFAULT_DECODER_WEIGHT, MAX_DECODER_CHECKS};
pub use distance::{distance, distance_with, DistanceReport, MAX_DISTANCE_WEIGHT};
pub use enumerate::{for_each_error, SingleSyndromes};
pub use montecarlo::{monte_carlo, MonteCarloResult, SHARD_SHOTS};

/// Outcome of measuring every parity qubit, ordered by parity index.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Syndrome(pub BitVec);

impl Syndrome {
    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }

    /// Bits of `S₁` then a space then bits of `S₂`.
    pub fn grouped(&self, tags: &PartitionTags) -> String {
        let mut s = String::new();
        for &i in &tags.s1 {
            s.push(if self.0.get(i) { '1' } else { '0' });
        }
        s.push(' ');
        for &i in &tags.s2 {
            s.push(if self.0.get(i) { '1' } else { '0' });
        }
        s
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({})", self.0)
    }
}

pub fn syndrome(q: &QuantumParityMatrix, e: &PauliError) -> Result<Syndrome> {
    q.syndrome(e).map(Syndrome)
}

/// Parity qubits split by origin: `s1` detect bit flips on the data,
/// `s2` detect phase flips.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionTags {
    pub s1: BTreeSet<usize>,
    pub s2: BTreeSet<usize>,
}

impl PartitionTags {
    pub fn new(s1: impl IntoIterator<Item = usize>, s2: impl IntoIterator<Item = usize>) -> Result<Self> {
        let tags = PartitionTags {
            s1: s1.into_iter().collect(),
            s2: s2.into_iter().collect(),
        };
        if let Some(both) = tags.s1.intersection(&tags.s2).next() {
            return Err(Error::InvalidState(format!("parity qubit p{} tagged in both S1 and S2", both + 1)));
        }
        Ok(tags)
    }

    /// First `bit_checks` parity qubits in `S₁`, the next `phase_checks` in `S₂`.
    pub fn contiguous(bit_checks: usize, phase_checks: usize) -> Self {
        PartitionTags {
            s1: (0..bit_checks).collect(),
            s2: (bit_checks..bit_checks + phase_checks).collect(),
        }
    }

    pub fn covers(&self, num_parity: usize) -> bool {
        self.s1.len() + self.s2.len() == num_parity && self.s1.iter().chain(&self.s2).all(|&p| p < num_parity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeEntry {
    /// 0-based qubit index in column order (data first).
    pub qubit: usize,
    pub pauli: Pauli,
    pub syndrome: Syndrome,
}

/// Syndromes of all `3n` single-qubit errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeTable {
    pub num_data: usize,
    pub num_qubits: usize,
    /// Qubit-major, `X, Z, Y` per qubit.
    pub entries: Vec<SyndromeEntry>,
    /// All syndromes nonzero and pairwise distinct.
    pub unique: bool,
}

const TABLE_ORDER: [Pauli; 3] = [Pauli::X, Pauli::Z, Pauli::Y];

impl SyndromeTable {
    pub fn get(&self, qubit: usize, pauli: Pauli) -> &Syndrome {
        let slot = TABLE_ORDER.iter().position(|&p| p == pauli).expect("all Paulis listed");
        &self.entries[qubit * 3 + slot].syndrome
    }

    /// Whether every single-qubit error trips at least one check.
    pub fn all_detected(&self) -> bool {
        self.entries.iter().all(|e| !e.syndrome.is_trivial())
    }

    /// Aligned text with one row per qubit (numbered from 1) and columns for
    /// X, Z and Y syndromes. With tags, each syndrome is printed as the S₁
    /// bits, a space, then the S₂ bits.
    pub fn to_text(&self, tags: Option<&PartitionTags>) -> String {
        let render = |s: &Syndrome| match tags {
            Some(t) => s.grouped(t),
            None => s.to_string(),
        };
        let width = self
            .entries
            .first()
            .map_or(1, |e| render(&e.syndrome).len())
            .max("X-error".len());
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:<w$}  {:<w$}  {:<w$}",
            "qubit",
            "X-error",
            "Z-error",
            "Y-error",
            w = width
        );
        for q in 0..self.num_qubits {
            let role = if q < self.num_data { "data" } else { "parity" };
            let _ = writeln!(
                out,
                "{:<8} {:<w$}  {:<w$}  {:<w$}  {role}",
                q + 1,
                render(self.get(q, Pauli::X)),
                render(self.get(q, Pauli::Z)),
                render(self.get(q, Pauli::Y)),
                w = width
            );
        }
        out
    }
}

pub fn syndrome_table(q: &QuantumParityMatrix) -> SyndromeTable {
    let n = q.n();
    let mut entries = Vec::with_capacity(3 * n);
    for qubit in 0..n {
        let x = q.syndrome(&PauliError::single(n, qubit, Pauli::X)).expect("sized to code");
        let z = q.syndrome(&PauliError::single(n, qubit, Pauli::Z)).expect("sized to code");
        let y = x.checked_xor(&z).expect("same length");
        for (pauli, s) in TABLE_ORDER.into_iter().zip([x, z, y]) {
            entries.push(SyndromeEntry {
                qubit,
                pauli,
                syndrome: Syndrome(s),
            });
        }
    }
    let mut seen = BTreeSet::new();
    let unique = entries
        .iter()
        .all(|e| !e.syndrome.is_trivial() && seen.insert(e.syndrome.0.to_string()));
    SyndromeTable {
        num_data: q.num_data(),
        num_qubits: n,
        entries,
        unique,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Data,
    S1,
    S2,
}

/// Detection counts in `(S₁, S₂)` for one class of single-qubit error.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureClass {
    pub pauli: Pauli,
    pub location: Location,
    /// `(count in S₁, count in S₂)` → number of qubits showing it.
    /// Serialized as `[s1, s2, qubits]` triples.
    #[serde(with = "count_triples")]
    pub counts: BTreeMap<(usize, usize), usize>,
}

mod count_triples {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(counts: &BTreeMap<(usize, usize), usize>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(counts.iter().map(|(&(a, b), &n)| [a, b, n]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), usize>, D::Error> {
        let triples = Vec::<[usize; 3]>::deserialize(d)?;
        Ok(triples.into_iter().map(|[a, b, n]| ((a, b), n)).collect())
    }
}

impl SignatureClass {
    pub fn distinct(&self) -> Vec<(usize, usize)> {
        self.counts.keys().copied().collect()
    }
}

/// Classifies every table entry by Pauli type and qubit location and
/// tallies how many `S₁` and `S₂` checks it trips. Classes are returned in
/// the order X, Z, Y on data, then on `S₁`, then on `S₂`.
pub fn signature_profile(table: &SyndromeTable, tags: &PartitionTags) -> Result<Vec<SignatureClass>> {
    let num_parity = table.num_qubits - table.num_data;
    if !tags.covers(num_parity) {
        return Err(Error::InvalidState(format!(
            "partition tags do not cover the {num_parity} parity qubits"
        )));
    }
    let mut classes = Vec::new();
    for location in [Location::Data, Location::S1, Location::S2] {
        for pauli in TABLE_ORDER {
            classes.push(SignatureClass {
                pauli,
                location,
                counts: BTreeMap::new(),
            });
        }
    }
    for entry in &table.entries {
        let location = if entry.qubit < table.num_data {
            Location::Data
        } else if tags.s1.contains(&(entry.qubit - table.num_data)) {
            Location::S1
        } else {
            Location::S2
        };
        let bits = entry.syndrome.bits();
        let in_s1 = tags.s1.iter().filter(|&&i| bits.get(i)).count();
        let in_s2 = tags.s2.iter().filter(|&&i| bits.get(i)).count();
        let class = classes
            .iter_mut()
            .find(|c| c.pauli == entry.pauli && c.location == location)
            .expect("every class present");
        *class.counts.entry((in_s1, in_s2)).or_default() += 1;
    }
    Ok(classes)
}
