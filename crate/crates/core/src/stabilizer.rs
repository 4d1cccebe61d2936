//! Adjacency matrices of a CPC code and its quantum parity-check matrix.
//!
//! With `m_b`, `m_p` (data × parity) and `m_c` (parity × parity) the
//! stabilizer matrix is
//!
//! ```text
//! G_X = ( m_pᵀ | m_bᵀ·m_p ⊕ m_c )      G_Z = ( m_bᵀ | 1 )
//! ```
//!
//! with columns ordered data qubits first, then parity qubits. Row `i` is
//! the stabilizer measured by parity qubit `i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::graph::OperationalGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpcAdjacency {
    pub m_b: BitMatrix,
    pub m_p: BitMatrix,
    pub m_c: BitMatrix,
}

impl CpcAdjacency {
    pub fn new(m_b: BitMatrix, m_p: BitMatrix, m_c: BitMatrix) -> Result<Self> {
        let adj = CpcAdjacency { m_b, m_p, m_c };
        adj.validate()?;
        Ok(adj)
    }

    pub fn num_data(&self) -> usize {
        self.m_b.rows()
    }

    pub fn num_parity(&self) -> usize {
        self.m_b.cols()
    }

    fn validate(&self) -> Result<()> {
        let (k, m) = (self.m_b.rows(), self.m_b.cols());
        if self.m_p.rows() != k || self.m_p.cols() != m {
            return Err(Error::shape(format!(
                "m_p is {}x{} but m_b is {k}x{m}",
                self.m_p.rows(),
                self.m_p.cols()
            )));
        }
        if self.m_c.rows() != m || self.m_c.cols() != m {
            return Err(Error::shape(format!(
                "m_c is {}x{} but there are {m} parity qubits",
                self.m_c.rows(),
                self.m_c.cols()
            )));
        }
        if !self.m_c.is_symmetric() || !self.m_c.has_zero_diagonal() {
            return Err(Error::shape("m_c must be symmetric with a zero diagonal"));
        }
        Ok(())
    }

    /// Physical-edge incidence of a graph; the annotation layer is ignored.
    pub fn from_graph(g: &OperationalGraph) -> Self {
        let (k, m) = (g.num_data(), g.num_parity());
        let mut m_b = BitMatrix::zeros(k, m);
        let mut m_p = BitMatrix::zeros(k, m);
        let mut m_c = BitMatrix::zeros(m, m);
        for &(d, p) in g.bit_edges() {
            m_b.set(d, p, true);
        }
        for &(d, p) in g.phase_edges() {
            m_p.set(d, p, true);
        }
        for &(a, b) in g.cross_edges() {
            m_c.set(a, b, true);
            m_c.set(b, a, true);
        }
        CpcAdjacency { m_b, m_p, m_c }
    }

    /// `m_bᵀ·m_p`: Z errors on phase-check parities reaching bit-check parities
    /// through the data register.
    pub fn propagation_matrix(&self) -> BitMatrix {
        self.m_b.transpose().mul(&self.m_p).expect("validated shapes")
    }

    /// `m_bᵀ·m_p ⊕ m_c`; entry `(i, j)` is set iff Z on parity `j` flips parity `i`.
    pub fn detection_matrix(&self) -> BitMatrix {
        self.propagation_matrix().xor(&self.m_c).expect("validated shapes")
    }

    pub fn quantum_parity_matrix(&self) -> Result<QuantumParityMatrix> {
        self.validate()?;
        let g_x = self.m_p.transpose().hstack(&self.detection_matrix())?;
        let g_z = self.m_b.transpose().hstack(&BitMatrix::identity(self.num_parity()))?;
        QuantumParityMatrix::new(self.num_data(), g_x, g_z)
    }
}

/// Shorthand for `CpcAdjacency::from_graph`.
pub fn extract_adjacency(g: &OperationalGraph) -> CpcAdjacency {
    CpcAdjacency::from_graph(g)
}

/// `G_XZ = (G_X | G_Z)`, one row per stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumParityMatrix {
    num_data: usize,
    g_x: BitMatrix,
    g_z: BitMatrix,
}

impl QuantumParityMatrix {
    pub fn new(num_data: usize, g_x: BitMatrix, g_z: BitMatrix) -> Result<Self> {
        if g_x.rows() != g_z.rows() || g_x.cols() != g_z.cols() {
            return Err(Error::shape(format!(
                "G_X is {}x{} but G_Z is {}x{}",
                g_x.rows(),
                g_x.cols(),
                g_z.rows(),
                g_z.cols()
            )));
        }
        if num_data > g_x.cols() {
            return Err(Error::shape("more data qubits than columns"));
        }
        Ok(QuantumParityMatrix { num_data, g_x, g_z })
    }

    pub fn from_graph(g: &OperationalGraph) -> Result<Self> {
        CpcAdjacency::from_graph(g).quantum_parity_matrix()
    }

    /// Number of qubits.
    pub fn n(&self) -> usize {
        self.g_x.cols()
    }

    /// Number of stabilizer rows.
    pub fn m(&self) -> usize {
        self.g_x.rows()
    }

    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn g_x(&self) -> &BitMatrix {
        &self.g_x
    }

    pub fn g_z(&self) -> &BitMatrix {
        &self.g_z
    }

    /// `(G_X | G_Z)` as one matrix.
    pub fn stacked(&self) -> BitMatrix {
        self.g_x.hstack(&self.g_z).expect("equal row counts")
    }

    /// Row `i` as `"xxxx|zzzz"`.
    pub fn row_string(&self, i: usize) -> String {
        format!("{}|{}", self.g_x.row(i), self.g_z.row(i))
    }

    /// `G_X·G_Zᵀ ⊕ G_Z·G_Xᵀ`.
    pub fn commutator(&self) -> BitMatrix {
        let a = self.g_x.mul(&self.g_z.transpose()).expect("shapes agree");
        let b = self.g_z.mul(&self.g_x.transpose()).expect("shapes agree");
        a.xor(&b).expect("shapes agree")
    }

    /// Whether every pair of rows commutes.
    pub fn check_commutation(&self) -> bool {
        self.commutator().is_zero()
    }

    /// Number of independent stabilizer generators.
    pub fn rank(&self) -> usize {
        self.stacked().rank()
    }

    /// `n − rank`.
    pub fn logical_qubits(&self) -> usize {
        self.n() - self.rank()
    }

    /// Default labels `D1..Dk p1..pm`.
    pub fn default_labels(&self) -> Vec<String> {
        (1..=self.num_data)
            .map(|i| format!("D{i}"))
            .chain((1..=self.n() - self.num_data).map(|i| format!("p{i}")))
            .collect()
    }

    /// Each row as a product of single-qubit Paulis, e.g. `Z_D1 Z_D2 Z_p1 X_p2`.
    /// An all-identity row renders as `I`.
    pub fn pauli_strings(&self, labels: &[String]) -> Result<Vec<String>> {
        if labels.len() != self.n() {
            return Err(Error::shape(format!(
                "{} labels for {} qubits",
                labels.len(),
                self.n()
            )));
        }
        Ok((0..self.m())
            .map(|r| {
                let op = PauliError::new(self.g_x.row(r).clone(), self.g_z.row(r).clone())
                    .expect("rows have equal length");
                op.render(labels)
            })
            .collect())
    }

    /// Syndrome bit `i = g_x[i]·e.z ⊕ g_z[i]·e.x`.
    pub fn syndrome(&self, e: &PauliError) -> Result<BitVec> {
        if e.n() != self.n() {
            return Err(Error::shape(format!(
                "error on {} qubits for a {}-qubit code",
                e.n(),
                self.n()
            )));
        }
        let mut s = BitVec::zeros(self.m());
        for i in 0..self.m() {
            if self.g_x.row(i).dot(&e.z) ^ self.g_z.row(i).dot(&e.x) {
                s.set(i, true);
            }
        }
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        })
    }
}

impl std::str::FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Pauli::X),
            "Y" | "y" => Ok(Pauli::Y),
            "Z" | "z" => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("unknown Pauli {other:?}"))),
        }
    }
}

/// An n-qubit Pauli operator up to phase, as an `(x, z)` pair.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliError {
    pub x: BitVec,
    pub z: BitVec,
}

impl PauliError {
    pub fn new(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::shape(format!("x part has {} bits, z part {}", x.len(), z.len())));
        }
        Ok(PauliError { x, z })
    }

    pub fn identity(n: usize) -> Self {
        PauliError {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut e = PauliError::identity(n);
        e.apply(qubit, p);
        e
    }

    /// Multiplies `p` onto `qubit` (phases dropped).
    pub fn apply(&mut self, qubit: usize, p: Pauli) {
        if p.has_x() {
            self.x.flip(qubit);
        }
        if p.has_z() {
            self.z.flip(qubit);
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn at(&self, qubit: usize) -> Option<Pauli> {
        match (self.x.get(qubit), self.z.get(qubit)) {
            (false, false) => None,
            (true, false) => Some(Pauli::X),
            (false, true) => Some(Pauli::Z),
            (true, true) => Some(Pauli::Y),
        }
    }

    pub fn compose(&self, other: &PauliError) -> PauliError {
        let mut out = self.clone();
        out.x.xor_assign(&other.x);
        out.z.xor_assign(&other.z);
        out
    }

    /// Symplectic vector `x ‖ z`, matching the column layout of `(G_X | G_Z)`.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Lexicographic order on `(x, z)`, bit 0 first.
    pub fn lex_cmp(&self, other: &PauliError) -> std::cmp::Ordering {
        self.x.lex_cmp(&other.x).then_with(|| self.z.lex_cmp(&other.z))
    }

    pub fn render(&self, labels: &[String]) -> String {
        let parts: Vec<String> = (0..self.n())
            .filter_map(|q| self.at(q).map(|p| format!("{p}_{}", labels[q])))
            .collect();
        if parts.is_empty() {
            "I".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Debug for PauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n())
            .map(|q| match self.at(q) {
                None => 'I',
                Some(Pauli::X) => 'X',
                Some(Pauli::Y) => 'Y',
                Some(Pauli::Z) => 'Z',
            })
            .collect();
        write!(f, "PauliError({s})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn adjacency_422() -> CpcAdjacency {
        CpcAdjacency::new(
            BitMatrix::from_dense(&[[1, 0], [1, 0]]),
            BitMatrix::from_dense(&[[0, 1], [0, 1]]),
            BitMatrix::from_dense(&[[0, 1], [1, 0]]),
        )
        .unwrap()
    }

    #[test]
    fn detection_code_rows_and_strings() {
        let q = adjacency_422().quantum_parity_matrix().unwrap();
        assert_eq!(q.row_string(0), "0001|1110");
        assert_eq!(q.row_string(1), "1110|0001");
        assert!(q.check_commutation());
        assert_eq!(q.logical_qubits(), 2);
        let s = q.pauli_strings(&q.default_labels()).unwrap();
        assert_eq!(s, vec!["Z_D1 Z_D2 Z_p1 X_p2", "X_D1 X_D2 X_p1 Z_p2"]);
    }

    #[test]
    fn empty_adjacency_gives_parity_z_stabilizers() {
        let adj = CpcAdjacency::new(BitMatrix::zeros(1, 2), BitMatrix::zeros(1, 2), BitMatrix::zeros(2, 2)).unwrap();
        let q = adj.quantum_parity_matrix().unwrap();
        assert!(q.g_x().is_zero());
        assert_eq!(q.g_z().to_string(), "010\n001");
        assert_eq!(q.pauli_strings(&q.default_labels()).unwrap(), vec!["Z_p1", "Z_p2"]);
    }

    #[test]
    fn identity_row_renders_as_i() {
        let q = QuantumParityMatrix::new(1, BitMatrix::zeros(1, 2), BitMatrix::zeros(1, 2)).unwrap();
        assert_eq!(q.pauli_strings(&q.default_labels()).unwrap(), vec!["I"]);
        assert!(q.pauli_strings(&["a".into()]).is_err());
    }

    #[test]
    fn anticommuting_rows_are_detected() {
        let g_x = BitMatrix::from_dense(&[[1, 0], [0, 1]]);
        let g_z = BitMatrix::from_dense(&[[0, 1], [1, 0]]);
        // X⊗Z and Z⊗X: symplectic product 1·1 ⊕ 1·1 = 0, so they commute
        let q = QuantumParityMatrix::new(0, g_x, g_z).unwrap();
        assert!(q.check_commutation());
        // X⊗Z and Z⊗I anticommute
        let q = QuantumParityMatrix::new(
            0,
            BitMatrix::from_dense(&[[1, 0], [0, 0]]),
            BitMatrix::from_dense(&[[0, 1], [1, 0]]),
        )
        .unwrap();
        assert!(!q.check_commutation());
    }

    #[test]
    fn adjacency_validation() {
        assert!(CpcAdjacency::new(BitMatrix::zeros(2, 2), BitMatrix::zeros(2, 3), BitMatrix::zeros(2, 2)).is_err());
        assert!(CpcAdjacency::new(
            BitMatrix::zeros(2, 2),
            BitMatrix::zeros(2, 2),
            BitMatrix::from_dense(&[[0, 1], [0, 0]])
        )
        .is_err());
        assert!(CpcAdjacency::new(BitMatrix::zeros(2, 2), BitMatrix::zeros(2, 2), BitMatrix::identity(2)).is_err());
    }

    #[test]
    fn pauli_error_basics() {
        let mut e = PauliError::single(4, 1, Pauli::X);
        e.apply(1, Pauli::Z);
        assert_eq!(e.at(1), Some(Pauli::Y));
        e.apply(3, Pauli::Z);
        assert_eq!(e.weight(), 2);
        assert_eq!(e.symplectic().to_string(), "01000101");
        assert_eq!(format!("{e:?}"), "PauliError(IYIZ)");
        assert!(e.compose(&e).is_identity());
    }

    fn arb_adjacency() -> impl Strategy<Value = CpcAdjacency> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(k, m)| {
            (
                proptest::collection::vec(any::<bool>(), k * m),
                proptest::collection::vec(any::<bool>(), k * m),
                proptest::collection::vec(any::<bool>(), m * m),
            )
                .prop_map(move |(b, p, c)| {
                    let mut m_b = BitMatrix::zeros(k, m);
                    let mut m_p = BitMatrix::zeros(k, m);
                    let mut m_c = BitMatrix::zeros(m, m);
                    for d in 0..k {
                        for j in 0..m {
                            m_b.set(d, j, b[d * m + j]);
                            m_p.set(d, j, p[d * m + j]);
                        }
                    }
                    for i in 0..m {
                        for j in i + 1..m {
                            let v = c[i * m + j];
                            m_c.set(i, j, v);
                            m_c.set(j, i, v);
                        }
                    }
                    CpcAdjacency::new(m_b, m_p, m_c).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn cpc_stabilizers_always_commute(adj in arb_adjacency()) {
            let q = adj.quantum_parity_matrix().unwrap();
            prop_assert!(q.check_commutation());
            prop_assert_eq!(q.g_z().column_block(adj.num_data(), adj.num_parity()), BitMatrix::identity(adj.num_parity()));
            prop_assert_eq!(q.logical_qubits(), adj.num_data());
        }

        #[test]
        fn syndrome_is_linear(adj in arb_adjacency(), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let q = adj.quantum_parity_matrix().unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rand_err = || {
                let mut e = PauliError::identity(q.n());
                for i in 0..q.n() {
                    if rng.gen_bool(0.3) { e.apply(i, Pauli::ALL[rng.gen_range(0..3)]); }
                }
                e
            };
            let (a, b) = (rand_err(), rand_err());
            let lhs = q.syndrome(&a.compose(&b)).unwrap();
            let rhs = q.syndrome(&a).unwrap().checked_xor(&q.syndrome(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
