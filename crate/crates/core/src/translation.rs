//! Translation of an annotated operational graph into a classical factor
//! graph.
//!
//! Each qubit becomes two binary variables, its bit (X) and phase (Z)
//! components. Each parity qubit additionally owns a check node: its bit
//! component is what gets measured, so an X error on a parity qubit flips
//! its own check. Columns of the check matrix are ordered
//! `[data bit | data phase | parity bit | parity phase]`.
//!
//! Edge rules, all applied mod 2:
//!
//! | operational edge        | factor-graph edge                         |
//! |-------------------------|-------------------------------------------|
//! | bit-check `(D, P)`      | check `P` -- `D.bit`                       |
//! | phase-check `(D, P)`    | check `P` -- `D.phase`                     |
//! | linked `{P₁, P₂}`       | check `P₂` -- `P₁.phase`, check `P₁` -- `P₂.phase` |
//! | virtual `Pₛ → Pₜ`       | check `Pₜ` -- `Pₛ.phase`                   |
//! | virtual loop on `P`     | check `P` -- `P.phase`                     |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::graph::{OperationalGraph, Qubit};
use crate::stabilizer::PauliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Bit,
    Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Variable {
    pub qubit: Qubit,
    pub component: Component,
}

impl std::fmt::Display for Variable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self.component {
            Component::Bit => "bit",
            Component::Phase => "phase",
        };
        write!(f, "{}.{c}", self.qubit)
    }
}

/// Which translation rule produced an entry of the check matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    BitCheck,
    PhaseCheck,
    Linked,
    Virtual,
    VirtualLoop,
    OwnMeasurement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalFactorGraph {
    num_data: usize,
    num_parity: usize,
    variables: Vec<Variable>,
    h: BitMatrix,
}

impl ClassicalFactorGraph {
    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn num_parity(&self) -> usize {
        self.num_parity
    }

    /// Check matrix, one row per parity qubit.
    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn column_of(&self, v: Variable) -> usize {
        let (k, m) = (self.num_data, self.num_parity);
        match (v.qubit, v.component) {
            (Qubit::Data(d), Component::Bit) => d,
            (Qubit::Data(d), Component::Phase) => k + d,
            (Qubit::Parity(p), Component::Bit) => 2 * k + p,
            (Qubit::Parity(p), Component::Phase) => 2 * k + m + p,
        }
    }

    /// Component-flip vector of a Pauli error; Y flips both components.
    pub fn flip_vector(&self, e: &PauliError) -> Result<BitVec> {
        let (k, m) = (self.num_data, self.num_parity);
        if e.n() != k + m {
            return Err(Error::shape(format!(
                "error on {} qubits for a {}-qubit factor graph",
                e.n(),
                k + m
            )));
        }
        let mut v = BitVec::zeros(2 * (k + m));
        for q in e.x.ones() {
            let qubit = if q < k { Qubit::Data(q) } else { Qubit::Parity(q - k) };
            v.set(self.column_of(Variable { qubit, component: Component::Bit }), true);
        }
        for q in e.z.ones() {
            let qubit = if q < k { Qubit::Data(q) } else { Qubit::Parity(q - k) };
            v.set(self.column_of(Variable { qubit, component: Component::Phase }), true);
        }
        Ok(v)
    }

    /// Check outcomes flipped by `e`.
    pub fn syndrome(&self, e: &PauliError) -> Result<BitVec> {
        self.h.mul_vec(&self.flip_vector(e)?)
    }

    /// Variables no check looks at; errors there go undetected.
    pub fn unconnected_variables(&self) -> Vec<Variable> {
        let t = self.h.transpose();
        self.variables
            .iter()
            .enumerate()
            .filter(|(c, _)| t.row(*c).is_zero())
            .map(|(_, v)| *v)
            .collect()
    }

    /// `(check, variable)` pairs, in row-major order.
    pub fn edges(&self) -> Vec<(usize, Variable)> {
        (0..self.h.rows())
            .flat_map(|r| self.h.row(r).ones().map(move |c| (r, c)))
            .map(|(r, c)| (r, self.variables[c]))
            .collect()
    }

    /// Minimum number of variables whose joint flip leaves every check
    /// satisfied, searched up to `max_weight`. `None` if none exists.
    pub fn min_undetected_weight(&self, max_weight: usize) -> Option<usize> {
        let columns: Vec<BitVec> = (0..self.h.cols()).map(|c| self.h.column(c)).collect();
        let mut acc = BitVec::zeros(self.h.rows());
        (1..=max_weight.min(columns.len())).find(|&w| zero_sum_exists(&columns, w, 0, &mut acc))
    }
}

fn zero_sum_exists(columns: &[BitVec], remaining: usize, start: usize, acc: &mut BitVec) -> bool {
    if remaining == 0 {
        return acc.is_zero();
    }
    for c in start..columns.len() {
        acc.xor_assign(&columns[c]);
        let hit = zero_sum_exists(columns, remaining - 1, c + 1, acc);
        acc.xor_assign(&columns[c]);
        if hit {
            return true;
        }
    }
    false
}

/// Applies the translation rules to an annotated graph.
pub fn translate(g: &OperationalGraph) -> Result<ClassicalFactorGraph> {
    Ok(translate_with_provenance(g)?.0)
}

/// One rule application: `(rule, check row, column)`.
pub type Provenance = (Rule, usize, usize);

/// Like [`translate`], also listing every rule application.
/// XOR-ing the listed entries reproduces `h`.
pub fn translate_with_provenance(g: &OperationalGraph) -> Result<(ClassicalFactorGraph, Vec<Provenance>)> {
    if !g.is_annotated() {
        return Err(Error::InvalidState("translation needs an annotated graph".into()));
    }
    let (k, m) = (g.num_data(), g.num_parity());
    let mut variables = Vec::with_capacity(2 * (k + m));
    for component in [Component::Bit, Component::Phase] {
        variables.extend((0..k).map(|d| Variable { qubit: Qubit::Data(d), component }));
    }
    for component in [Component::Bit, Component::Phase] {
        variables.extend((0..m).map(|p| Variable { qubit: Qubit::Parity(p), component }));
    }
    let data_bit = |d: usize| d;
    let data_phase = |d: usize| k + d;
    let parity_bit = |p: usize| 2 * k + p;
    let parity_phase = |p: usize| 2 * k + m + p;

    let mut applied = Vec::new();
    for &(d, p) in g.bit_edges() {
        applied.push((Rule::BitCheck, p, data_bit(d)));
    }
    for &(d, p) in g.phase_edges() {
        applied.push((Rule::PhaseCheck, p, data_phase(d)));
    }
    for &(a, b) in g.linked_pairs() {
        applied.push((Rule::Linked, b, parity_phase(a)));
        applied.push((Rule::Linked, a, parity_phase(b)));
    }
    for &(s, t) in g.virtual_edges() {
        applied.push((Rule::Virtual, t, parity_phase(s)));
    }
    for &p in g.virtual_loops() {
        applied.push((Rule::VirtualLoop, p, parity_phase(p)));
    }
    for p in 0..m {
        applied.push((Rule::OwnMeasurement, p, parity_bit(p)));
    }

    let mut h = BitMatrix::zeros(m, 2 * (k + m));
    for &(_, r, c) in &applied {
        h.flip(r, c);
    }
    Ok((
        ClassicalFactorGraph {
            num_data: k,
            num_parity: m,
            variables,
            h,
        },
        applied,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeKind;
    use crate::stabilizer::{Pauli, QuantumParityMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use Qubit::{Data as D, Parity as P};

    fn preliminary_421() -> OperationalGraph {
        let mut g = OperationalGraph::new(2, 2);
        for d in 0..2 {
            g.toggle_edge(EdgeKind::Bit, D(d), P(0)).unwrap();
            g.toggle_edge(EdgeKind::Phase, D(d), P(1)).unwrap();
        }
        g
    }

    fn names(vs: impl IntoIterator<Item = Variable>) -> Vec<String> {
        vs.into_iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn detection_code_factor_graph() {
        let g = preliminary_421().edge_toggle(EdgeKind::Cross, P(0), P(1)).unwrap().annotate().unwrap();
        let cfg = translate(&g).unwrap();
        let touching = |check: usize| {
            let mut v: Vec<String> = cfg
                .edges()
                .into_iter()
                .filter(|&(c, v)| c == check && v.qubit != Qubit::Parity(check))
                .map(|(_, v)| v.to_string())
                .collect();
            v.sort();
            v
        };
        assert_eq!(touching(0), vec!["D1.bit", "D2.bit", "p2.phase"]);
        assert_eq!(touching(1), vec!["D1.phase", "D2.phase", "p1.phase"]);
        assert!(cfg.unconnected_variables().is_empty());
    }

    #[test]
    fn preliminary_code_leaves_parity_phases_unchecked() {
        let cfg = translate(&preliminary_421().annotate().unwrap()).unwrap();
        assert_eq!(names(cfg.unconnected_variables()), vec!["p1.phase", "p2.phase"]);
        assert_eq!(cfg.min_undetected_weight(3), Some(1));
    }

    #[test]
    fn empty_graph() {
        let cfg = translate(&OperationalGraph::new(0, 0).annotate().unwrap()).unwrap();
        assert_eq!((cfg.h().rows(), cfg.h().cols()), (0, 0));
        assert!(cfg.unconnected_variables().is_empty());
    }

    #[test]
    fn unannotated_input_is_rejected() {
        assert!(matches!(translate(&preliminary_421()), Err(Error::InvalidState(_))));
    }

    #[test]
    fn provenance_reproduces_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = OperationalGraph::random(&mut rng, 4, 4, 0.5).annotate().unwrap();
            let (cfg, applied) = translate_with_provenance(&g).unwrap();
            let mut h = BitMatrix::zeros(cfg.h().rows(), cfg.h().cols());
            for (_, r, c) in applied {
                h.flip(r, c);
            }
            assert_eq!(&h, cfg.h());
            // parity-bit block is the identity
            assert_eq!(cfg.h().column_block(8, 4), BitMatrix::identity(4));
        }
    }

    #[test]
    fn applying_a_rule_twice_cancels() {
        let g = preliminary_421().annotate().unwrap();
        let twice = g
            .edge_toggle(EdgeKind::Cross, P(0), P(1))
            .unwrap()
            .edge_toggle(EdgeKind::Cross, P(0), P(1))
            .unwrap();
        assert_eq!(translate(&twice).unwrap(), translate(&g).unwrap());
    }

    #[test]
    fn factor_graph_syndromes_match_stabilizers_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let g = OperationalGraph::random(&mut rng, 3, 4, 0.5).annotate().unwrap();
            let cfg = translate(&g).unwrap();
            let q = QuantumParityMatrix::from_graph(&g).unwrap();
            for qubit in 0..7 {
                for p in Pauli::ALL {
                    let e = PauliError::single(7, qubit, p);
                    assert_eq!(cfg.syndrome(&e).unwrap(), q.syndrome(&e).unwrap());
                }
            }
        }
    }
}
