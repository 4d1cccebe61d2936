//! Code design: combine a bit-flip and a phase-flip classical code into a
//! preliminary quantum code, then add cross-checks by hand or by search
//! until a target distance is reached.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::analysis::{distance_with, syndrome_table, DistanceReport, PartitionTags, MAX_DISTANCE_WEIGHT};
use crate::classical::ClassicalCode;
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::gf2::BitMatrix;
use crate::graph::{EdgeKind, OperationalGraph, Qubit};
use crate::stabilizer::{CpcAdjacency, QuantumParityMatrix};
use crate::translation::{translate, ClassicalFactorGraph};

/// Parity counts up to which [`search_cross_checks`] is exhaustive.
pub const MAX_EXHAUSTIVE_PARITY: usize = 8;

/// Candidate sets examined when no budget is given.
pub const DEFAULT_SEARCH_BUDGET: usize = 1 << 20;

const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditRecord {
    pub kind: EdgeKind,
    pub a: Qubit,
    pub b: Qubit,
}

/// A graph under construction together with its edit history.
///
/// The graph is always annotated. `base` is the graph the session started
/// from; replaying `history` over it reproduces `graph` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SessionRepr", into = "SessionRepr")]
pub struct DesignSession {
    name: String,
    base: OperationalGraph,
    graph: OperationalGraph,
    tags: PartitionTags,
    history: Vec<EditRecord>,
    target_distance: Option<usize>,
}

impl DesignSession {
    /// Preliminary code: data qubits shared, bit-code checks become parity
    /// qubits in `S₁` joined by bit edges, phase-code checks become parity
    /// qubits in `S₂` joined by phase edges. No cross edges.
    pub fn combine(bit_code: &ClassicalCode, phase_code: &ClassicalCode) -> Result<Self> {
        if bit_code.k() != phase_code.k() {
            return Err(Error::IncompatibleCodes(format!(
                "{} encodes {} bits but {} encodes {}",
                bit_code.name(),
                bit_code.k(),
                phase_code.name(),
                phase_code.k()
            )));
        }
        let (r1, r2) = (bit_code.num_checks(), phase_code.num_checks());
        let mut g = OperationalGraph::new(bit_code.k(), r1 + r2);
        for c in 0..r1 {
            for d in bit_code.check_support(c) {
                g.toggle_edge(EdgeKind::Bit, Qubit::Data(d), Qubit::Parity(c))?;
            }
        }
        for c in 0..r2 {
            for d in phase_code.check_support(c) {
                g.toggle_edge(EdgeKind::Phase, Qubit::Data(d), Qubit::Parity(r1 + c))?;
            }
        }
        let name = format!("{} x {}", bit_code.name(), phase_code.name());
        DesignSession::from_graph(name, g, PartitionTags::contiguous(r1, r2))
    }

    /// Session over an existing graph. Unannotated graphs are annotated;
    /// an annotated graph is taken as is.
    pub fn from_graph(name: impl Into<String>, graph: OperationalGraph, tags: PartitionTags) -> Result<Self> {
        if !tags.covers(graph.num_parity()) {
            return Err(Error::InvalidState(format!(
                "partition tags do not cover the {} parity qubits",
                graph.num_parity()
            )));
        }
        let graph = if graph.is_annotated() { graph } else { graph.annotate()? };
        Ok(DesignSession {
            name: name.into(),
            base: graph.clone(),
            graph,
            tags,
            history: Vec::new(),
            target_distance: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn graph(&self) -> &OperationalGraph {
        &self.graph
    }

    pub fn base(&self) -> &OperationalGraph {
        &self.base
    }

    pub fn tags(&self) -> &PartitionTags {
        &self.tags
    }

    pub fn history(&self) -> &[EditRecord] {
        &self.history
    }

    pub fn target_distance(&self) -> Option<usize> {
        self.target_distance
    }

    pub fn set_target_distance(&mut self, target: Option<usize>) {
        self.target_distance = target;
    }

    pub fn adjacency(&self) -> CpcAdjacency {
        CpcAdjacency::from_graph(&self.graph)
    }

    pub fn quantum(&self) -> QuantumParityMatrix {
        QuantumParityMatrix::from_graph(&self.graph).expect("graph adjacency is always valid")
    }

    pub fn factor_graph(&self) -> ClassicalFactorGraph {
        translate(&self.graph).expect("session graphs are annotated")
    }

    /// Toggles one physical edge and records it. Virtual edges are derived
    /// from the physical ones and cannot be edited here.
    pub fn toggle_edge(&mut self, kind: EdgeKind, a: Qubit, b: Qubit) -> Result<()> {
        if matches!(kind, EdgeKind::Virtual | EdgeKind::VirtualLoop) {
            return Err(Error::Role(format!(
                "{} edges are derived from the physical edges and cannot be toggled directly",
                kind.name()
            )));
        }
        self.graph.toggle_edge(kind, a, b)?;
        self.history.push(EditRecord { kind, a, b });
        Ok(())
    }

    /// Toggles a cross edge for each pair. All or nothing: on error the
    /// session is unchanged.
    pub fn apply_cross_checks(&mut self, pairs: &[(usize, usize)]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &(a, b) in pairs {
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::Endpoint(format!("cross pair (p{}, p{}) listed twice", a + 1, b + 1)));
            }
        }
        let mut next = self.clone();
        for &(a, b) in pairs {
            next.toggle_edge(EdgeKind::Cross, Qubit::Parity(a), Qubit::Parity(b))?;
        }
        *self = next;
        Ok(())
    }

    /// Reverts the last edit.
    pub fn undo(&mut self) -> Option<EditRecord> {
        let last = self.history.pop()?;
        self.graph = self.replay().expect("history replayed before");
        Some(last)
    }

    /// Graph obtained by applying the history to the base graph.
    pub fn replay(&self) -> Result<OperationalGraph> {
        let mut g = self.base.clone();
        for e in &self.history {
            g.toggle_edge(e.kind, e.a, e.b)?;
        }
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
struct SessionRepr {
    name: String,
    base: OperationalGraph,
    graph: OperationalGraph,
    tags: PartitionTags,
    #[serde(default)]
    history: Vec<EditRecord>,
    #[serde(default)]
    target_distance: Option<usize>,
}

impl From<DesignSession> for SessionRepr {
    fn from(s: DesignSession) -> Self {
        SessionRepr {
            name: s.name,
            base: s.base,
            graph: s.graph,
            tags: s.tags,
            history: s.history,
            target_distance: s.target_distance,
        }
    }
}

impl TryFrom<SessionRepr> for DesignSession {
    type Error = Error;

    fn try_from(r: SessionRepr) -> Result<Self> {
        if !r.base.is_annotated() {
            return Err(Error::Inconsistent("session base graph is not annotated".into()));
        }
        if !r.tags.covers(r.base.num_parity()) {
            return Err(Error::Inconsistent("partition tags do not cover the parity qubits".into()));
        }
        let s = DesignSession {
            name: r.name,
            base: r.base,
            graph: r.graph,
            tags: r.tags,
            history: r.history,
            target_distance: r.target_distance,
        };
        if s.replay()? != s.graph {
            return Err(Error::Inconsistent("history does not replay to the stored graph".into()));
        }
        Ok(s)
    }
}

/// Cross-check matrix implied by the Z-error syndromes of the parity
/// qubits: column `j` of `zsyndromes` is the syndrome of Z on parity `j`,
/// which equals column `j` of `m_bᵀ·m_p ⊕ m_c`.
pub fn recover_mc_from_syndromes(zsyndromes: &BitMatrix, adj: &CpcAdjacency) -> Result<BitMatrix> {
    let m = adj.num_parity();
    if zsyndromes.rows() != m || zsyndromes.cols() != m {
        return Err(Error::shape(format!(
            "expected a {m}x{m} syndrome matrix, got {}x{}",
            zsyndromes.rows(),
            zsyndromes.cols()
        )));
    }
    let m_c = zsyndromes.xor(&adj.propagation_matrix())?;
    if let Some(p) = (0..m).find(|&p| m_c.get(p, p)) {
        return Err(Error::Inconsistent(format!(
            "syndromes imply a cross-check from p{} to itself",
            p + 1
        )));
    }
    if !m_c.is_symmetric() {
        let (i, j) = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .find(|&(i, j)| m_c.get(i, j) != m_c.get(j, i))
            .expect("asymmetric");
        return Err(Error::Inconsistent(format!(
            "syndromes imply a one-way cross-check between p{} and p{}",
            j + 1,
            i + 1
        )));
    }
    Ok(m_c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStrategy {
    Exhaustive,
    Greedy,
}

/// Result of [`search_cross_checks`]. `pairs` are cross edges to toggle on
/// the session graph; when `found` is false they are the best set seen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub found: bool,
    pub target: usize,
    pub pairs: Vec<(usize, usize)>,
    /// Verified distance of the session with `pairs` applied, enumerated up
    /// to weight `target - 1`.
    pub distance: DistanceReport,
    pub strategy: SearchStrategy,
    pub examined: usize,
    /// Every candidate set was examined, so a failure is conclusive.
    pub complete: bool,
}

struct Evaluator {
    base: CpcAdjacency,
    candidates: Vec<(usize, usize)>,
    target: usize,
}

impl Evaluator {
    fn adjacency(&self, chosen: &[usize]) -> CpcAdjacency {
        let mut adj = self.base.clone();
        for &c in chosen {
            let (a, b) = self.candidates[c];
            adj.m_c.flip(a, b);
            adj.m_c.flip(b, a);
        }
        adj
    }

    fn quantum(&self, chosen: &[usize]) -> QuantumParityMatrix {
        self.adjacency(chosen)
            .quantum_parity_matrix()
            .expect("toggling symmetric pairs keeps m_c valid")
    }

    fn distance(&self, chosen: &[usize]) -> DistanceReport {
        distance_with(&self.quantum(chosen), self.target - 1, Execution::Sequential).expect("weight within limit")
    }

    /// Single-qubit errors whose syndrome is zero or shared with another.
    fn collisions(&self, chosen: &[usize]) -> usize {
        let table = syndrome_table(&self.quantum(chosen));
        let mut counts: HashMap<String, usize> = HashMap::new();
        for e in &table.entries {
            *counts.entry(e.syndrome.to_string()).or_default() += 1;
        }
        table
            .entries
            .iter()
            .filter(|e| e.syndrome.is_trivial() || counts[&e.syndrome.to_string()] > 1)
            .count()
    }

    fn pairs(&self, chosen: &[usize]) -> Vec<(usize, usize)> {
        chosen.iter().map(|&c| self.candidates[c]).collect()
    }
}

/// Looks for a set of cross edges whose addition gives distance at least
/// `target`.
///
/// With at most [`MAX_EXHAUSTIVE_PARITY`] parity qubits every subset of
/// parity pairs is tried, smallest first and lexicographically within a
/// size, so the first hit is a smallest solution. Larger codes use a greedy
/// walk that adds the pair leaving the fewest colliding or undetected
/// single-qubit syndromes. Any set reported as found has been checked by
/// brute-force distance enumeration.
pub fn search_cross_checks(
    session: &DesignSession,
    target: usize,
    budget: usize,
    exec: Execution,
) -> Result<SearchReport> {
    if target == 0 || target > MAX_DISTANCE_WEIGHT + 1 {
        return Err(Error::Range(format!(
            "target distance {target} outside 1..={}",
            MAX_DISTANCE_WEIGHT + 1
        )));
    }
    let m = session.graph().num_parity();
    let candidates: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let eval = Evaluator {
        base: session.adjacency(),
        candidates,
        target,
    };
    if m <= MAX_EXHAUSTIVE_PARITY {
        Ok(exhaustive(&eval, budget.max(1), exec))
    } else {
        Ok(greedy(&eval, budget.max(1), exec))
    }
}

fn exhaustive(eval: &Evaluator, budget: usize, exec: Execution) -> SearchReport {
    let total = eval.candidates.len();
    let mut examined = 0;
    let mut best: Option<(Vec<usize>, DistanceReport)> = None;
    'sizes: for size in 0..=total {
        let mut combos = Combinations::new(total, size);
        loop {
            let room = CHUNK.min(budget - examined);
            let chunk: Vec<Vec<usize>> = combos.by_ref().take(room).collect();
            if chunk.is_empty() {
                break;
            }
            examined += chunk.len();
            let reports = map_range(exec, 0..chunk.len(), |i| eval.distance(&chunk[i]));
            for (chosen, report) in chunk.into_iter().zip(reports) {
                if report.at_least(eval.target) {
                    return SearchReport {
                        found: true,
                        target: eval.target,
                        pairs: eval.pairs(&chosen),
                        distance: report,
                        strategy: SearchStrategy::Exhaustive,
                        examined,
                        complete: false,
                    };
                }
                if best.as_ref().is_none_or(|(_, b)| report.lower_bound() > b.lower_bound()) {
                    best = Some((chosen, report));
                }
            }
            if examined == budget {
                break 'sizes;
            }
        }
    }
    let (chosen, distance) = best.expect("the empty set is always examined");
    SearchReport {
        found: false,
        target: eval.target,
        pairs: eval.pairs(&chosen),
        distance,
        strategy: SearchStrategy::Exhaustive,
        examined,
        complete: examined == 1usize.checked_shl(total as u32).unwrap_or(usize::MAX),
    }
}

fn greedy(eval: &Evaluator, budget: usize, exec: Execution) -> SearchReport {
    let mut chosen: Vec<usize> = Vec::new();
    let mut score = eval.collisions(&chosen);
    let mut examined = 1;
    loop {
        let report = eval.distance(&chosen);
        let done = report.at_least(eval.target);
        let open: Vec<usize> = (0..eval.candidates.len()).filter(|c| !chosen.contains(c)).collect();
        if done || open.is_empty() || examined + open.len() > budget {
            let mut pairs = eval.pairs(&chosen);
            pairs.sort_unstable();
            return SearchReport {
                found: done,
                target: eval.target,
                pairs,
                distance: report,
                strategy: SearchStrategy::Greedy,
                examined,
                complete: false,
            };
        }
        let scores = map_range(exec, 0..open.len(), |i| {
            let mut trial = chosen.clone();
            trial.push(open[i]);
            eval.collisions(&trial)
        });
        examined += open.len();
        // min_by_key keeps the first minimum, which is the smallest pair
        let (i, &best) = scores.iter().enumerate().min_by_key(|&(_, s)| *s).expect("open is nonempty");
        if best >= score {
            let mut pairs = eval.pairs(&chosen);
            pairs.sort_unstable();
            return SearchReport {
                found: false,
                target: eval.target,
                pairs,
                distance: report,
                strategy: SearchStrategy::Greedy,
                examined,
                complete: false,
            };
        }
        chosen.push(open[i]);
        score = best;
    }
}

/// `size`-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, size: usize) -> Self {
        Combinations {
            n,
            current: (size <= n).then(|| (0..size).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().expect("checked above");
        let k = c.len();
        match (0..k).rev().find(|&i| c[i] < self.n - k + i) {
            Some(i) => {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
            }
            None => self.current = None,
        }
        Some(out)
    }
}
