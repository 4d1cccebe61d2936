//! Operational representation of a CPC code and its annotation engine.
//!
//! Nodes are data qubits (triangles) and parity qubits (stars); both are
//! addressed by index within their role. Physical edges are bit-checks and
//! phase-checks between a data and a parity qubit, and cross-checks between
//! two parity qubits. Every edge collection is a set with mod-2 semantics:
//! inserting an edge that is already present removes it.
//!
//! The annotation layer records where a Z error on a parity qubit ends up
//! being detected. It holds directed virtual edges, virtual self-loops and
//! *linked pairs*: symmetric detection between two parity qubits, which is
//! what a cross-check contributes and what two antiparallel virtual edges
//! add up to. The physical cross-check set is never rewritten by the
//! annotation rules; the stabilizer matrix is built from it directly.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Qubit {
    Data(usize),
    Parity(usize),
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Qubit::Data(i) => write!(f, "D{}", i + 1),
            Qubit::Parity(i) => write!(f, "p{}", i + 1),
        }
    }
}

/// Parses the display form: `D3` or `p2`, numbered from 1.
impl std::str::FromStr for Qubit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a qubit label like D1 or p2, got {s:?}"));
        let mut chars = s.trim().chars();
        let role = chars.next().ok_or_else(bad)?;
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        match role {
            'D' | 'd' => Ok(Qubit::Data(index - 1)),
            'P' | 'p' => Ok(Qubit::Parity(index - 1)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Bit,
    Phase,
    Cross,
    Virtual,
    VirtualLoop,
}

impl EdgeKind {
    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Bit => "bit",
            EdgeKind::Phase => "phase",
            EdgeKind::Cross => "cross",
            EdgeKind::Virtual => "virtual",
            EdgeKind::VirtualLoop => "virtual_loop",
        }
    }
}

impl std::str::FromStr for EdgeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bit" => EdgeKind::Bit,
            "phase" => EdgeKind::Phase,
            "cross" => EdgeKind::Cross,
            "virtual" => EdgeKind::Virtual,
            "virtual_loop" | "loop" => EdgeKind::VirtualLoop,
            other => return Err(Error::Parse(format!("unknown edge kind {other:?}"))),
        })
    }
}

/// Derived detection structure between parity qubits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationLayer {
    /// `(source, target)`: a Z error on `source` is detected at `target`.
    pub virtual_edges: BTreeSet<(usize, usize)>,
    pub virtual_loops: BTreeSet<usize>,
    /// Unordered pairs stored as `(min, max)`.
    pub linked_pairs: BTreeSet<(usize, usize)>,
}

impl AnnotationLayer {
    pub fn is_empty(&self) -> bool {
        self.virtual_edges.is_empty() && self.virtual_loops.is_empty() && self.linked_pairs.is_empty()
    }

    fn toggle_virtual(&mut self, source: usize, target: usize) {
        if source == target {
            toggle(&mut self.virtual_loops, source);
        } else {
            toggle(&mut self.virtual_edges, (source, target));
        }
    }

    /// `E[i][j] = 1` iff a Z error on parity `j` flips the outcome of parity `i`.
    fn detection_matrix(&self, m: usize) -> BitMatrix {
        let mut e = BitMatrix::zeros(m, m);
        for &(s, t) in &self.virtual_edges {
            e.flip(t, s);
        }
        for &p in &self.virtual_loops {
            e.flip(p, p);
        }
        for &(a, b) in &self.linked_pairs {
            e.flip(a, b);
            e.flip(b, a);
        }
        e
    }

    /// Canonical layer encoding a detection matrix: per unordered pair at
    /// most one of {virtual edge, reversed virtual edge, linked pair}.
    fn from_detection_matrix(e: &BitMatrix) -> Self {
        let mut layer = AnnotationLayer::default();
        let m = e.rows();
        for a in 0..m {
            if e.get(a, a) {
                layer.virtual_loops.insert(a);
            }
            for b in a + 1..m {
                match (e.get(b, a), e.get(a, b)) {
                    (true, true) => {
                        layer.linked_pairs.insert((a, b));
                    }
                    (true, false) => {
                        layer.virtual_edges.insert((a, b));
                    }
                    (false, true) => {
                        layer.virtual_edges.insert((b, a));
                    }
                    (false, false) => {}
                }
            }
        }
        layer
    }
}

fn toggle<T: Ord>(set: &mut BTreeSet<T>, item: T) {
    if !set.remove(&item) {
        set.insert(item);
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct OperationalGraph {
    num_data: usize,
    num_parity: usize,
    /// `(data, parity)`
    bit_edges: BTreeSet<(usize, usize)>,
    /// `(data, parity)`
    phase_edges: BTreeSet<(usize, usize)>,
    /// `(min, max)` parity pairs
    cross_edges: BTreeSet<(usize, usize)>,
    annotation: AnnotationLayer,
    annotated: bool,
}

impl OperationalGraph {
    pub fn new(num_data: usize, num_parity: usize) -> Self {
        OperationalGraph {
            num_data,
            num_parity,
            bit_edges: BTreeSet::new(),
            phase_edges: BTreeSet::new(),
            cross_edges: BTreeSet::new(),
            annotation: AnnotationLayer::default(),
            annotated: false,
        }
    }

    /// Random graph: each possible physical edge present with probability
    /// `density`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, num_data: usize, num_parity: usize, density: f64) -> Self {
        let mut g = OperationalGraph::new(num_data, num_parity);
        for d in 0..num_data {
            for p in 0..num_parity {
                if rng.gen_bool(density) {
                    g.bit_edges.insert((d, p));
                }
                if rng.gen_bool(density) {
                    g.phase_edges.insert((d, p));
                }
            }
        }
        for a in 0..num_parity {
            for b in a + 1..num_parity {
                if rng.gen_bool(density) {
                    g.cross_edges.insert((a, b));
                }
            }
        }
        g
    }

    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn num_parity(&self) -> usize {
        self.num_parity
    }

    pub fn num_qubits(&self) -> usize {
        self.num_data + self.num_parity
    }

    pub fn bit_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.bit_edges
    }

    pub fn phase_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.phase_edges
    }

    pub fn cross_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.cross_edges
    }

    pub fn annotation(&self) -> &AnnotationLayer {
        &self.annotation
    }

    pub fn virtual_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.annotation.virtual_edges
    }

    pub fn virtual_loops(&self) -> &BTreeSet<usize> {
        &self.annotation.virtual_loops
    }

    pub fn linked_pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.annotation.linked_pairs
    }

    pub fn is_annotated(&self) -> bool {
        self.annotated
    }

    /// Labels in column order: `D1..Dk` then `p1..pm`.
    pub fn labels(&self) -> Vec<String> {
        (0..self.num_data)
            .map(Qubit::Data)
            .chain((0..self.num_parity).map(Qubit::Parity))
            .map(|q| q.to_string())
            .collect()
    }

    /// Detection matrix described by the annotation layer.
    pub fn detection_matrix(&self) -> BitMatrix {
        self.annotation.detection_matrix(self.num_parity)
    }

    fn check_data(&self, d: usize) -> Result<()> {
        if d >= self.num_data {
            return Err(Error::Endpoint(format!(
                "data qubit D{} does not exist ({} data qubits)",
                d + 1,
                self.num_data
            )));
        }
        Ok(())
    }

    fn check_parity(&self, p: usize) -> Result<()> {
        if p >= self.num_parity {
            return Err(Error::Endpoint(format!(
                "parity qubit p{} does not exist ({} parity qubits)",
                p + 1,
                self.num_parity
            )));
        }
        Ok(())
    }

    fn data_parity_pair(&self, kind: EdgeKind, a: Qubit, b: Qubit) -> Result<(usize, usize)> {
        let (d, p) = match (a, b) {
            (Qubit::Data(d), Qubit::Parity(p)) | (Qubit::Parity(p), Qubit::Data(d)) => (d, p),
            _ => {
                return Err(Error::Role(format!(
                    "a {} edge joins a data qubit to a parity qubit, got {a} and {b}",
                    kind.name()
                )))
            }
        };
        self.check_data(d)?;
        self.check_parity(p)?;
        Ok((d, p))
    }

    fn parity_pair(&self, kind: EdgeKind, a: Qubit, b: Qubit) -> Result<(usize, usize)> {
        let (Qubit::Parity(x), Qubit::Parity(y)) = (a, b) else {
            return Err(Error::Role(format!(
                "a {} edge joins two parity qubits, got {a} and {b}",
                kind.name()
            )));
        };
        self.check_parity(x)?;
        self.check_parity(y)?;
        Ok((x, y))
    }

    /// Toggles an edge in place. On an annotated graph the annotation layer
    /// is updated incrementally, so the result stays annotated and simplified.
    pub fn toggle_edge(&mut self, kind: EdgeKind, a: Qubit, b: Qubit) -> Result<()> {
        match kind {
            EdgeKind::Bit => {
                let (d, p) = self.data_parity_pair(kind, a, b)?;
                toggle(&mut self.bit_edges, (d, p));
                if self.annotated {
                    // New bit edge pairs with every phase edge on the same data qubit.
                    let sources: Vec<usize> = self.phase_parities_of(d).collect();
                    for s in sources {
                        self.annotation.toggle_virtual(s, p);
                    }
                }
            }
            EdgeKind::Phase => {
                let (d, p) = self.data_parity_pair(kind, a, b)?;
                toggle(&mut self.phase_edges, (d, p));
                if self.annotated {
                    let targets: Vec<usize> = self.bit_parities_of(d).collect();
                    for t in targets {
                        self.annotation.toggle_virtual(p, t);
                    }
                }
            }
            EdgeKind::Cross => {
                let (x, y) = self.parity_pair(kind, a, b)?;
                if x == y {
                    return Err(Error::Endpoint(format!("a cross edge needs two distinct parity qubits, got {a} twice")));
                }
                toggle(&mut self.cross_edges, ordered(x, y));
                if self.annotated {
                    toggle(&mut self.annotation.linked_pairs, ordered(x, y));
                }
            }
            EdgeKind::Virtual => {
                let (s, t) = self.parity_pair(kind, a, b)?;
                if s == t {
                    return Err(Error::Endpoint(format!(
                        "a virtual edge needs distinct endpoints; use a virtual loop on {a}"
                    )));
                }
                toggle(&mut self.annotation.virtual_edges, (s, t));
            }
            EdgeKind::VirtualLoop => {
                let (x, y) = self.parity_pair(kind, a, b)?;
                if x != y {
                    return Err(Error::Endpoint(format!("a virtual loop has a single endpoint, got {a} and {b}")));
                }
                toggle(&mut self.annotation.virtual_loops, x);
            }
        }
        if self.annotated && matches!(kind, EdgeKind::Bit | EdgeKind::Phase | EdgeKind::Cross) {
            self.simplify_in_place();
        }
        Ok(())
    }

    /// Pure form of [`toggle_edge`](Self::toggle_edge).
    pub fn edge_toggle(&self, kind: EdgeKind, a: Qubit, b: Qubit) -> Result<Self> {
        let mut g = self.clone();
        g.toggle_edge(kind, a, b)?;
        Ok(g)
    }

    fn bit_parities_of(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.bit_edges.range((d, 0)..(d + 1, 0)).map(|&(_, p)| p)
    }

    fn phase_parities_of(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.phase_edges.range((d, 0)..(d + 1, 0)).map(|&(_, p)| p)
    }

    /// Adds one virtual edge (or loop) per bit/phase edge pair sharing a
    /// data qubit, seeds linked pairs from the cross edges, and simplifies.
    pub fn annotate(&self) -> Result<Self> {
        if self.annotated || !self.annotation.virtual_edges.is_empty() || !self.annotation.virtual_loops.is_empty() {
            return Err(Error::InvalidState("graph already carries virtual edges".into()));
        }
        let mut g = self.clone();
        g.annotation.linked_pairs = self.cross_edges.clone();
        for d in 0..self.num_data {
            for target in self.bit_parities_of(d) {
                for source in self.phase_parities_of(d) {
                    g.annotation.toggle_virtual(source, target);
                }
            }
        }
        g.annotated = true;
        g.simplify_in_place();
        Ok(g)
    }

    /// Rewrites the annotation layer to its canonical form. Cancellation of
    /// repeated edges and loops is already carried by the set semantics;
    /// what remains is merging virtual edges with linked pairs (reversal)
    /// and antiparallel virtual edges into linked pairs (addition). Both
    /// rules are XOR accumulation into the detection matrix, so the result
    /// is independent of rule order and `simplify` is idempotent.
    pub fn simplify(&self) -> Self {
        let mut g = self.clone();
        g.simplify_in_place();
        g
    }

    fn simplify_in_place(&mut self) {
        let e = self.annotation.detection_matrix(self.num_parity);
        self.annotation = AnnotationLayer::from_detection_matrix(&e);
    }

    /// Drops the annotation layer.
    pub fn clear_annotation(&self) -> Self {
        let mut g = self.clone();
        g.annotation = AnnotationLayer::default();
        g.annotated = false;
        g
    }

    /// Data qubits, and parity qubits, that touch no physical edge.
    pub fn isolated_qubits(&self) -> Vec<Qubit> {
        let mut touched_d = vec![false; self.num_data];
        let mut touched_p = vec![false; self.num_parity];
        for &(d, p) in self.bit_edges.iter().chain(&self.phase_edges) {
            touched_d[d] = true;
            touched_p[p] = true;
        }
        for &(a, b) in &self.cross_edges {
            touched_p[a] = true;
            touched_p[b] = true;
        }
        let data = touched_d.iter().enumerate().filter(|(_, &t)| !t).map(|(i, _)| Qubit::Data(i));
        let parity = touched_p.iter().enumerate().filter(|(_, &t)| !t).map(|(i, _)| Qubit::Parity(i));
        data.chain(parity).collect()
    }
}

/// JSON form of a graph: the five edge sets plus the linked pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphRepr {
    pub num_data: usize,
    pub num_parity: usize,
    pub bit_edges: Vec<(usize, usize)>,
    pub phase_edges: Vec<(usize, usize)>,
    pub cross_edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub virtual_edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub virtual_loops: Vec<usize>,
    #[serde(default)]
    pub linked_pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub annotated: bool,
}

impl From<OperationalGraph> for GraphRepr {
    fn from(g: OperationalGraph) -> Self {
        GraphRepr {
            num_data: g.num_data,
            num_parity: g.num_parity,
            bit_edges: g.bit_edges.into_iter().collect(),
            phase_edges: g.phase_edges.into_iter().collect(),
            cross_edges: g.cross_edges.into_iter().collect(),
            virtual_edges: g.annotation.virtual_edges.into_iter().collect(),
            virtual_loops: g.annotation.virtual_loops.into_iter().collect(),
            linked_pairs: g.annotation.linked_pairs.into_iter().collect(),
            annotated: g.annotated,
        }
    }
}

impl TryFrom<GraphRepr> for OperationalGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        let mut g = OperationalGraph::new(r.num_data, r.num_parity);
        for (d, p) in r.bit_edges {
            g.toggle_edge(EdgeKind::Bit, Qubit::Data(d), Qubit::Parity(p))?;
        }
        for (d, p) in r.phase_edges {
            g.toggle_edge(EdgeKind::Phase, Qubit::Data(d), Qubit::Parity(p))?;
        }
        for (a, b) in r.cross_edges {
            g.toggle_edge(EdgeKind::Cross, Qubit::Parity(a), Qubit::Parity(b))?;
        }
        for (s, t) in r.virtual_edges {
            g.toggle_edge(EdgeKind::Virtual, Qubit::Parity(s), Qubit::Parity(t))?;
        }
        for p in r.virtual_loops {
            g.toggle_edge(EdgeKind::VirtualLoop, Qubit::Parity(p), Qubit::Parity(p))?;
        }
        for (a, b) in r.linked_pairs {
            g.check_parity(a)?;
            g.check_parity(b)?;
            if a == b {
                return Err(Error::Endpoint(format!("linked pair on a single qubit p{}", a + 1)));
            }
            toggle(&mut g.annotation.linked_pairs, ordered(a, b));
        }
        g.annotated = r.annotated;
        Ok(g)
    }
}
