//! Graphviz export.
//!
//! Operational graphs: data qubits are triangles, parity qubits stars, bit
//! edges red, phase and cross edges black, virtual edges pink, dashed and
//! directed. Linked pairs are drawn as pink dashed edges with arrows at
//! both ends. Factor graphs: variables are circles (bit components yellow,
//! phase components blue), checks are squares.

use std::fmt::Write as _;

use crate::graph::{OperationalGraph, Qubit};
use crate::translation::{ClassicalFactorGraph, Component};

pub fn operational_dot(g: &OperationalGraph) -> String {
    let mut out = String::from("graph operational {\n");
    for d in 0..g.num_data() {
        let _ = writeln!(out, "  {} [shape=triangle];", Qubit::Data(d));
    }
    for p in 0..g.num_parity() {
        let _ = writeln!(out, "  {} [shape=star];", Qubit::Parity(p));
    }
    for &(d, p) in g.bit_edges() {
        let _ = writeln!(out, "  {} -- {} [color=red];", Qubit::Data(d), Qubit::Parity(p));
    }
    for &(d, p) in g.phase_edges() {
        let _ = writeln!(out, "  {} -- {} [color=black];", Qubit::Data(d), Qubit::Parity(p));
    }
    for &(a, b) in g.cross_edges() {
        let _ = writeln!(out, "  {} -- {} [color=black];", Qubit::Parity(a), Qubit::Parity(b));
    }
    for &(s, t) in g.virtual_edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [color=pink, style=dashed, dir=forward];",
            Qubit::Parity(s),
            Qubit::Parity(t)
        );
    }
    for &(a, b) in g.linked_pairs() {
        let _ = writeln!(
            out,
            "  {} -- {} [color=pink, style=dashed, dir=both];",
            Qubit::Parity(a),
            Qubit::Parity(b)
        );
    }
    for &p in g.virtual_loops() {
        let q = Qubit::Parity(p);
        let _ = writeln!(out, "  {q} -- {q} [color=pink, style=dashed, dir=forward];");
    }
    out.push_str("}\n");
    out
}

pub fn factor_graph_dot(f: &ClassicalFactorGraph) -> String {
    let mut out = String::from("graph factor {\n");
    for v in f.variables() {
        let color = match v.component {
            Component::Bit => "yellow",
            Component::Phase => "lightblue",
        };
        let _ = writeln!(out, "  \"{v}\" [shape=circle, style=filled, fillcolor={color}];");
    }
    for c in 0..f.h().rows() {
        let _ = writeln!(out, "  \"c{}\" [shape=square];", c + 1);
    }
    for (c, v) in f.edges() {
        let _ = writeln!(out, "  \"c{}\" -- \"{v}\";", c + 1);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn operational_conventions() {
        let s = reference::detection_4_2_2();
        let dot = operational_dot(s.graph());
        assert!(dot.contains("D1 [shape=triangle];"));
        assert!(dot.contains("p2 [shape=star];"));
        assert!(dot.contains("D1 -- p1 [color=red];"));
        assert!(dot.contains("D1 -- p2 [color=black];"));
        assert!(dot.contains("p1 -- p2 [color=black];"));
        assert!(dot.starts_with("graph operational {") && dot.ends_with("}\n"));
    }

    #[test]
    fn factor_graph_shapes() {
        let s = reference::detection_4_2_2();
        let dot = factor_graph_dot(&s.factor_graph());
        assert!(dot.contains("\"c1\" [shape=square];"));
        assert_eq!(dot.matches("shape=circle").count(), 8);
        assert_eq!(dot.matches(" -- ").count(), s.factor_graph().edges().len());
    }
}
