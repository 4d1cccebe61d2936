//! Self-contained JSON description of a code: the graph plus every matrix
//! and table derived from it.

use std::path::Path;

use cpc_core::analysis::{distance, syndrome_table, PartitionTags, SyndromeTable};
use cpc_core::builder::DesignSession;
use cpc_core::{CpcAdjacency, OperationalGraph, QuantumParityMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Weight up to which the stored distance is computed.
pub const BUNDLE_DISTANCE_WEIGHT: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    /// Exact distance if at most [`BUNDLE_DISTANCE_WEIGHT`], else absent.
    pub claimed_distance: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeBundle {
    pub name: String,
    pub graph: OperationalGraph,
    pub tags: PartitionTags,
    pub adjacency: CpcAdjacency,
    pub g_xz: QuantumParityMatrix,
    pub syndromes: SyndromeTable,
    pub metadata: Metadata,
}

impl CodeBundle {
    pub fn new(name: impl Into<String>, graph: OperationalGraph, tags: PartitionTags) -> CliResult<Self> {
        let graph = if graph.is_annotated() { graph } else { graph.annotate()? };
        let adjacency = CpcAdjacency::from_graph(&graph);
        let g_xz = adjacency.quantum_parity_matrix()?;
        let syndromes = syndrome_table(&g_xz);
        let metadata = Metadata {
            n: g_xz.n(),
            k: g_xz.logical_qubits(),
            m: g_xz.m(),
            claimed_distance: distance(&g_xz, BUNDLE_DISTANCE_WEIGHT)?.exact(),
        };
        Ok(CodeBundle {
            name: name.into(),
            graph,
            tags,
            adjacency,
            g_xz,
            syndromes,
            metadata,
        })
    }

    pub fn from_session(s: &DesignSession) -> CliResult<Self> {
        CodeBundle::new(s.name(), s.graph().clone(), s.tags().clone())
    }

    pub fn session(&self) -> CliResult<DesignSession> {
        Ok(DesignSession::from_graph(&self.name, self.graph.clone(), self.tags.clone())?)
    }

    /// Recomputes every derived field from the graph and compares.
    pub fn verify(&self) -> CliResult<()> {
        let fresh = CodeBundle::new(&self.name, self.graph.clone(), self.tags.clone())?;
        let stale = [
            ("adjacency", fresh.adjacency != self.adjacency),
            ("g_xz", fresh.g_xz != self.g_xz),
            ("syndromes", fresh.syndromes != self.syndromes),
            ("metadata", fresh.metadata != self.metadata),
        ];
        match stale.iter().find(|(_, bad)| *bad) {
            Some((field, _)) => Err(CliError::Data(format!(
                "bundle field `{field}` does not match its graph"
            ))),
            None => Ok(()),
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let bundle: CodeBundle = crate::input::read_json(path)?;
        bundle.verify()?;
        Ok(bundle)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpc_core::reference;

    #[test]
    fn round_trip_and_verify() {
        let b = CodeBundle::from_session(&reference::hamming_10_4_3()).unwrap();
        assert_eq!(b.metadata.claimed_distance, Some(3));
        assert_eq!((b.metadata.n, b.metadata.k), (10, 4));
        let back: CodeBundle = serde_json::from_str(&b.to_json()).unwrap();
        assert_eq!(back, b);
        back.verify().unwrap();
    }

    #[test]
    fn tampered_field_is_caught() {
        let mut b = CodeBundle::from_session(&reference::detection_4_2_2()).unwrap();
        b.metadata.claimed_distance = Some(3);
        assert!(matches!(b.verify(), Err(CliError::Data(_))));
    }
}
