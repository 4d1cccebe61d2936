//! Quantum parity-check codes assembled from classical codes on an
//! operational graph: construction, translation and analysis.

pub mod analysis;
pub mod builder;
pub mod classical;
pub mod dot;
pub mod error;
pub mod exec;
pub mod gf2;
pub mod graph;
pub mod reference;
pub mod stabilizer;
pub mod translation;

pub use error::{Error, Result};
pub use exec::Execution;
pub use gf2::{BitMatrix, BitVec, RowSpace};
pub use graph::{EdgeKind, OperationalGraph, Qubit};
pub use stabilizer::{CpcAdjacency, Pauli, PauliError, QuantumParityMatrix};
pub use builder::{search_cross_checks, DesignSession, SearchReport};
pub use classical::ClassicalCode;
