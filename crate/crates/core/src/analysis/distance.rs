use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::enumerate::{for_each_error, to_error, SingleSyndromes};
use crate::error::{Error, Result};
use crate::exec::{find_map_first, Execution};
use crate::gf2::RowSpace;
use crate::stabilizer::{PauliError, QuantumParityMatrix};

/// Largest weight [`distance`] will enumerate.
pub const MAX_DISTANCE_WEIGHT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceReport {
    /// Minimum weight of an undetected logical error, with the first such
    /// error in enumeration order.
    Exact { distance: usize, witness: PauliError },
    /// No undetected logical error up to `value - 1`.
    AtLeast(usize),
}

impl DistanceReport {
    pub fn exact(&self) -> Option<usize> {
        match self {
            DistanceReport::Exact { distance, .. } => Some(*distance),
            DistanceReport::AtLeast(_) => None,
        }
    }

    /// The distance, or the lower bound.
    pub fn lower_bound(&self) -> usize {
        match self {
            DistanceReport::Exact { distance, .. } => *distance,
            DistanceReport::AtLeast(b) => *b,
        }
    }

    pub fn at_least(&self, target: usize) -> bool {
        self.lower_bound() >= target
    }
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceReport::Exact { distance, .. } => write!(f, "{distance}"),
            DistanceReport::AtLeast(b) => write!(f, ">={b}"),
        }
    }
}

/// Stabilizer-code distance: the minimum weight of a Pauli that commutes
/// with every stabilizer (zero syndrome) but is not itself a stabilizer.
/// Enumerates all errors up to `max_weight`.
pub fn distance(q: &QuantumParityMatrix, max_weight: usize) -> Result<DistanceReport> {
    distance_with(q, max_weight, Execution::default())
}

pub fn distance_with(q: &QuantumParityMatrix, max_weight: usize, exec: Execution) -> Result<DistanceReport> {
    if max_weight > MAX_DISTANCE_WEIGHT {
        return Err(Error::Range(format!(
            "max weight {max_weight} exceeds the enumeration limit {MAX_DISTANCE_WEIGHT}"
        )));
    }
    let singles = SingleSyndromes::new(q);
    let stabilizers = RowSpace::new(&q.stacked());
    let n = q.n();
    for w in 1..=max_weight.min(n) {
        // Shard by lowest qubit; the first hit in shard order is the first
        // in global enumeration order.
        let hit = find_map_first(exec, 0..n, |first| {
            let flow = for_each_error(&singles, w, first..first + 1, &mut |support, s| {
                if !s.is_zero() {
                    return ControlFlow::Continue(());
                }
                let e = to_error(n, support);
                if stabilizers.contains(&e.symplectic()) {
                    ControlFlow::Continue(())
                } else {
                    ControlFlow::Break(e)
                }
            });
            match flow {
                ControlFlow::Break(e) => Some(e),
                ControlFlow::Continue(()) => None,
            }
        });
        if let Some(witness) = hit {
            return Ok(DistanceReport::Exact { distance: w, witness });
        }
    }
    Ok(DistanceReport::AtLeast(max_weight.min(n) + 1))
}
