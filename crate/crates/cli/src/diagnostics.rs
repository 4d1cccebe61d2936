//! Per-edit summary shown to an interactive designer.

use cpc_core::analysis::{distance, signature_profile, syndrome_table, DistanceReport, SignatureClass};
use cpc_core::builder::DesignSession;
use serde::{Deserialize, Serialize};

/// Interactive distance checks stop at this weight and report `>=4`.
pub const DIAGNOSTIC_DISTANCE_WEIGHT: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub distance: DistanceReport,
    /// `distance` as text: `"2"` or `">=4"`.
    pub distance_label: String,
    pub commuting: bool,
    pub all_detected: bool,
    pub syndromes_unique: bool,
    /// Factor-graph variables no check looks at, e.g. `p1.phase`.
    pub unconnected_variables: Vec<String>,
    pub signature_profile: Vec<SignatureClass>,
}

impl Diagnostics {
    pub fn compute(s: &DesignSession) -> cpc_core::Result<Self> {
        let q = s.quantum();
        let table = syndrome_table(&q);
        let d = distance(&q, DIAGNOSTIC_DISTANCE_WEIGHT)?;
        Ok(Diagnostics {
            n: q.n(),
            k: q.logical_qubits(),
            m: q.m(),
            distance_label: d.to_string(),
            distance: d,
            commuting: q.check_commutation(),
            all_detected: table.all_detected(),
            syndromes_unique: table.unique,
            unconnected_variables: s.factor_graph().unconnected_variables().iter().map(|v| v.to_string()).collect(),
            signature_profile: signature_profile(&table, s.tags())?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpc_core::reference;

    #[test]
    fn detection_codes() {
        let d = Diagnostics::compute(&reference::detection_4_2_1()).unwrap();
        assert_eq!(d.distance_label, "1");
        assert_eq!(d.unconnected_variables, ["p1.phase", "p2.phase"]);
        let d = Diagnostics::compute(&reference::detection_4_2_2()).unwrap();
        assert_eq!(d.distance_label, "2");
        assert!(d.all_detected && !d.syndromes_unique);
    }

    #[test]
    fn reference_code_is_unique() {
        let d = Diagnostics::compute(&reference::hamming_10_4_3()).unwrap();
        assert!(d.syndromes_unique);
        assert_eq!(d.distance.exact(), Some(3));
        assert_eq!(d.signature_profile.len(), 9);
    }
}
