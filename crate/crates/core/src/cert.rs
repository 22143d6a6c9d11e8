//! Certificate shapes for the extraction pipeline. Each variant carries
//! exactly the evidence its verifier needs, with all sizes recorded
//! explicitly, so a certificate can be audited without re-running any
//! search.

use crate::graph::VertexSet;
use crate::ramsey::SearchMode;
use serde::{Deserialize, Serialize};

/// Which search produced a certificate: the bound-driven monochromatic
/// route, or direct exhaustive search at the requested output sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "paper_bound")]
    BoundDriven,
    #[serde(rename = "direct_search")]
    DirectSearch,
}

/// Which clauses a clean set claims. The pinned stage guarantees stability
/// and the triple condition; the interior stage guarantees pairwise interior
/// anticompleteness; the combined pipeline guarantees all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleanSetClaims {
    StableTriple,
    InteriorPairs,
    Full,
}

impl CleanSetClaims {
    pub fn stable(self) -> bool {
        matches!(self, CleanSetClaims::StableTriple | CleanSetClaims::Full)
    }

    pub fn triple(self) -> bool {
        matches!(self, CleanSetClaims::StableTriple | CleanSetClaims::Full)
    }

    pub fn interior_pairs(self) -> bool {
        matches!(self, CleanSetClaims::InteriorPairs | CleanSetClaims::Full)
    }
}

/// The outcome evidence, tagged by kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "evidence", rename_all = "snake_case")]
pub enum Outcome {
    /// `size` pairwise adjacent vertices.
    Clique { size: usize, vertices: VertexSet },
    /// Two disjoint stable sets of `size` vertices each with every cross
    /// pair an edge.
    Biclique {
        size: usize,
        left: VertexSet,
        right: VertexSet,
    },
    /// A branch subset satisfying the claimed clauses.
    CleanSet {
        size: usize,
        set: VertexSet,
        claims: CleanSetClaims,
    },
    /// `anchors` each have a neighbor on the path of every pair in `pairs`;
    /// the pairs are pairwise disjoint and avoid the anchors.
    PinnedPair {
        anchor_count: usize,
        pair_count: usize,
        anchors: VertexSet,
        pairs: Vec<(u32, u32)>,
    },
    /// Two disjoint families of branch pairs such that every interior from
    /// the left family touches every interior from the right family.
    TouchingFamilies {
        family_size: usize,
        left: Vec<(u32, u32)>,
        right: Vec<(u32, u32)>,
    },
    /// Budget- or size-limited non-answer; explicitly not proven absence.
    Inconclusive { reason: String, steps: u64 },
}

impl Outcome {
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Clique { .. } => "clique",
            Outcome::Biclique { .. } => "biclique",
            Outcome::CleanSet { .. } => "clean_set",
            Outcome::PinnedPair { .. } => "pinned_pair",
            Outcome::TouchingFamilies { .. } => "touching_families",
            Outcome::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Outcome::Inconclusive { .. })
    }
}

/// Echo of the parameters the producing operation ran with.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<SearchMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Number of touching sets actually targeted when the composed bound was
    /// out of reach.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub touching_count_used: Option<u64>,
    /// Clean-set size actually targeted by the first stage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clean_target_used: Option<u64>,
}

/// A self-contained, independently verifiable extraction result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub route: Route,
    pub params: ParamsEcho,
    /// One line per pipeline stage that contributed to this certificate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> crate::Result<Certificate> {
        serde_json::from_str(text).map_err(|e| crate::Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_and_round_trip() {
        let cert = Certificate {
            outcome: Outcome::CleanSet {
                size: 3,
                set: VertexSet::new(vec![2, 0, 1]),
                claims: CleanSetClaims::Full,
            },
            route: Route::DirectSearch,
            params: ParamsEcho {
                s: Some(3),
                mode: Some(crate::ramsey::SearchMode::Exact),
                ..Default::default()
            },
            trace: vec!["stage: test".into()],
        };
        let json = cert.to_json();
        assert!(json.contains("\"kind\": \"clean_set\""));
        assert!(json.contains("\"route\": \"direct_search\""));
        assert!(json.contains("\"claims\": \"full\""));
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(cert, back);
    }

    #[test]
    fn kind_strings() {
        let o = Outcome::Inconclusive {
            reason: "x".into(),
            steps: 0,
        };
        assert_eq!(o.kind(), "inconclusive");
        assert!(o.is_inconclusive());
    }

    #[test]
    fn evidence_sets_normalize_on_load() {
        let json = r#"{
            "kind": "clique",
            "evidence": { "size": 3, "vertices": [5, 5, 1, 3] },
            "route": "paper_bound",
            "params": {}
        }"#;
        let cert = Certificate::from_json(json).unwrap();
        match cert.outcome {
            Outcome::Clique { ref vertices, .. } => {
                assert_eq!(vertices.as_slice(), &[1, 3, 5]);
            }
            _ => panic!("wrong kind"),
        }
        assert_eq!(cert.route, Route::BoundDriven);
    }
}
