//! Classification of a moduli point as smooth / canonical-singular /
//! noncanonical from its dual graph, multiplicity cochain, and a small set
//! of external curve annotations.
//!
//! Two ingredients are genuinely external to the graph data and enter as
//! annotations: whether the coarse curve's automorphism group is spanned by
//! elliptic-tail involutions (`eti`, default true — the generic situation),
//! and which genus-1 tail vertices carry an order-3 automorphism (a
//! j-invariant condition). Per-component orders `d_v` of the restricted
//! line-bundle class are likewise annotations; they are required only for
//! flagged tail vertices.
//!
//! The verdict logic: a point is *noncanonical* exactly when it has a junior
//! ghost (a J-curve) or a genus-1 tail with trivial level structure and an
//! order-3 automorphism (a T-curve); it is *smooth* exactly when the coarse
//! automorphisms are spanned by elliptic-tail involutions and every
//! top-stage contraction quotient is a bouquet (equivalently, the ghost
//! group is trivial); everything else is *canonical-singular*.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::age::{self, AgeError, AgeReport};
use crate::graph::{DualGraph, EdgeIdx};
use crate::level::MultiplicityCochain;

/// Errors raised while validating annotations against a graph.
#[derive(Debug, Error)]
pub enum SingularityError {
    /// An annotation names a vertex the graph does not have.
    #[error("annotation names unknown vertex `{vertex}`")]
    UnknownVertex {
        /// The offending vertex id.
        vertex: String,
    },
    /// An order-3 tail flag sits on a vertex that is not a genus-1 tail.
    #[error("vertex `{vertex}` is flagged as an order-3 tail but {problem}")]
    InvalidTailFlag {
        /// The flagged vertex id.
        vertex: String,
        /// What disqualifies it structurally.
        problem: String,
    },
    /// A flagged tail vertex has no component order annotation.
    #[error("annotation required for vertex `{vertex}`: component order d_v is missing")]
    MissingComponentOrder {
        /// The vertex whose `d_v` is required.
        vertex: String,
    },
    /// A component order must be a positive divisor of the level.
    #[error("component order {order} at vertex `{vertex}` does not divide the level {level}")]
    InvalidComponentOrder {
        /// The annotated vertex id.
        vertex: String,
        /// The rejected order.
        order: u64,
        /// The ambient level.
        level: u64,
    },
    /// Malformed annotation JSON.
    #[error("malformed annotation JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn default_true() -> bool {
    true
}

/// External facts about the curve that the graph data cannot see.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveAnnotations {
    /// Whether the coarse automorphism group is spanned by elliptic-tail
    /// involutions. Defaults to true (the generic curve).
    #[serde(default = "default_true")]
    pub eti: bool,
    /// Order of the line-bundle class restricted to each component, keyed by
    /// vertex id. Only consulted (and only required) for flagged tails.
    pub component_orders: BTreeMap<String, u64>,
    /// Vertex ids of genus-1 tails carrying an order-3 automorphism.
    pub order3_tails: BTreeSet<String>,
}

impl Default for CurveAnnotations {
    fn default() -> Self {
        CurveAnnotations {
            eti: true,
            component_orders: BTreeMap::new(),
            order3_tails: BTreeSet::new(),
        }
    }
}

impl CurveAnnotations {
    /// Parses annotations from JSON; absent fields take their defaults.
    pub fn from_json_str(text: &str) -> Result<Self, SingularityError> {
        Ok(serde_json::from_str(text)?)
    }

    /// JSON form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("annotations serialize")
    }
}

/// The three-way verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityVerdict {
    /// Smooth moduli point.
    Smooth,
    /// Singular but canonical.
    CanonicalSingular,
    /// Noncanonical singularity.
    Noncanonical,
}

impl std::fmt::Display for SingularityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SingularityVerdict::Smooth => "smooth",
            SingularityVerdict::CanonicalSingular => "canonical_singular",
            SingularityVerdict::Noncanonical => "noncanonical",
        };
        write!(f, "{name}")
    }
}

/// Every tag that contributed to a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictReason {
    /// Some top-stage contraction quotient is not a bouquet.
    HasNontrivialGhosts,
    /// The coarse automorphism group is not spanned by elliptic-tail
    /// involutions.
    NonEtiCoarseAut,
    /// A junior ghost exists; the witness is attached.
    JCurve(AgeReport),
    /// A genus-1 tail with trivial level structure carries an order-3
    /// automorphism; the vertex id is attached.
    TCurve(String),
}

impl VerdictReason {
    fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        match self {
            VerdictReason::HasNontrivialGhosts => {
                serde_json::json!({"kind": "has_nontrivial_ghosts"})
            }
            VerdictReason::NonEtiCoarseAut => {
                serde_json::json!({"kind": "non_ETI_coarse_aut"})
            }
            VerdictReason::JCurve(report) => {
                serde_json::json!({"kind": "J_curve", "witness": report.to_json(graph)})
            }
            VerdictReason::TCurve(vertex) => {
                serde_json::json!({"kind": "T_curve", "vertex": vertex})
            }
        }
    }
}

/// The classification outcome with its supporting reasons.
#[derive(Clone, Debug)]
pub struct SingularityReport {
    /// Smooth / canonical-singular / noncanonical.
    pub verdict: SingularityVerdict,
    /// All applicable tags, in fixed order: ghost nontriviality, coarse
    /// automorphism obstruction, junior witness, tail witness.
    pub reasons: Vec<VerdictReason>,
    /// False when the junior-ghost scan hit its budget before completing; a
    /// missing `J_curve` tag is then inconclusive rather than a certificate.
    pub junior_scan_complete: bool,
}

impl SingularityReport {
    /// JSON form.
    pub fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        serde_json::json!({
            "verdict": self.verdict.to_string(),
            "reasons": self.reasons.iter().map(|r| r.to_json(graph)).collect::<Vec<_>>(),
            "junior_scan_complete": self.junior_scan_complete,
        })
    }
}

/// Whether `(Γ, M)` has any nontrivial ghost: true iff some top-stage
/// contraction quotient `Γ(ν_p^{e_p})` fails to be a bouquet. Because the
/// stage vertex counts grow with the stage index, this is equivalent to the
/// ghost group having order > 1, without building the group.
pub fn has_nontrivial_ghosts(graph: &DualGraph, multiplicity: &MultiplicityCochain) -> bool {
    multiplicity.valuation().primes.iter().any(|prime| {
        let tower = multiplicity
            .contraction_tower(graph, prime.p)
            .expect("prime divides the level by construction");
        !tower
            .stage(prime.exponent)
            .contraction
            .quotient()
            .is_bouquet()
    })
}

/// Whether the moduli point is smooth: the coarse automorphisms are spanned
/// by elliptic-tail involutions and no nontrivial ghost exists.
pub fn is_smooth_point(
    graph: &DualGraph,
    multiplicity: &MultiplicityCochain,
    annotations: &CurveAnnotations,
) -> bool {
    annotations.eti && !has_nontrivial_ghosts(graph, multiplicity)
}

fn validate_annotations(
    graph: &DualGraph,
    level: u64,
    annotations: &CurveAnnotations,
) -> Result<(), SingularityError> {
    for (vertex, &order) in &annotations.component_orders {
        if graph.vertex_idx(vertex).is_none() {
            return Err(SingularityError::UnknownVertex {
                vertex: vertex.clone(),
            });
        }
        if order == 0 || !level.is_multiple_of(order) {
            return Err(SingularityError::InvalidComponentOrder {
                vertex: vertex.clone(),
                order,
                level,
            });
        }
    }
    for vertex in &annotations.order3_tails {
        let v = graph
            .vertex_idx(vertex)
            .ok_or_else(|| SingularityError::UnknownVertex {
                vertex: vertex.clone(),
            })?;
        let invalid = |problem: &str| SingularityError::InvalidTailFlag {
            vertex: vertex.clone(),
            problem: problem.to_string(),
        };
        if graph.vertex(v).genus != 1 {
            return Err(invalid("its genus is not 1"));
        }
        let incident: Vec<EdgeIdx> = (0..graph.edge_count())
            .map(EdgeIdx)
            .filter(|&e| graph.edge(e).tail == v || graph.edge(e).head == v)
            .collect();
        if incident.iter().any(|&e| graph.is_loop(e)) {
            return Err(invalid("it carries a loop"));
        }
        if incident.len() != 1 {
            return Err(invalid("it does not have exactly one attaching edge"));
        }
    }
    Ok(())
}

/// Finds the first (in vertex-id order) flagged genus-1 tail with trivial
/// level structure (`d_v = 1`), i.e. a T-curve witness.
///
/// Tail flags are validated structurally: the vertex must exist, have genus
/// 1, carry no loops, and attach by exactly one edge (which is then
/// automatically separating and carries multiplicity 0). A flagged tail
/// without a `d_v` annotation is an error.
#[allow(non_snake_case)]
pub fn detect_T_curve(
    graph: &DualGraph,
    multiplicity: &MultiplicityCochain,
    annotations: &CurveAnnotations,
) -> Result<Option<String>, SingularityError> {
    validate_annotations(graph, multiplicity.level(), annotations)?;
    for vertex in &annotations.order3_tails {
        let order = annotations
            .component_orders
            .get(vertex)
            .copied()
            .ok_or_else(|| SingularityError::MissingComponentOrder {
                vertex: vertex.clone(),
            })?;
        if order == 1 {
            return Ok(Some(vertex.clone()));
        }
    }
    Ok(None)
}

/// Classifies the moduli point, populating every applicable reason.
///
/// Junior-ghost detection honors the budget: when neither the candidate
/// space nor the ghost group fits, the scan's first `budget` group elements
/// are checked and `junior_scan_complete` is set to false if none is junior
/// (the verdict then rests on the remaining criteria).
pub fn classify_point(
    graph: &DualGraph,
    multiplicity: &MultiplicityCochain,
    annotations: &CurveAnnotations,
    budget: u64,
) -> Result<SingularityReport, SingularityError> {
    validate_annotations(graph, multiplicity.level(), annotations)?;
    let mut reasons = Vec::new();
    if has_nontrivial_ghosts(graph, multiplicity) {
        reasons.push(VerdictReason::HasNontrivialGhosts);
    }
    if !annotations.eti {
        reasons.push(VerdictReason::NonEtiCoarseAut);
    }
    let mut junior_scan_complete = true;
    match age::find_junior_ghost(graph, multiplicity, budget) {
        Ok(Some(report)) => reasons.push(VerdictReason::JCurve(report)),
        Ok(None) => {}
        Err(AgeError::BudgetExceeded { .. }) => junior_scan_complete = false,
    }
    if let Some(vertex) = detect_T_curve(graph, multiplicity, annotations)? {
        reasons.push(VerdictReason::TCurve(vertex));
    }
    let noncanonical = reasons
        .iter()
        .any(|r| matches!(r, VerdictReason::JCurve(_) | VerdictReason::TCurve(_)));
    let verdict = if noncanonical {
        SingularityVerdict::Noncanonical
    } else if reasons.is_empty() {
        SingularityVerdict::Smooth
    } else {
        SingularityVerdict::CanonicalSingular
    };
    Ok(SingularityReport {
        verdict,
        reasons,
        junior_scan_complete,
    })
}
