//! The age grading of ghost automorphisms and everything built on it:
//! junior/senior classification, deterministic junior-ghost search,
//! exhaustive no-junior sweeps over desk-scale graph spaces, and explicit
//! junior witness families for every level that admits one.
//!
//! The age of a symmetric function with `ξ_l`-exponents `ã(e)` is
//! `Σ_e ⟨ã(e)/l⟩ = (Σ_e ã(e))/l` exactly (values are normalized to
//! `[0, l)`), an element of `(1/l)·Z` represented as an exact rational. An
//! element is *junior* when `0 < age < 1` — equivalently `0 < Σ ã(e) < l` —
//! and *senior* when nontrivial with age ≥ 1. No floating point, no
//! tolerances.

use num::{BigInt, BigRational, BigUint};
use thiserror::Error;

use crate::ghosts::{self, SymmetricFunction};
use crate::graph::{DualGraph, EdgeIdx, OrientedEdge};
use crate::level::{self, MultiplicityCochain};

/// Errors from junior-ghost searches.
#[derive(Debug, Error)]
pub enum AgeError {
    /// Neither the candidate space nor the ghost group fits in the budget.
    /// The search scanned `scanned` group elements (in deterministic
    /// generator-odometer order) without finding a junior before giving up.
    #[error(
        "budget exceeded hunting junior ghosts: {candidates} candidates over budget {budget} \
         (scanned {scanned} group elements without finding a junior)"
    )]
    BudgetExceeded {
        /// The smaller of the brute-force candidate count and the group order.
        candidates: BigUint,
        /// The configured budget.
        budget: u64,
        /// How many group elements were examined before giving up.
        scanned: u64,
    },
}

/// Trivial / junior / senior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgeVerdict {
    /// The zero element.
    Trivial,
    /// Nontrivial with `0 < age < 1`.
    Junior,
    /// Nontrivial with `age ≥ 1`.
    Senior,
}

impl std::fmt::Display for AgeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            AgeVerdict::Trivial => "trivial",
            AgeVerdict::Junior => "junior",
            AgeVerdict::Senior => "senior",
        };
        write!(f, "{name}")
    }
}

/// An element with its exact age and verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgeReport {
    /// The element.
    pub element: SymmetricFunction,
    /// Its exact age.
    pub age: BigRational,
    /// Trivial / junior / senior.
    pub verdict: AgeVerdict,
}

impl AgeReport {
    /// JSON form with the age as a reduced `"p/q"` string.
    pub fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        serde_json::json!({
            "element": self.element.to_json(graph),
            "age": rational_str(&self.age),
            "verdict": self.verdict.to_string(),
        })
    }
}

/// Renders an exact rational as a reduced `"p/q"` string (q ≥ 1).
pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// The exact age `Σ_e ⟨ã(e)/l⟩` of a symmetric function.
pub fn age_of(a: &SymmetricFunction) -> BigRational {
    let sum: u128 = a.values().iter().map(|&v| v as u128).sum();
    BigRational::new(BigInt::from(sum), BigInt::from(a.level()))
}

/// Integer fast path for juniority: `0 < Σ ã(e) < l`.
fn exponent_sum_is_junior(values: &[u64], level: u64) -> bool {
    let mut sum: u128 = 0;
    for &v in values {
        sum += v as u128;
        if sum >= level as u128 {
            return false;
        }
    }
    sum > 0
}

/// Classifies an element by its exact age.
pub fn classify(a: &SymmetricFunction) -> AgeReport {
    let age = age_of(a);
    let verdict = if a.is_zero() {
        AgeVerdict::Trivial
    } else if age < BigRational::from(BigInt::from(1)) {
        AgeVerdict::Junior
    } else {
        AgeVerdict::Senior
    };
    AgeReport {
        element: a.clone(),
        age,
        verdict,
    }
}

/// Searches for a junior ghost of `(Γ, M)`.
///
/// When the (loop-reduced) brute-force candidate space fits in the budget,
/// scans it exhaustively in lexicographic order and returns the least junior
/// ghost. Otherwise, if the ghost group's order fits, scans all group
/// elements and again returns the lexicographically least junior. If even
/// that is too large, scans the first `budget` elements in deterministic
/// generator-odometer order — a hit is still a valid witness (though not
/// guaranteed least), and a miss reports the partial scan as an error.
///
/// Loops are fixed to 0 in the brute-force scan: a loop is its own circuit,
/// so any ghost's associated cochain (and hence, by unit scaling, its
/// symmetric value) vanishes there.
pub fn find_junior_ghost(
    graph: &DualGraph,
    multiplicity: &MultiplicityCochain,
    budget: u64,
) -> Result<Option<AgeReport>, AgeError> {
    let level = multiplicity.level();
    if level == 1 {
        return Ok(None);
    }
    let per_edge: Vec<(u64, u64, u64)> = (0..graph.edge_count())
        .map(|i| {
            let e = EdgeIdx(i);
            if graph.is_loop(e) {
                (1, level, 0)
            } else {
                let idx = multiplicity.local_indices(e);
                (idx.r, level / idx.r, idx.m)
            }
        })
        .collect();
    let candidates: BigUint = per_edge.iter().map(|&(r, _, _)| BigUint::from(r)).product();
    if candidates <= BigUint::from(budget) {
        let witness = scan_candidates_for_junior(graph, level, &per_edge);
        return Ok(witness.map(|a| classify(&a)));
    }
    let group = ghosts::ghost_group(graph, multiplicity);
    if group.order() <= &BigUint::from(budget) {
        let least = group
            .elements_iter()
            .filter(|a| exponent_sum_is_junior(a.values(), level))
            .min_by(|a, b| a.values().cmp(b.values()));
        return Ok(least.map(|a| classify(&a)));
    }
    let mut scanned = 0u64;
    for a in group.elements_iter().take(budget as usize) {
        scanned += 1;
        if exponent_sum_is_junior(a.values(), level) {
            return Ok(Some(classify(&a)));
        }
    }
    Err(AgeError::BudgetExceeded {
        candidates: candidates.min(group.order().clone()),
        budget,
        scanned,
    })
}

/// Lexicographic scan of the reduced candidate space for the least junior
/// ghost; `per_edge` holds `(r, l/r, m)` with loops forced to `r = 1`.
fn scan_candidates_for_junior(
    graph: &DualGraph,
    level: u64,
    per_edge: &[(u64, u64, u64)],
) -> Option<SymmetricFunction> {
    let circuits: Vec<Vec<OrientedEdge>> = graph
        .fundamental_circuits()
        .into_iter()
        .map(|c| c.edges)
        .collect();
    let mut ticks = vec![0u64; per_edge.len()];
    loop {
        let values: Vec<u64> = ticks
            .iter()
            .zip(per_edge)
            .map(|(&t, &(_, step, _))| t * step)
            .collect();
        if exponent_sum_is_junior(&values, level) {
            let annihilates = circuits.iter().all(|k| {
                k.iter().fold(0u64, |acc, oe| {
                    let (_, _, m) = per_edge[oe.edge.0];
                    let b = (values[oe.edge.0] as u128 * m as u128 % level as u128) as u64;
                    let oriented = if oe.reversed && b != 0 { level - b } else { b };
                    (acc + oriented) % level
                }) == 0
            });
            if annihilates {
                return Some(
                    SymmetricFunction::from_values(
                        level,
                        &values.iter().map(|&v| v as i64).collect::<Vec<_>>(),
                    )
                    .expect("level ≥ 2 here"),
                );
            }
        }
        let mut pos = ticks.len();
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            ticks[pos] += 1;
            if ticks[pos] < per_edge[pos].0 {
                break;
            }
            ticks[pos] = 0;
        }
    }
}

/// One junior witness found by a sweep.
#[derive(Clone, Debug)]
pub struct SweepWitness {
    /// The graph carrying the witness.
    pub graph: DualGraph,
    /// The multiplicity cochain.
    pub multiplicity: MultiplicityCochain,
    /// The junior element with its age.
    pub report: AgeReport,
}

/// An instance a sweep had to skip for budget reasons.
#[derive(Clone, Debug)]
pub struct SkippedInstance {
    /// The graph of the skipped instance.
    pub graph: DualGraph,
    /// The multiplicity cochain of the skipped instance.
    pub multiplicity: MultiplicityCochain,
    /// The candidate count that exceeded the budget.
    pub candidates: BigUint,
}

/// The outcome of an exhaustive junior-ghost sweep.
#[derive(Clone, Debug)]
pub struct SweepReport {
    /// The level swept.
    pub level: u64,
    /// Edge-count ceiling.
    pub max_edges: usize,
    /// Vertex-count ceiling.
    pub max_vertices: usize,
    /// Per-instance budget used.
    pub budget: u64,
    /// Number of isomorphism classes of graphs scanned.
    pub graphs: u64,
    /// Number of `(graph, M)` instances scanned.
    pub instances: u64,
    /// Every junior witness found.
    pub witnesses: Vec<SweepWitness>,
    /// Instances skipped because no in-budget scan was possible.
    pub skipped: Vec<SkippedInstance>,
    /// The largest junior age observed, if any.
    pub max_junior_age: Option<BigRational>,
}

impl SweepReport {
    /// Whether the sweep is a complete no-junior certificate: every instance
    /// scanned, no witnesses found.
    pub fn is_clean(&self) -> bool {
        self.witnesses.is_empty() && self.skipped.is_empty()
    }

    /// JSON form: witness/skip rows plus a summary block.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "max_edges": self.max_edges,
            "max_vertices": self.max_vertices,
            "budget": self.budget,
            "graphs": self.graphs,
            "instances": self.instances,
            "witnesses": self.witnesses.iter().map(|w| serde_json::json!({
                "graph": w.graph.to_json(),
                "multiplicity": w.multiplicity.to_json(&w.graph),
                "element": w.report.element.to_json(&w.graph),
                "age": rational_str(&w.report.age),
            })).collect::<Vec<_>>(),
            "skipped": self.skipped.iter().map(|s| serde_json::json!({
                "graph": s.graph.to_json(),
                "multiplicity": s.multiplicity.to_json(&s.graph),
                "candidates": s.candidates.to_string(),
            })).collect::<Vec<_>>(),
            "summary": {
                "instances": self.instances,
                "witnesses": self.witnesses.len(),
                "skipped": self.skipped.len(),
                "max_age_below_1": self.max_junior_age.as_ref().map(rational_str),
            },
        })
    }
}

/// Exhaustively sweeps every connected multigraph (loops and parallel edges
/// allowed, one representative per isomorphism class) within the bounds and
/// every multiplicity cochain on it, hunting junior ghosts.
pub fn junior_sweep(level: u64, max_edges: usize, max_vertices: usize, budget: u64) -> SweepReport {
    assert!(level >= 1, "sweeps need a positive level");
    let graphs = crate::graph::enumerate_connected(max_vertices, max_edges);
    let mut report = SweepReport {
        level,
        max_edges,
        max_vertices,
        budget,
        graphs: graphs.len() as u64,
        instances: 0,
        witnesses: Vec::new(),
        skipped: Vec::new(),
        max_junior_age: None,
    };
    for graph in &graphs {
        let multiplicities =
            level::enumerate_multiplicities(graph, level).expect("level validated above");
        for multiplicity in multiplicities {
            report.instances += 1;
            match find_junior_ghost(graph, &multiplicity, budget) {
                Ok(None) => {}
                Ok(Some(age_report)) => {
                    let age = age_report.age.clone();
                    report.witnesses.push(SweepWitness {
                        graph: graph.clone(),
                        multiplicity,
                        report: age_report,
                    });
                    let bigger = report
                        .max_junior_age
                        .as_ref()
                        .is_none_or(|current| &age > current);
                    if bigger {
                        report.max_junior_age = Some(age);
                    }
                }
                Err(AgeError::BudgetExceeded { candidates, .. }) => {
                    report.skipped.push(SkippedInstance {
                        graph: graph.clone(),
                        multiplicity,
                        candidates,
                    });
                }
            }
        }
    }
    report
}

/// An explicit junior witness at a given level.
#[derive(Clone, Debug)]
pub struct JuniorWitness {
    /// The witness graph.
    pub graph: DualGraph,
    /// The witness multiplicity cochain.
    pub multiplicity: MultiplicityCochain,
    /// The junior ghost itself.
    pub element: SymmetricFunction,
    /// Its exact age.
    pub age: BigRational,
}

impl JuniorWitness {
    /// JSON form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "graph": self.graph.to_json(),
            "multiplicity": self.multiplicity.to_json(&self.graph),
            "element": self.element.to_json(&self.graph),
            "age": rational_str(&self.age),
        })
    }
}

/// Builds a junior witness at the requested level, or `None` exactly when no
/// junior ghost exists at that level (levels 1, 2, 3, 4, and 6).
///
/// The witness families: the level-5 instance scaled by `l/5` when `5 | l`;
/// the level-8 instance scaled when `8 | l`; the level-12 instance scaled
/// when `12 | l`; otherwise the odd-level halving family at the smallest odd
/// divisor `d ≥ 7` of `l`, scaled by `l/d`. Every returned witness is
/// re-validated (ghost membership and strict juniority) before being handed
/// out.
pub fn junior_witness(level: u64) -> Option<JuniorWitness> {
    assert!(level >= 1, "levels start at 1");
    if matches!(level, 1 | 2 | 3 | 4 | 6) {
        return None;
    }
    let (base, factor) = if level.is_multiple_of(5) {
        (crate::gallery::junior5(), level / 5)
    } else if level.is_multiple_of(8) {
        (crate::gallery::junior8(), level / 8)
    } else if level.is_multiple_of(12) {
        (crate::gallery::junior12(), level / 12)
    } else {
        let d = (7..=level)
            .step_by(2)
            .find(|&d| level.is_multiple_of(d))
            .expect(
                "every level outside {1,2,3,4,6} without 5/8/12 divisors has an odd divisor ≥ 7",
            );
        (crate::gallery::junior_odd(d), level / d)
    };
    let (graph, multiplicity, element) = base;
    let scaled_m = MultiplicityCochain::from_values(
        &graph,
        level,
        &multiplicity
            .values()
            .iter()
            .map(|&v| (v * factor) as i64)
            .collect::<Vec<_>>(),
    )
    .expect("scaling preserves closedness");
    let scaled_a = SymmetricFunction::from_values(
        level,
        &element
            .values()
            .iter()
            .map(|&v| (v * factor) as i64)
            .collect::<Vec<_>>(),
    )
    .expect("level is positive");
    assert!(
        ghosts::is_ghost(&graph, &scaled_a, &scaled_m).expect("witness lies in S_ν"),
        "junior witness failed ghost validation"
    );
    let report = classify(&scaled_a);
    assert_eq!(
        report.verdict,
        AgeVerdict::Junior,
        "junior witness failed age validation"
    );
    Some(JuniorWitness {
        graph,
        multiplicity: scaled_m,
        element: scaled_a,
        age: report.age,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn witness_family_ages() {
        let (_, _, a5) = crate::gallery::junior5();
        assert_eq!(age_of(&a5), rational(4, 5));
        let (_, _, a8) = crate::gallery::junior8();
        assert_eq!(age_of(&a8), rational(3, 4));
        let (_, _, a12) = crate::gallery::junior12();
        assert_eq!(age_of(&a12), rational(2, 3));
        let (_, _, a7) = crate::gallery::junior_odd(7);
        assert_eq!(age_of(&a7), rational(5, 7));
    }

    #[test]
    fn classify_zero_is_trivial() {
        let zero = SymmetricFunction::zero(8, 4).unwrap();
        let report = classify(&zero);
        assert_eq!(report.verdict, AgeVerdict::Trivial);
        assert_eq!(report.age, rational(0, 1));
    }

    #[test]
    fn showcase_generator_ages_are_senior() {
        let (g, m) = crate::gallery::tower_showcase();
        let group = ghosts::ghost_group(&g, &m);
        let by_order: std::collections::BTreeMap<u64, BigRational> = group
            .generators()
            .iter()
            .map(|gen| (gen.declared_order, age_of(&gen.element)))
            .collect();
        assert_eq!(by_order[&2], rational(3, 2));
        assert_eq!(by_order[&4], rational(5, 4));
        assert_eq!(by_order[&8], BigRational::one());
        for gen in group.generators() {
            assert_eq!(classify(&gen.element).verdict, AgeVerdict::Senior);
        }
    }

    #[test]
    fn find_junior_on_level5_witness_graph() {
        let (g, m, _) = crate::gallery::junior5();
        let report = find_junior_ghost(&g, &m, 1_000_000).unwrap().unwrap();
        assert_eq!(report.age, rational(4, 5));
        // The lexicographically least junior ghost on this instance.
        assert_eq!(report.element.values(), &[1, 1, 0, 2]);
    }

    #[test]
    fn triangle_and_trees_have_no_juniors() {
        let (g, m) = crate::gallery::triangle3();
        assert!(find_junior_ghost(&g, &m, 1_000_000).unwrap().is_none());
        let (lg, lm) = crate::gallery::loop3();
        assert!(find_junior_ghost(&lg, &lm, 1_000_000).unwrap().is_none());
    }

    #[test]
    fn triangle_minimum_nontrivial_age_is_one() {
        let (g, m) = crate::gallery::triangle3();
        let min_age = ghosts::enumerate_ghosts(&g, &m, 1_000)
            .unwrap()
            .into_iter()
            .filter(|a| !a.is_zero())
            .map(|a| age_of(&a))
            .min()
            .unwrap();
        assert_eq!(min_age, BigRational::one());
    }

    #[test]
    fn age_plus_age_of_inverse_counts_support() {
        let (g, m) = crate::gallery::tower_showcase();
        let group = ghosts::ghost_group(&g, &m);
        for a in group.elements(1_000).unwrap() {
            let minus = a.scale(a.level() - 1);
            let total = age_of(&a) + age_of(&minus);
            assert_eq!(
                total,
                BigRational::from(BigInt::from(a.support().len() as u64))
            );
        }
    }

    #[test]
    fn small_sweeps_at_safe_levels_are_clean() {
        for level in [2u64, 3] {
            let report = junior_sweep(level, 3, 3, 100_000);
            assert!(report.is_clean(), "level {level} sweep found junior ghosts");
            assert!(report.instances > 0);
        }
    }

    #[test]
    fn level5_sweep_finds_the_witness() {
        let report = junior_sweep(5, 4, 3, 100_000);
        assert!(!report.witnesses.is_empty());
        assert!(report.skipped.is_empty());
        for w in &report.witnesses {
            assert_eq!(w.report.verdict, AgeVerdict::Junior);
        }
        assert_eq!(report.max_junior_age.clone().unwrap(), rational(4, 5));
    }

    #[test]
    fn witness_constructor_matches_the_no_junior_set() {
        for level in 1..=30u64 {
            let witness = junior_witness(level);
            let expected_none = matches!(level, 1 | 2 | 3 | 4 | 6);
            assert_eq!(witness.is_none(), expected_none, "level {level}");
        }
    }

    #[test]
    fn scaled_witnesses_keep_their_ages() {
        let w10 = junior_witness(10).unwrap();
        assert_eq!(w10.age, rational(4, 5));
        assert_eq!(w10.multiplicity.values(), &[2, 2, 4, 4]);
        let w7 = junior_witness(7).unwrap();
        assert_eq!(w7.age, rational(5, 7));
        let w9 = junior_witness(9).unwrap();
        assert_eq!(w9.age, rational(2, 3));
        let w24 = junior_witness(24).unwrap();
        assert_eq!(w24.age, rational(3, 4));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let (g, m) = crate::gallery::tower_showcase();
        // Candidate space 16384 and group order 64 both exceed a budget of 3;
        // the first three elements in scan order (zero and the order-2 and
        // order-4 generators, ages 0, 3/2, 5/4) are not junior.
        let err = find_junior_ghost(&g, &m, 3);
        assert!(matches!(
            err,
            Err(AgeError::BudgetExceeded {
                scanned: 3,
                budget: 3,
                ..
            })
        ));
    }
}
