//! The ghost-automorphism group of a level structure: symmetric edge
//! functions, the dictionary between symmetric functions and 1-cochains, the
//! ghost membership test, the structure theorem with explicit canonical
//! generators, and a brute-force enumeration oracle.
//!
//! A ghost candidate is a symmetric function `a` on unoriented edges whose
//! value at `e` lies in the order-`r(e)` subgroup of `Z/l` (the set `S_ν`),
//! vanishing where `M = 0`. It is a *ghost* precisely when the associated
//! cochain `b(e) = m(e)·a(e)` lies in `im δ`. The group of ghosts decomposes
//! as `⊕_p ⊕_k (Z/p^k)^{α_p^k}` where the exponents are successive
//! differences of contraction-tower vertex counts, and its order is
//! `∏_p p^{ΣV_p − e_p}`.
//!
//! Canonical generators: for each prime `p` and each tower stage `k`, the
//! single-class cuts of `Γ(ν_p^k)` blown up to the source graph and scaled by
//! `l/p^{e_p−k+1}` all lie in `S_ν`; within each fiber of
//! `V(ν_p^k) → V(ν_p^{k−1})` their sum is `p` times the coarser stage's cut,
//! so omitting one cut per fiber (the last after sorting by age, then value
//! vector) leaves an independent generating set realizing the elementary
//! divisors. The test suite verifies this against the oracle.

use std::collections::BTreeMap;

use num::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochain::{self, Cochain1, CochainError};
use crate::graph::{Cut, DualGraph, EdgeIdx, OrientedEdge, VertexIdx};
use crate::level::{prime_powers, MultiplicityCochain};

/// Default ceiling on brute-force candidate counts.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

/// Errors from ghost computations.
#[derive(Debug, Error)]
pub enum GhostError {
    /// Levels must be ≥ 1.
    #[error("level must be at least 1")]
    ZeroLevel,
    /// Two objects at different levels met.
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch {
        /// Level of the left operand.
        left: u64,
        /// Level of the right operand.
        right: u64,
    },
    /// A symmetric function violates the `S_ν` constraints.
    #[error(
        "symmetric function lies outside S_ν at edge `{edge}`: value {value} is not a multiple of {required}"
    )]
    NotInSNu {
        /// The offending edge id.
        edge: String,
        /// Its value (a `ξ_l`-exponent).
        value: u64,
        /// The required divisor `l/r(e)`.
        required: u64,
    },
    /// A cochain value escapes the order-`r(e)` subgroup.
    #[error(
        "cochain lies outside C¹_ν at edge `{edge}`: value {value} is not a multiple of {required}"
    )]
    OutsideCNu {
        /// The offending edge id.
        edge: String,
        /// Its value.
        value: u64,
        /// The required divisor `l/r(e)`.
        required: u64,
    },
    /// A brute-force enumeration would exceed its budget.
    #[error("budget exceeded: {candidates} candidates over budget {budget}")]
    BudgetExceeded {
        /// The candidate count that was refused.
        candidates: BigUint,
        /// The configured budget.
        budget: u64,
    },
    /// An underlying cochain error (JSON, unknown edges).
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// A symmetric `μ_l`-valued edge function, stored as `ξ_l`-exponents in
/// `Z/l` per unoriented edge (canonical order).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SymmetricFunction {
    level: u64,
    values: Vec<u64>,
}

/// Wire form: `{"level": l, "values": {edge-id: int, …}}`; omitted edges 0.
#[derive(Serialize, Deserialize)]
struct SymmetricJson {
    level: u64,
    values: BTreeMap<String, i64>,
}

impl SymmetricFunction {
    /// The zero function on `count` edges.
    pub fn zero(level: u64, count: usize) -> Result<Self, GhostError> {
        if level == 0 {
            return Err(GhostError::ZeroLevel);
        }
        Ok(SymmetricFunction {
            level,
            values: vec![0; count],
        })
    }

    /// Builds from integer exponents (normalized into `[0, l)`), one per
    /// edge in canonical order.
    pub fn from_values(level: u64, values: &[i64]) -> Result<Self, GhostError> {
        if level == 0 {
            return Err(GhostError::ZeroLevel);
        }
        Ok(SymmetricFunction {
            level,
            values: values
                .iter()
                .map(|&v| v.rem_euclid(level as i64) as u64)
                .collect(),
        })
    }

    pub(crate) fn from_residues(level: u64, values: Vec<u64>) -> Self {
        debug_assert!(level >= 1 && values.iter().all(|&v| v < level));
        SymmetricFunction { level, values }
    }

    /// Parses the ghost JSON wire format against a graph.
    pub fn from_json_str(graph: &DualGraph, text: &str) -> Result<Self, GhostError> {
        let raw: SymmetricJson = serde_json::from_str(text).map_err(CochainError::from)?;
        if raw.level == 0 {
            return Err(GhostError::ZeroLevel);
        }
        let mut values = vec![0u64; graph.edge_count()];
        for (id, &v) in &raw.values {
            let e = graph
                .edge_idx(id)
                .ok_or_else(|| CochainError::UnknownEdge { id: id.clone() })?;
            values[e.0] = v.rem_euclid(raw.level as i64) as u64;
        }
        Ok(SymmetricFunction {
            level: raw.level,
            values,
        })
    }

    /// Serializes to the ghost JSON wire format (zeros omitted).
    pub fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        let values: BTreeMap<String, i64> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (graph.edge(EdgeIdx(i)).id.clone(), v as i64))
            .collect();
        serde_json::to_value(SymmetricJson {
            level: self.level,
            values,
        })
        .expect("symmetric function serialization cannot fail")
    }

    /// The ambient level `l`.
    pub fn level(&self) -> u64 {
        self.level
    }

    /// Value (exponent) on an unoriented edge.
    pub fn value(&self, e: EdgeIdx) -> u64 {
        self.values[e.0]
    }

    /// All values in canonical edge order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Whether this is the trivial function.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Edges with nonzero value, in canonical order.
    pub fn support(&self) -> Vec<EdgeIdx> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| EdgeIdx(i))
            .collect()
    }

    /// The order of the element in `(Z/l)^E`: the lcm of `l/gcd(v, l)`.
    pub fn order(&self) -> u64 {
        self.values
            .iter()
            .map(|&v| self.level / gcd(v, self.level))
            .fold(1, lcm)
    }

    /// Pointwise sum (levels must match).
    pub fn add(&self, other: &SymmetricFunction) -> SymmetricFunction {
        assert_eq!(self.level, other.level, "levels must match");
        assert_eq!(
            self.values.len(),
            other.values.len(),
            "edge counts must match"
        );
        SymmetricFunction {
            level: self.level,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| (a + b) % self.level)
                .collect(),
        }
    }

    /// Scalar multiple `k·a`.
    pub fn scale(&self, k: u64) -> SymmetricFunction {
        let k = k % self.level;
        SymmetricFunction {
            level: self.level,
            values: self
                .values
                .iter()
                .map(|&v| ((v as u128 * k as u128) % self.level as u128) as u64)
                .collect(),
        }
    }

    /// Checks membership in `S_ν`: every value a multiple of `l/r(e)`
    /// (in particular 0 where `M(e) = 0`).
    pub fn check_in_s_nu(
        &self,
        graph: &DualGraph,
        multiplicity: &MultiplicityCochain,
    ) -> Result<(), GhostError> {
        if self.level != multiplicity.level() {
            return Err(GhostError::LevelMismatch {
                left: self.level,
                right: multiplicity.level(),
            });
        }
        assert_eq!(
            self.values.len(),
            graph.edge_count(),
            "function does not fit the graph"
        );
        for (i, &value) in self.values.iter().enumerate() {
            let e = EdgeIdx(i);
            let required = self.level / multiplicity.local_indices(e).r;
            if value % required != 0 {
                return Err(GhostError::NotInSNu {
                    edge: graph.edge(e).id.clone(),
                    value,
                    required,
                });
            }
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Modular inverse of `a` mod `r` for `gcd(a, r) = 1` (`r = 1` gives 0).
fn inverse_mod(a: u64, r: u64) -> u64 {
    if r == 1 {
        return 0;
    }
    let (mut old_r, mut cur_r) = (a as i128 % r as i128, r as i128);
    let (mut old_s, mut cur_s) = (1i128, 0i128);
    while cur_r != 0 {
        let q = old_r.div_euclid(cur_r);
        (old_r, cur_r) = (cur_r, old_r - q * cur_r);
        (old_s, cur_s) = (cur_s, old_s - q * cur_s);
    }
    debug_assert_eq!(old_r, 1, "inverse requires gcd(a, r) = 1");
    old_s.rem_euclid(r as i128) as u64
}

/// The dictionary `a ↦ b`: `b(e) = m(e)·a(e)` in `ξ_l`-exponents.
/// Fails when `a ∉ S_ν`.
pub fn sym_to_cochain(
    graph: &DualGraph,
    a: &SymmetricFunction,
    multiplicity: &MultiplicityCochain,
) -> Result<Cochain1, GhostError> {
    a.check_in_s_nu(graph, multiplicity)?;
    let level = a.level();
    let values = a
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let m = multiplicity.local_indices(EdgeIdx(i)).m;
            ((v as u128 * m as u128) % level as u128) as u64
        })
        .collect();
    Ok(Cochain1::from_residues(level, values))
}

/// The inverse dictionary `b ↦ a`: `a(e) = (l/r)·([m(e)⁻¹]_r·(b(e)/(l/r)))`
/// where `M(e) ≠ 0`, and 0 where `M(e) = 0`. Fails when some `b(e)` escapes
/// the order-`r(e)` subgroup.
pub fn cochain_to_sym(
    graph: &DualGraph,
    b: &Cochain1,
    multiplicity: &MultiplicityCochain,
) -> Result<SymmetricFunction, GhostError> {
    let level = multiplicity.level();
    if b.modulus() != level {
        return Err(GhostError::LevelMismatch {
            left: b.modulus(),
            right: level,
        });
    }
    assert_eq!(
        b.values().len(),
        graph.edge_count(),
        "cochain does not fit the graph"
    );
    let values = b
        .values()
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let e = EdgeIdx(i);
            let idx = multiplicity.local_indices(e);
            let step = level / idx.r;
            if value % step != 0 {
                return Err(GhostError::OutsideCNu {
                    edge: graph.edge(e).id.clone(),
                    value,
                    required: step,
                });
            }
            let in_subgroup = value / step; // an element of Z/r
            let inverse = inverse_mod(idx.m.max(1), idx.r);
            Ok(step * ((inverse as u128 * in_subgroup as u128 % idx.r.max(1) as u128) as u64))
        })
        .collect::<Result<Vec<u64>, GhostError>>()?;
    Ok(SymmetricFunction::from_residues(level, values))
}

/// Whether `a` is a ghost: `a ∈ S_ν` and `sym_to_cochain(a) ∈ im δ`.
pub fn is_ghost(
    graph: &DualGraph,
    a: &SymmetricFunction,
    multiplicity: &MultiplicityCochain,
) -> Result<bool, GhostError> {
    let b = sym_to_cochain(graph, a, multiplicity)?;
    Ok(cochain::in_im_delta(graph, &b))
}

/// One generator of a ghost group, with its exact order.
#[derive(Clone, Debug)]
pub struct GhostGenerator {
    /// The order of the generator (a prime power dividing `l`).
    pub declared_order: u64,
    /// The generator itself.
    pub element: SymmetricFunction,
}

/// The `p`-primary data of a ghost group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryPart {
    /// The prime `p`.
    pub p: u64,
    /// `α_p^k` for `k = 1, …, e_p`: the multiplicity of `Z/p^k`.
    pub alphas: Vec<usize>,
    /// `ΣV_p`, the tower vertex-count sum.
    pub sigma_v: usize,
}

/// The ghost-automorphism group of `(Γ, M)`: elementary divisors, order, and
/// canonical generators.
#[derive(Clone, Debug)]
pub struct GhostGroup {
    level: u64,
    edge_count: usize,
    primary: Vec<PrimaryPart>,
    order: BigUint,
    generators: Vec<GhostGenerator>,
}

impl GhostGroup {
    /// The ambient level.
    pub fn level(&self) -> u64 {
        self.level
    }

    /// The group order `∏_p p^{ΣV_p − e_p}`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Whether the group is trivial.
    pub fn is_trivial(&self) -> bool {
        self.order == BigUint::from(1u8)
    }

    /// Per-prime exponent data.
    pub fn primary_parts(&self) -> &[PrimaryPart] {
        &self.primary
    }

    /// The elementary divisors `p^k`, each repeated `α_p^k` times, ascending
    /// by `(p, k)`.
    pub fn divisors(&self) -> Vec<u64> {
        self.primary
            .iter()
            .flat_map(|part| {
                part.alphas.iter().enumerate().flat_map(move |(i, &alpha)| {
                    std::iter::repeat_n(part.p.pow(i as u32 + 1), alpha)
                })
            })
            .collect()
    }

    /// Canonical generators; their declared orders are exact and multiply to
    /// the group order.
    pub fn generators(&self) -> &[GhostGenerator] {
        &self.generators
    }

    /// Human-readable structure, e.g. `Z/2 ⊕ Z/4 ⊕ Z/8` (or `trivial`).
    pub fn structure(&self) -> String {
        let divisors = self.divisors();
        if divisors.is_empty() {
            "trivial".to_string()
        } else {
            divisors
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join(" ⊕ ")
        }
    }

    /// Lazily walks every element as coefficient combinations of the
    /// generators, in deterministic odometer order (last generator fastest,
    /// starting from zero). Yields exactly `order` elements.
    pub fn elements_iter(&self) -> impl Iterator<Item = SymmetricFunction> + '_ {
        let zero = SymmetricFunction::from_residues(self.level, vec![0; self.edge_count]);
        let mut coefficients = vec![0u64; self.generators.len()];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let element = coefficients
                .iter()
                .zip(&self.generators)
                .filter(|(&c, _)| c != 0)
                .fold(zero.clone(), |acc, (&c, g)| acc.add(&g.element.scale(c)));
            let mut pos = coefficients.len();
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                coefficients[pos] += 1;
                if coefficients[pos] < self.generators[pos].declared_order {
                    break;
                }
                coefficients[pos] = 0;
            }
            Some(element)
        })
    }

    /// Collects every element; fails if the order exceeds the budget.
    pub fn elements(&self, budget: u64) -> Result<Vec<SymmetricFunction>, GhostError> {
        if self.order > BigUint::from(budget) {
            return Err(GhostError::BudgetExceeded {
                candidates: self.order.clone(),
                budget,
            });
        }
        Ok(self.elements_iter().collect())
    }

    /// JSON form with structure, order (decimal string), and generators.
    pub fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "order": self.order.to_string(),
            "structure": self.structure(),
            "divisors": self.divisors(),
            "primary": self.primary.iter().map(|part| serde_json::json!({
                "p": part.p,
                "alphas": part.alphas,
                "sigma_v": part.sigma_v,
            })).collect::<Vec<_>>(),
            "generators": self.generators.iter().map(|g| serde_json::json!({
                "order": g.declared_order,
                "values": g.element.to_json(graph)["values"],
            })).collect::<Vec<_>>(),
        })
    }
}

/// Computes the ghost group of `(Γ, M)` from the contraction towers.
///
/// Closedness of `M` is guaranteed by its type; the construction needs no
/// budget (it is polynomial in the graph size).
pub fn ghost_group(graph: &DualGraph, multiplicity: &MultiplicityCochain) -> GhostGroup {
    let level = multiplicity.level();
    let mut primary = Vec::new();
    let mut generators = Vec::new();
    let mut order = BigUint::from(1u8);
    for (p, e_p) in prime_powers(level) {
        let tower = multiplicity
            .contraction_tower(graph, p)
            .expect("factor primes divide the level");
        let count_at = |k: u32| tower.stage(k).contraction.quotient().vertex_count();
        let alphas: Vec<usize> = (1..=e_p)
            .map(|k| count_at(e_p - k + 1) - count_at(e_p - k))
            .collect();
        let sigma_v = tower.sigma_v();
        order *= num::pow(BigUint::from(p), sigma_v - e_p as usize);
        for k in 1..=e_p {
            let declared_order = p.pow(e_p - k + 1);
            let coefficient = level / declared_order;
            let stage = &tower.stage(k).contraction;
            let coarser = &tower.stage(k - 1).contraction;
            // Fibers of V(ν_p^k) → V(ν_p^{k−1}), keyed by coarser class.
            let mut fibers: BTreeMap<VertexIdx, Vec<VertexIdx>> = BTreeMap::new();
            let mut seen = vec![false; stage.quotient().vertex_count()];
            for v in 0..graph.vertex_count() {
                let class = stage.map_vertex(VertexIdx(v));
                if !seen[class.0] {
                    seen[class.0] = true;
                    fibers
                        .entry(coarser.map_vertex(VertexIdx(v)))
                        .or_default()
                        .push(class);
                }
            }
            for fiber in fibers.values() {
                if fiber.len() < 2 {
                    continue;
                }
                let mut candidates: Vec<(u64, SymmetricFunction)> = fiber
                    .iter()
                    .map(|&class| {
                        let a = class_cut_generator(graph, multiplicity, stage, class, coefficient);
                        (a.values().iter().sum(), a)
                    })
                    .collect();
                candidates.sort_by(|(sum_a, a), (sum_b, b)| sum_a.cmp(sum_b).then(a.cmp(b)));
                candidates.pop();
                generators.extend(candidates.into_iter().map(|(_, element)| {
                    debug_assert_eq!(element.order(), declared_order);
                    GhostGenerator {
                        declared_order,
                        element,
                    }
                }));
            }
        }
        primary.push(PrimaryPart { p, alphas, sigma_v });
    }
    GhostGroup {
        level,
        edge_count: graph.edge_count(),
        primary,
        order,
        generators,
    }
}

/// The symmetric form of the blown-up cut of one stage class, scaled.
fn class_cut_generator(
    graph: &DualGraph,
    multiplicity: &MultiplicityCochain,
    stage: &crate::graph::Contraction,
    class: VertexIdx,
    coefficient: u64,
) -> SymmetricFunction {
    let side = (0..graph.vertex_count())
        .map(VertexIdx)
        .filter(|&v| stage.map_vertex(v) == class)
        .collect();
    let b = cochain::cut_cochain(graph, &Cut { side }, multiplicity.level()).scale(coefficient);
    cochain_to_sym(graph, &b, multiplicity)
        .expect("scaled tower cuts always lie in the admissible subgroups")
}

/// The number of brute-force candidates `∏_e r(e)` — the size of `S_ν`.
pub fn candidate_count(multiplicity: &MultiplicityCochain) -> BigUint {
    (0..multiplicity.values().len())
        .map(|i| BigUint::from(multiplicity.local_indices(EdgeIdx(i)).r))
        .product()
}

/// Brute-force oracle: enumerates every ghost by scanning all of `S_ν` and
/// testing membership of the associated cochain in `im δ`. Output is sorted
/// lexicographically by value vector. Fails when `∏ r(e)` exceeds the budget.
pub fn enumerate_ghosts(
    graph: &DualGraph,
    multiplicity: &MultiplicityCochain,
    budget: u64,
) -> Result<Vec<SymmetricFunction>, GhostError> {
    let level = multiplicity.level();
    let per_edge: Vec<(u64, u64, u64)> = (0..graph.edge_count())
        .map(|i| {
            let idx = multiplicity.local_indices(EdgeIdx(i));
            (idx.r, level / idx.r, idx.m)
        })
        .collect();
    let candidates: BigUint = per_edge.iter().map(|&(r, _, _)| BigUint::from(r)).product();
    if candidates > BigUint::from(budget) {
        return Err(GhostError::BudgetExceeded { candidates, budget });
    }
    let circuits: Vec<Vec<OrientedEdge>> = graph
        .fundamental_circuits()
        .into_iter()
        .map(|c| c.edges)
        .collect();
    let mut ticks = vec![0u64; per_edge.len()];
    let mut btilde = vec![0u64; per_edge.len()];
    let mut out = Vec::new();
    loop {
        for ((slot, &t), &(_, step, m)) in btilde.iter_mut().zip(&ticks).zip(&per_edge) {
            *slot = ((t * step) as u128 * m as u128 % level as u128) as u64;
        }
        let annihilates = circuits.iter().all(|k| {
            k.iter().fold(0u64, |acc, oe| {
                let v = btilde[oe.edge.0];
                let oriented = if oe.reversed && v != 0 { level - v } else { v };
                (acc + oriented) % level
            }) == 0
        });
        if annihilates {
            let values = ticks
                .iter()
                .zip(&per_edge)
                .map(|(&t, &(_, step, _))| t * step)
                .collect();
            out.push(SymmetricFunction::from_residues(level, values));
        }
        // Odometer: last edge fastest, so output is lex-sorted by values.
        let mut pos = ticks.len();
        loop {
            if pos == 0 {
                return Ok(out);
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
