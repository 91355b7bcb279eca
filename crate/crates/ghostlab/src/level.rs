//! Multiplicity data of a level-`l` curve over its dual graph: the closed
//! multiplicity cochain `M`, per-edge local indices `(r, m)`, truncated
//! `p`-adic valuation profiles, filtration subgraphs, and the contraction
//! towers that reduce ghost-group computations to one prime at a time.
//!
//! For each prime power `p^{e_p} ∥ l`, the truncated valuation of an edge is
//! `ν_p(e) = val_p(M(e) mod p^{e_p})`, with `∞` exactly when `M(e) ≡ 0 mod
//! p^{e_p}`. The filtration subgraph `Δ(ν_p^k)` collects the edges with
//! `ν_p(e) ≥ k`; contracting it (directly from the source graph) yields the
//! tower stage `Γ(ν_p^k)`. Stages are nested: lower `k` contracts more.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochain::{self, Cochain1, CochainError};
use crate::graph::{Contraction, DualGraph, EdgeIdx};

/// Errors from level-structure computations.
#[derive(Debug, Error)]
pub enum LevelError {
    /// Levels must be ≥ 1.
    #[error("level must be at least 1")]
    ZeroLevel,
    /// A multiplicity cochain must lie in `ker ∂`.
    #[error("multiplicity cochain is not closed: ∂M ≠ 0 at vertex `{vertex}`")]
    NotClosed {
        /// A vertex where the boundary fails to vanish.
        vertex: String,
    },
    /// A per-prime operation received a prime outside the level.
    #[error("prime {p} does not divide the level {level}")]
    PrimeDoesNotDivide {
        /// The offending prime.
        p: u64,
        /// The ambient level.
        level: u64,
    },
    /// A filtration index beyond the prime's exponent in the level.
    #[error("filtration index {k} exceeds the exponent {exponent} of {p} in the level")]
    IndexOutOfRange {
        /// The prime.
        p: u64,
        /// The requested index.
        k: u32,
        /// The exponent `e_p` of `p` in the level.
        exponent: u32,
    },
    /// An underlying cochain error (moduli, JSON, unknown edges).
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

/// The prime-power factorization of `n ≥ 1`, ascending in `p`.
pub fn prime_powers(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorization needs n ≥ 1");
    let mut remaining = n;
    let mut factors = Vec::new();
    let mut p = 2;
    while p * p <= remaining {
        if remaining.is_multiple_of(p) {
            let mut exponent = 0;
            while remaining.is_multiple_of(p) {
                remaining /= p;
                exponent += 1;
            }
            factors.push((p, exponent));
        }
        p += 1;
    }
    if remaining > 1 {
        factors.push((remaining, 1));
    }
    factors
}

/// Local indices of an edge: `r = l/gcd(M(e), l)` is the local stabilizer
/// order, `m = (M(e)/gcd) mod r` its multiplicity index (`gcd(m, r) = 1`
/// when `M(e) ≠ 0`; `(r, m) = (1, 0)` when `M(e) = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalIndices {
    /// Order of the local subgroup attached to the edge.
    pub r: u64,
    /// Multiplicity index, a unit mod `r` (or 0 when `r = 1`).
    pub m: u64,
}

/// A closed `Z/l`-valued 1-cochain: the combinatorial fingerprint `M` of a
/// level-`l` structure. Construction verifies `M ∈ ker ∂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityCochain {
    cochain: Cochain1,
}

/// Wire form: `{"level": l, "values": {edge-id: int, …}}`; omitted edges 0.
#[derive(Serialize, Deserialize)]
struct MultiplicityJson {
    level: u64,
    values: BTreeMap<String, i64>,
}

impl MultiplicityCochain {
    /// Wraps a cochain after checking closedness.
    pub fn new(graph: &DualGraph, cochain: Cochain1) -> Result<Self, LevelError> {
        let boundary = cochain::partial(graph, &cochain);
        if let Some(bad) = boundary.values().iter().position(|&v| v != 0) {
            return Err(LevelError::NotClosed {
                vertex: graph.vertices()[bad].id.clone(),
            });
        }
        Ok(MultiplicityCochain { cochain })
    }

    /// Builds from integer values in canonical edge order.
    pub fn from_values(graph: &DualGraph, level: u64, values: &[i64]) -> Result<Self, LevelError> {
        if level == 0 {
            return Err(LevelError::ZeroLevel);
        }
        Self::new(graph, Cochain1::from_values(level, values)?)
    }

    /// Parses the multiplicity JSON wire format against a graph.
    pub fn from_json_str(graph: &DualGraph, text: &str) -> Result<Self, LevelError> {
        let raw: MultiplicityJson = serde_json::from_str(text).map_err(CochainError::from)?;
        if raw.level == 0 {
            return Err(LevelError::ZeroLevel);
        }
        Self::new(graph, Cochain1::from_map(graph, raw.level, &raw.values)?)
    }

    /// Serializes to the multiplicity JSON wire format (zeros omitted).
    pub fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        let mut json = self.cochain.to_json(graph);
        let map = json.as_object_mut().expect("cochain JSON is an object");
        let modulus = map.remove("modulus").expect("cochain JSON has a modulus");
        map.insert("level".to_string(), modulus);
        json
    }

    /// The level `l`.
    pub fn level(&self) -> u64 {
        self.cochain.modulus()
    }

    /// The underlying 1-cochain.
    pub fn cochain(&self) -> &Cochain1 {
        &self.cochain
    }

    /// Value on the stored orientation of an edge.
    pub fn value(&self, e: EdgeIdx) -> u64 {
        self.cochain.value(e)
    }

    /// All stored-orientation values in canonical edge order.
    pub fn values(&self) -> &[u64] {
        self.cochain.values()
    }

    /// Whether `M = 0`.
    pub fn is_zero(&self) -> bool {
        self.cochain.is_zero()
    }

    /// Local indices `(r, m)` of an edge.
    pub fn local_indices(&self, e: EdgeIdx) -> LocalIndices {
        let level = self.level();
        let value = self.value(e);
        let g = gcd(value, level);
        let r = level / g;
        LocalIndices {
            r,
            m: (value / g) % r.max(1),
        }
    }

    /// The truncated valuation profile of `M`, one row per prime dividing `l`.
    pub fn valuation(&self) -> ValuationProfile {
        let level = self.level();
        let primes = prime_powers(level)
            .into_iter()
            .map(|(p, exponent)| {
                let pk = p.pow(exponent);
                let values = self
                    .values()
                    .iter()
                    .map(|&v| {
                        let truncated = v % pk;
                        if truncated == 0 {
                            Valuation::Infinite
                        } else {
                            let mut x = truncated;
                            let mut val = 0;
                            while x % p == 0 {
                                x /= p;
                                val += 1;
                            }
                            Valuation::Finite(val)
                        }
                    })
                    .collect();
                PrimeValuations {
                    p,
                    exponent,
                    values,
                }
            })
            .collect();
        ValuationProfile { level, primes }
    }

    /// The filtration subgraph `Δ(ν_p^k)`: edges with `ν_p(e) ≥ k`, i.e.
    /// `p^k | (M(e) mod p^{e_p})`, in canonical order. `k = 0` is all edges.
    pub fn filtration_subgraph(&self, p: u64, k: u32) -> Result<Vec<EdgeIdx>, LevelError> {
        let exponent = self.exponent_of(p)?;
        if k > exponent {
            return Err(LevelError::IndexOutOfRange { p, k, exponent });
        }
        let pe = p.pow(exponent);
        let pk = p.pow(k);
        Ok(self
            .values()
            .iter()
            .enumerate()
            .filter(|(_, &v)| (v % pe) % pk == 0)
            .map(|(i, _)| EdgeIdx(i))
            .collect())
    }

    /// The contraction tower at `p`: stages `Γ(ν_p^k)` for `k = e_p, …, 1, 0`,
    /// each contracted directly from the source graph; stage 0 is a point.
    pub fn contraction_tower(
        &self,
        graph: &DualGraph,
        p: u64,
    ) -> Result<ContractionTower, LevelError> {
        let exponent = self.exponent_of(p)?;
        let stages = (0..=exponent)
            .rev()
            .map(|k| {
                let edges: BTreeSet<EdgeIdx> =
                    self.filtration_subgraph(p, k)?.into_iter().collect();
                Ok(TowerStage {
                    k,
                    contraction: graph.contract(&edges),
                })
            })
            .collect::<Result<Vec<_>, LevelError>>()?;
        debug_assert_eq!(
            stages
                .last()
                .map(|s| s.contraction.quotient().vertex_count()),
            Some(1)
        );
        Ok(ContractionTower {
            p,
            exponent,
            stages,
        })
    }

    fn exponent_of(&self, p: u64) -> Result<u32, LevelError> {
        prime_powers(self.level())
            .into_iter()
            .find(|&(q, _)| q == p)
            .map(|(_, e)| e)
            .ok_or(LevelError::PrimeDoesNotDivide {
                p,
                level: self.level(),
            })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A truncated valuation: a finite value in `{0, …, e_p − 1}` or `∞`
/// (the sentinel orders above every finite value, and `a + ∞ = ∞`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    /// `val_p` of the truncated value.
    Finite(u32),
    /// `M(e) ≡ 0 mod p^{e_p}`.
    Infinite,
}

impl Valuation {
    /// JSON form: a number, or the string `"inf"`.
    pub fn to_json(self) -> serde_json::Value {
        match self {
            Valuation::Finite(v) => serde_json::Value::from(v),
            Valuation::Infinite => serde_json::Value::from("inf"),
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Valuations of every edge at one prime dividing the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeValuations {
    /// The prime `p`.
    pub p: u64,
    /// Its exponent `e_p` in the level.
    pub exponent: u32,
    /// `ν_p(e)` per edge in canonical order (symmetric under `e ↦ ē`).
    pub values: Vec<Valuation>,
}

/// The full valuation profile of a multiplicity cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationProfile {
    /// The ambient level.
    pub level: u64,
    /// One row per prime dividing the level, ascending.
    pub primes: Vec<PrimeValuations>,
}

impl ValuationProfile {
    /// The row for a given prime, if `p | l`.
    pub fn for_prime(&self, p: u64) -> Option<&PrimeValuations> {
        self.primes.iter().find(|row| row.p == p)
    }

    /// JSON form: `{"level": l, "primes": [{"p", "exponent", "values": {edge-id: ν}}]}`.
    pub fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "primes": self.primes.iter().map(|row| {
                serde_json::json!({
                    "p": row.p,
                    "exponent": row.exponent,
                    "values": row.values.iter().enumerate().map(|(i, v)| {
                        (graph.edge(EdgeIdx(i)).id.clone(), v.to_json())
                    }).collect::<serde_json::Map<String, serde_json::Value>>(),
                })
            }).collect::<Vec<_>>(),
        })
    }
}

/// One stage `Γ(ν_p^k)` of a contraction tower.
#[derive(Clone, Debug)]
pub struct TowerStage {
    /// The filtration index `k`.
    pub k: u32,
    /// The contraction `Γ → Γ(ν_p^k)` of `Δ(ν_p^k)`.
    pub contraction: Contraction,
}

/// The contraction tower `Γ → Γ(ν_p^{e_p}) → … → Γ(ν_p^1) → point` at one
/// prime, every stage taken directly from the source graph.
#[derive(Clone, Debug)]
pub struct ContractionTower {
    /// The prime `p`.
    pub p: u64,
    /// Its exponent `e_p` in the level.
    pub exponent: u32,
    /// Stages for `k = e_p, …, 1, 0` in that order.
    pub stages: Vec<TowerStage>,
}

impl ContractionTower {
    /// The stage with filtration index `k`.
    pub fn stage(&self, k: u32) -> &TowerStage {
        self.stages
            .iter()
            .find(|s| s.k == k)
            .expect("stage index within 0..=exponent")
    }

    /// Vertex counts `#V(ν_p^k)` for `k = e_p, …, 1` (stage 0 is always 1).
    pub fn vertex_counts(&self) -> Vec<usize> {
        self.stages
            .iter()
            .filter(|s| s.k > 0)
            .map(|s| s.contraction.quotient().vertex_count())
            .collect()
    }

    /// `ΣV_p = Σ_{k=1}^{e_p} #V(ν_p^k)`, the exponent sum driving the ghost
    /// group order at `p`.
    pub fn sigma_v(&self) -> usize {
        self.vertex_counts().iter().sum()
    }
}

/// Enumerates all `l^{b₁}` multiplicity cochains on a graph: the full kernel
/// of `∂` over `Z/l`, in the deterministic order of the circuit-span odometer.
pub fn enumerate_multiplicities(
    graph: &DualGraph,
    level: u64,
) -> Result<impl Iterator<Item = MultiplicityCochain>, LevelError> {
    if level == 0 {
        return Err(LevelError::ZeroLevel);
    }
    let iter = cochain::enumerate_ker_partial(graph, level)?;
    Ok(iter.map(|cochain| MultiplicityCochain { cochain }))
}
