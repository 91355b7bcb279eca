//! `Z/n`-valued cochains on a dual graph in degrees 0 and 1, with the
//! coboundary `δ`, the boundary `∂`, pairings, membership tests for `im δ`
//! and `ker ∂`, full enumeration of `ker ∂`, and transport along edge
//! contractions (blowup by zero-extension, compatible descent).
//!
//! A 1-cochain is antisymmetric on oriented edges; only the value on the
//! stored orientation is kept, and the value on the reverse is the negation.
//! Membership in `im δ` is decided by annihilation of the fundamental
//! circuits alone: integrating along the deterministic spanning tree produces
//! an explicit preimage over any coefficient group, so no linear algebra over
//! `Z/n` is needed. Dually, `ker ∂` is exactly the `Z/n`-span of the
//! fundamental circuits; both facts are exercised against brute force in the
//! test suite.
//!
//! All residues are stored normalized to `[0, n)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Circuit, Contraction, Cut, DualGraph, EdgeIdx, OrientedEdge, VertexIdx};

/// Errors from cochain construction or pairing.
#[derive(Debug, Error)]
pub enum CochainError {
    /// Cochain moduli must be ≥ 1.
    #[error("cochain modulus must be at least 1")]
    ZeroModulus,
    /// Two cochains entered a pairing with different moduli.
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch {
        /// Modulus of the left operand.
        left: u64,
        /// Modulus of the right operand.
        right: u64,
    },
    /// A 0-cochain cannot descend along a contraction because it is not
    /// constant on a contracted piece.
    #[error("0-cochain is not constant on the contracted piece containing `{vertex}`")]
    NotNuCompatible {
        /// A vertex of the offending piece.
        vertex: String,
    },
    /// A JSON value map referenced an edge id missing from the graph.
    #[error("cochain refers to unknown edge id `{id}`")]
    UnknownEdge {
        /// The unresolved id.
        id: String,
    },
    /// The JSON payload could not be parsed.
    #[error("invalid cochain JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A `Z/n`-valued function on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain0 {
    modulus: u64,
    values: Vec<u64>,
}

impl Cochain0 {
    /// The zero 0-cochain on `count` vertices.
    pub fn zeros(modulus: u64, count: usize) -> Result<Self, CochainError> {
        if modulus == 0 {
            return Err(CochainError::ZeroModulus);
        }
        Ok(Cochain0 {
            modulus,
            values: vec![0; count],
        })
    }

    /// Builds from integer values (normalized into `[0, n)`), one per vertex
    /// in canonical order.
    pub fn from_values(modulus: u64, values: &[i64]) -> Result<Self, CochainError> {
        if modulus == 0 {
            return Err(CochainError::ZeroModulus);
        }
        Ok(Cochain0 {
            modulus,
            values: values
                .iter()
                .map(|&v| v.rem_euclid(modulus as i64) as u64)
                .collect(),
        })
    }

    #[cfg(test)]
    pub(crate) fn from_residues(modulus: u64, values: Vec<u64>) -> Self {
        debug_assert!(modulus >= 1 && values.iter().all(|&v| v < modulus));
        Cochain0 { modulus, values }
    }

    /// The modulus `n`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Value at a vertex.
    pub fn value(&self, v: VertexIdx) -> u64 {
        self.values[v.0]
    }

    /// All values in canonical vertex order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Whether every value is zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// A `Z/n`-valued antisymmetric function on oriented edges, stored on the
/// canonical orientations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cochain1 {
    modulus: u64,
    values: Vec<u64>,
}

/// Wire form: `{"modulus": n, "values": {edge-id: int, …}}`; omitted edges
/// mean 0, and values refer to stored orientations.
#[derive(Serialize, Deserialize)]
struct Cochain1Json {
    modulus: u64,
    values: BTreeMap<String, i64>,
}

impl Cochain1 {
    /// The zero 1-cochain on `count` edges.
    pub fn zeros(modulus: u64, count: usize) -> Result<Self, CochainError> {
        if modulus == 0 {
            return Err(CochainError::ZeroModulus);
        }
        Ok(Cochain1 {
            modulus,
            values: vec![0; count],
        })
    }

    /// Builds from integer values (normalized into `[0, n)`), one per edge in
    /// canonical order.
    pub fn from_values(modulus: u64, values: &[i64]) -> Result<Self, CochainError> {
        if modulus == 0 {
            return Err(CochainError::ZeroModulus);
        }
        Ok(Cochain1 {
            modulus,
            values: values
                .iter()
                .map(|&v| v.rem_euclid(modulus as i64) as u64)
                .collect(),
        })
    }

    pub(crate) fn from_residues(modulus: u64, values: Vec<u64>) -> Self {
        debug_assert!(modulus >= 1 && values.iter().all(|&v| v < modulus));
        Cochain1 { modulus, values }
    }

    /// Builds from an edge-id → value map; missing edges are 0.
    pub fn from_map(
        graph: &DualGraph,
        modulus: u64,
        map: &BTreeMap<String, i64>,
    ) -> Result<Self, CochainError> {
        if modulus == 0 {
            return Err(CochainError::ZeroModulus);
        }
        let mut values = vec![0u64; graph.edge_count()];
        for (id, &v) in map {
            let e = graph
                .edge_idx(id)
                .ok_or_else(|| CochainError::UnknownEdge { id: id.clone() })?;
            values[e.0] = v.rem_euclid(modulus as i64) as u64;
        }
        Ok(Cochain1 { modulus, values })
    }

    /// Parses the cochain JSON wire format against a graph.
    pub fn from_json_str(graph: &DualGraph, text: &str) -> Result<Self, CochainError> {
        let raw: Cochain1Json = serde_json::from_str(text)?;
        Self::from_map(graph, raw.modulus, &raw.values)
    }

    /// Serializes to the cochain JSON wire format (zero values omitted).
    pub fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        let values: BTreeMap<String, i64> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (graph.edge(EdgeIdx(i)).id.clone(), v as i64))
            .collect();
        serde_json::to_value(Cochain1Json {
            modulus: self.modulus,
            values,
        })
        .expect("cochain serialization cannot fail")
    }

    /// The modulus `n`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Value on the stored orientation of an edge.
    pub fn value(&self, e: EdgeIdx) -> u64 {
        self.values[e.0]
    }

    /// Value on an arbitrary orientation (negated when reversed).
    pub fn value_on(&self, oe: OrientedEdge) -> u64 {
        let v = self.values[oe.edge.0];
        if oe.reversed && v != 0 {
            self.modulus - v
        } else {
            v
        }
    }

    /// All stored-orientation values in canonical edge order.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Whether every value is zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Cochain1) -> Result<Cochain1, CochainError> {
        check_moduli(self.modulus, other.modulus)?;
        assert_eq!(
            self.values.len(),
            other.values.len(),
            "cochains live on different graphs"
        );
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a + b) % self.modulus)
            .collect();
        Ok(Cochain1 {
            modulus: self.modulus,
            values,
        })
    }

    /// Scalar multiple `k·b`.
    pub fn scale(&self, k: u64) -> Cochain1 {
        let k = k % self.modulus;
        let values = self
            .values
            .iter()
            .map(|&v| ((v as u128 * k as u128) % self.modulus as u128) as u64)
            .collect();
        Cochain1 {
            modulus: self.modulus,
            values,
        }
    }
}

fn check_moduli(left: u64, right: u64) -> Result<(), CochainError> {
    if left == right {
        Ok(())
    } else {
        Err(CochainError::ModulusMismatch { left, right })
    }
}

/// The coboundary `(δa)(e) = a(e₊) − a(e₋)`; zero on loops.
pub fn delta(graph: &DualGraph, a: &Cochain0) -> Cochain1 {
    assert_eq!(
        a.values.len(),
        graph.vertex_count(),
        "0-cochain does not fit the graph"
    );
    let n = a.modulus;
    let values = graph
        .edges()
        .iter()
        .map(|e| (a.values[e.head.0] + n - a.values[e.tail.0]) % n)
        .collect();
    Cochain1 { modulus: n, values }
}

/// The boundary `(∂b)(v) = Σ_{e₊ = v} b(e)` over oriented edges into `v`;
/// loops contribute `b + (−b) = 0`.
pub fn partial(graph: &DualGraph, b: &Cochain1) -> Cochain0 {
    assert_eq!(
        b.values.len(),
        graph.edge_count(),
        "1-cochain does not fit the graph"
    );
    let n = b.modulus;
    let mut values = vec![0u64; graph.vertex_count()];
    for (i, e) in graph.edges().iter().enumerate() {
        if e.tail == e.head {
            continue;
        }
        let v = b.values[i];
        values[e.head.0] = (values[e.head.0] + v) % n;
        values[e.tail.0] = (values[e.tail.0] + n - v) % n;
    }
    Cochain0 { modulus: n, values }
}

/// The vertex pairing `⟨a₁, a₂⟩ = Σ_v a₁(v)·a₂(v) mod n`.
pub fn pairing0(a1: &Cochain0, a2: &Cochain0) -> Result<u64, CochainError> {
    check_moduli(a1.modulus, a2.modulus)?;
    assert_eq!(
        a1.values.len(),
        a2.values.len(),
        "0-cochains live on different graphs"
    );
    let n = a1.modulus as u128;
    let sum = a1
        .values
        .iter()
        .zip(&a2.values)
        .fold(0u128, |acc, (&x, &y)| (acc + x as u128 * y as u128) % n);
    Ok(sum as u64)
}

/// The edge pairing `⟨b₁, b₂⟩ = ½ Σ_{e ∈ 𝔼} b₁(e)·b₂(e)`, computed as the
/// sum over stored orientations.
pub fn pairing1(b1: &Cochain1, b2: &Cochain1) -> Result<u64, CochainError> {
    check_moduli(b1.modulus, b2.modulus)?;
    assert_eq!(
        b1.values.len(),
        b2.values.len(),
        "1-cochains live on different graphs"
    );
    let n = b1.modulus as u128;
    let sum = b1
        .values
        .iter()
        .zip(&b2.values)
        .fold(0u128, |acc, (&x, &y)| (acc + x as u128 * y as u128) % n);
    Ok(sum as u64)
}

/// The value `b(K) = Σ_i b(e_i)` of a cochain along a circuit, orientations
/// as traversed.
pub fn circuit_value(b: &Cochain1, circuit: &Circuit) -> u64 {
    let n = b.modulus;
    circuit
        .edges
        .iter()
        .fold(0u64, |acc, &oe| (acc + b.value_on(oe)) % n)
}

/// Whether `b ∈ im δ`: true iff every fundamental circuit value vanishes.
pub fn in_im_delta(graph: &DualGraph, b: &Cochain1) -> bool {
    graph
        .fundamental_circuits()
        .iter()
        .all(|k| circuit_value(b, k) == 0)
}

/// Whether `b ∈ ker ∂`.
pub fn in_ker_partial(graph: &DualGraph, b: &Cochain1) -> bool {
    partial(graph, b).is_zero()
}

/// The characteristic 1-cochain of a circuit: `+1` on each traversed
/// orientation.
pub fn circuit_cochain(graph: &DualGraph, circuit: &Circuit, modulus: u64) -> Cochain1 {
    let mut values = vec![0i64; graph.edge_count()];
    for oe in &circuit.edges {
        values[oe.edge.0] += if oe.reversed { -1 } else { 1 };
    }
    Cochain1::from_values(modulus, &values).expect("modulus validated by caller")
}

/// The characteristic 1-cochain of a cut: `±1` on edges crossing `W`.
pub fn cut_cochain(graph: &DualGraph, cut: &Cut, modulus: u64) -> Cochain1 {
    let values: Vec<i64> = (0..graph.edge_count())
        .map(|e| cut.coefficient(graph, EdgeIdx(e)) as i64)
        .collect();
    Cochain1::from_values(modulus, &values).expect("modulus validated by caller")
}

/// Iterator over all of `ker ∂ ⊂ C¹(Γ; Z/n)`: the `n^{b₁}` `Z/n`-linear
/// combinations of the fundamental circuit cochains, emitted in ascending
/// coefficient order (first circuit most significant).
pub struct KerPartialIter {
    modulus: u64,
    circuits: Vec<Cochain1>,
    edge_count: usize,
    counter: Vec<u64>,
    done: bool,
}

impl Iterator for KerPartialIter {
    type Item = Cochain1;

    fn next(&mut self) -> Option<Cochain1> {
        if self.done {
            return None;
        }
        let n = self.modulus;
        let mut values = vec![0u64; self.edge_count];
        for (coeff, circuit) in self.counter.iter().zip(&self.circuits) {
            if *coeff == 0 {
                continue;
            }
            for (slot, &v) in values.iter_mut().zip(&circuit.values) {
                *slot = ((*slot as u128 + *coeff as u128 * v as u128) % n as u128) as u64;
            }
        }
        // Odometer increment, last coefficient fastest.
        let mut pos = self.counter.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.counter[pos] += 1;
            if self.counter[pos] < n {
                break;
            }
            self.counter[pos] = 0;
        }
        Some(Cochain1 { modulus: n, values })
    }
}

/// Enumerates `ker ∂` over `Z/n`: exactly `n^{b₁}` distinct cochains.
pub fn enumerate_ker_partial(
    graph: &DualGraph,
    modulus: u64,
) -> Result<KerPartialIter, CochainError> {
    if modulus == 0 {
        return Err(CochainError::ZeroModulus);
    }
    let circuits = graph
        .fundamental_circuits()
        .iter()
        .map(|k| circuit_cochain(graph, k, modulus))
        .collect::<Vec<_>>();
    Ok(KerPartialIter {
        modulus,
        counter: vec![0; circuits.len()],
        circuits,
        edge_count: graph.edge_count(),
        done: false,
    })
}

/// The blowup homomorphism: a 1-cochain on the quotient extends by zero on
/// the contracted edges. Blowups of cuts are cuts; blowups of coboundaries
/// are coboundaries of pulled-back 0-cochains.
pub fn blowup1(c: &Cochain1, contraction: &Contraction) -> Cochain1 {
    assert_eq!(
        c.values.len(),
        contraction.quotient().edge_count(),
        "cochain does not fit the quotient"
    );
    let values = (0..contraction.source().edge_count())
        .map(|e| {
            contraction
                .quotient_edge(EdgeIdx(e))
                .map_or(0, |q| c.values[q.0])
        })
        .collect();
    Cochain1 {
        modulus: c.modulus,
        values,
    }
}

/// The contraction homomorphism on 0-cochains: descends `a` to the quotient
/// when `a` is constant on every contracted piece, else fails.
pub fn contract0(a: &Cochain0, contraction: &Contraction) -> Result<Cochain0, CochainError> {
    let source = contraction.source();
    assert_eq!(
        a.values.len(),
        source.vertex_count(),
        "0-cochain does not fit the source"
    );
    let quotient_count = contraction.quotient().vertex_count();
    let mut descended: Vec<Option<u64>> = vec![None; quotient_count];
    for v in 0..source.vertex_count() {
        let class = contraction.map_vertex(VertexIdx(v));
        match descended[class.0] {
            None => descended[class.0] = Some(a.values[v]),
            Some(existing) if existing == a.values[v] => {}
            Some(_) => {
                return Err(CochainError::NotNuCompatible {
                    vertex: source.vertex(VertexIdx(v)).id.clone(),
                })
            }
        }
    }
    Ok(Cochain0 {
        modulus: a.modulus,
        values: descended
            .into_iter()
            .map(|v| v.expect("every class has a member"))
            .collect(),
    })
}
