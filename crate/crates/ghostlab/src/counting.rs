//! Arithmetic audits: the point count `Φ_n(l)`, the forgetful-map degree
//! `Φ_{2g}(l)/l`, per-multiplicity fiber decompositions with the total-length
//! identity `Σ = l^{2g}`, component lengths computed two independent ways,
//! and the boundary-degree bookkeeping for prime levels.
//!
//! Everything here is exact: arbitrary-precision integers for counts (they
//! exceed 64 bits at modest genus) and exact rationals for degrees.

use std::collections::BTreeSet;

use num::{pow, BigInt, BigRational, BigUint, One, Zero};
use thiserror::Error;

use crate::graph::DualGraph;
use crate::level::{self, LevelError, MultiplicityCochain};

/// Errors from the counting audits.
#[derive(Debug, Error)]
pub enum CountingError {
    /// Boundary-degree tables are defined for prime levels only.
    #[error("level {level} is not prime")]
    NotPrime {
        /// The rejected level.
        level: u64,
    },
    /// Degree formulas need genus at least 2.
    #[error("genus {genus} is below the minimum 2")]
    GenusTooSmall {
        /// The rejected genus.
        genus: u32,
    },
    /// The boundary index must satisfy `1 ≤ i ≤ ⌊g/2⌋`.
    #[error("boundary index {index} is out of range 1..={max} for genus {genus}")]
    IndexOutOfRange {
        /// The rejected index.
        index: u32,
        /// The genus.
        genus: u32,
        /// The largest admissible index.
        max: u32,
    },
    /// A fiber row failed its internal cross-check; this indicates a bug,
    /// not a data condition.
    #[error("fiber audit failure at M = {multiplicity}: expected {expected}, found {found}")]
    AuditFailure {
        /// JSON of the offending multiplicity values.
        multiplicity: String,
        /// The value demanded by the identity.
        expected: String,
        /// The value actually computed.
        found: String,
    },
    /// An underlying level computation failed.
    #[error(transparent)]
    Level(#[from] LevelError),
}

/// The multiplicative point count `Φ_n(l) = l^n·∏_{p|l}(1 − p^{−n})`,
/// computed exactly as `∏_{p^e ∥ l} p^{n(e−1)}·(p^n − 1)`; `Φ_n(1) = 1`.
pub fn phi(n: u32, level: u64) -> BigUint {
    assert!(n >= 1, "Φ_n needs n ≥ 1");
    assert!(level >= 1, "Φ_n needs a positive level");
    level::prime_powers(level)
        .into_iter()
        .map(|(p, e)| {
            let p = BigUint::from(p);
            pow(p.clone(), (n * (e - 1)) as usize) * (pow(p, n as usize) - BigUint::one())
        })
        .product()
}

/// The degree `Φ_{2g}(l)/l` of the forgetful map from the level-`l` moduli
/// space, as an exact reduced rational; `(l^{2g} − 1)/l` for prime `l`, `1`
/// for `l = 1`.
pub fn forgetful_degree(genus: u32, level: u64) -> BigRational {
    assert!(genus >= 2, "forgetful degree needs genus ≥ 2");
    BigRational::new(BigInt::from(phi(2 * genus, level)), BigInt::from(level))
}

/// The length of each component of the fiber over `(Γ, M)`:
/// `∏_{p | l} ∏_{k=1}^{e_p} p^{b₁(Γ(ν_p^k))}`.
///
/// Equivalently `(∏_e r(e)) / |ghost group|`; the two expressions are
/// cross-checked in the fiber audit.
pub fn component_length(graph: &DualGraph, multiplicity: &MultiplicityCochain) -> BigUint {
    let mut length = BigUint::one();
    for prime in &multiplicity.valuation().primes {
        let tower = multiplicity
            .contraction_tower(graph, prime.p)
            .expect("prime divides the level");
        for stage in tower.stages.iter().filter(|s| s.k > 0) {
            let b1 = stage.contraction.quotient().betti1();
            length *= pow(BigUint::from(prime.p), b1);
        }
    }
    length
}

/// The number of connected components of the fiber piece over `(Γ, M)`:
/// `l^{2·p_g}·∏_{p | l} ∏_{k=1}^{e_p} p^{b₁(Δ(ν_p^k))}`, where `p_g` is the
/// sum of vertex genera and `Δ(ν_p^k)` the filtration subgraph.
pub fn component_count(graph: &DualGraph, multiplicity: &MultiplicityCochain) -> BigUint {
    let level = multiplicity.level();
    let mut count = pow(BigUint::from(level), 2 * graph.vertex_genus_sum() as usize);
    for prime in &multiplicity.valuation().primes {
        for k in 1..=prime.exponent {
            let delta: BTreeSet<_> = multiplicity
                .filtration_subgraph(prime.p, k)
                .expect("prime and index valid")
                .into_iter()
                .collect();
            count *= pow(BigUint::from(prime.p), graph.subgraph_betti1(&delta));
        }
    }
    count
}

/// One row of a fiber audit: the fiber piece over a single multiplicity.
#[derive(Clone, Debug)]
pub struct FiberRow {
    /// The multiplicity cochain indexing the row.
    pub multiplicity: MultiplicityCochain,
    /// Number of connected components of the piece.
    pub components: BigUint,
    /// Length of each component.
    pub length: BigUint,
}

impl FiberRow {
    /// The row's total length contribution, `components · length`.
    pub fn subtotal(&self) -> BigUint {
        &self.components * &self.length
    }
}

/// A full fiber decomposition over one dual graph: one row per multiplicity
/// cochain, with the total-length identity `Σ = l^{2g}` verified.
#[derive(Clone, Debug)]
pub struct FiberAudit {
    /// The level.
    pub level: u64,
    /// The total genus `g` of the graph.
    pub genus: u64,
    /// Rows in multiplicity-enumeration order.
    pub rows: Vec<FiberRow>,
    /// The verified total `l^{2g}`.
    pub total: BigUint,
}

impl FiberAudit {
    /// JSON form: rows keyed by the multiplicity serialization, all counts
    /// as decimal strings.
    pub fn to_json(&self, graph: &DualGraph) -> serde_json::Value {
        let rows: serde_json::Map<String, serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let key = row.multiplicity.to_json(graph)["values"].to_string();
                let value = serde_json::json!({
                    "components": row.components.to_string(),
                    "length": row.length.to_string(),
                    "subtotal": row.subtotal().to_string(),
                });
                (key, value)
            })
            .collect();
        serde_json::json!({
            "level": self.level,
            "genus": self.genus,
            "rows": rows,
            "total": self.total.to_string(),
        })
    }
}

/// Audits one row: computes components and length, and cross-checks the
/// length against `(∏_e r(e)) / |ghost group|`.
fn audited_row(
    graph: &DualGraph,
    multiplicity: MultiplicityCochain,
) -> Result<FiberRow, CountingError> {
    let components = component_count(graph, &multiplicity);
    let length = component_length(graph, &multiplicity);
    let candidates = crate::ghosts::candidate_count(&multiplicity);
    let order = crate::ghosts::ghost_group(graph, &multiplicity)
        .order()
        .clone();
    if &length * &order != candidates {
        return Err(CountingError::AuditFailure {
            multiplicity: multiplicity.to_json(graph)["values"].to_string(),
            expected: format!("{candidates} / {order}"),
            found: length.to_string(),
        });
    }
    Ok(FiberRow {
        multiplicity,
        components,
        length,
    })
}

/// Decomposes the fiber over a graph at a level, storing every row and
/// verifying the total-length identity `Σ components·length = l^{2g}`.
pub fn fiber_audit(graph: &DualGraph, level: u64) -> Result<FiberAudit, CountingError> {
    let genus = graph.total_genus();
    let expected = pow(BigUint::from(level), 2 * genus as usize);
    let mut rows = Vec::new();
    let mut total = BigUint::zero();
    for multiplicity in level::enumerate_multiplicities(graph, level)? {
        let row = audited_row(graph, multiplicity)?;
        total += row.subtotal();
        rows.push(row);
    }
    if total != expected {
        return Err(CountingError::AuditFailure {
            multiplicity: "(total)".to_string(),
            expected: expected.to_string(),
            found: total.to_string(),
        });
    }
    Ok(FiberAudit {
        level,
        genus,
        rows,
        total,
    })
}

/// Streaming variant of [`fiber_audit`]: verifies every row and the total
/// without storing rows; returns the verified total `l^{2g}`.
pub fn fiber_total(graph: &DualGraph, level: u64) -> Result<BigUint, CountingError> {
    let genus = graph.total_genus();
    let expected = pow(BigUint::from(level), 2 * genus as usize);
    let mut total = BigUint::zero();
    for multiplicity in level::enumerate_multiplicities(graph, level)? {
        total += audited_row(graph, multiplicity)?.subtotal();
    }
    if total != expected {
        return Err(CountingError::AuditFailure {
            multiplicity: "(total)".to_string(),
            expected: expected.to_string(),
            found: total.to_string(),
        });
    }
    Ok(total)
}

/// The irreducible-boundary degree table, available at level 3.
#[derive(Clone, Debug)]
pub struct IrreducibleBoundary {
    /// Degrees of the three components over the irreducible boundary.
    pub degrees: [BigRational; 3],
    /// Index (into `degrees`) of the component along which the forgetful
    /// map is ramified.
    pub ramified_index: usize,
    /// The ramification order (the level).
    pub ramification_order: u64,
    /// `Σ degrees`, with the ramified component weighted by its
    /// ramification order; equals the forgetful degree.
    pub weighted_sum: BigRational,
}

/// Degree bookkeeping over a boundary divisor of the coarse moduli space,
/// for prime level.
#[derive(Clone, Debug)]
pub struct BoundaryDegrees {
    /// The genus.
    pub genus: u32,
    /// The (prime) level.
    pub level: u64,
    /// The boundary index `i` (the smaller side of the genus split).
    pub index: u32,
    /// Degrees of the three components over the reducible boundary
    /// `δ_i`: `(l^{2i}−1)/l`, `(l^{2(g−i)}−1)/l`, and their product times
    /// `l`⁻¹·l²⁻…: `(l^{2i}−1)(l^{2(g−i)}−1)/l`.
    pub reducible: [BigRational; 3],
    /// `Σ reducible`, which must equal the forgetful degree.
    pub reducible_sum: BigRational,
    /// The level-3 irreducible-boundary table, when `level = 3`.
    pub irreducible: Option<IrreducibleBoundary>,
    /// The forgetful degree `(l^{2g}−1)/l`, for comparison.
    pub forgetful: BigRational,
}

impl BoundaryDegrees {
    /// JSON form with degrees as reduced `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rat = crate::age::rational_str;
        serde_json::json!({
            "genus": self.genus,
            "level": self.level,
            "index": self.index,
            "reducible": self.reducible.iter().map(rat).collect::<Vec<_>>(),
            "reducible_sum": rat(&self.reducible_sum),
            "irreducible": self.irreducible.as_ref().map(|irr| serde_json::json!({
                "degrees": irr.degrees.iter().map(rat).collect::<Vec<_>>(),
                "ramified_index": irr.ramified_index,
                "ramification_order": irr.ramification_order,
                "weighted_sum": rat(&irr.weighted_sum),
            })),
            "forgetful": rat(&self.forgetful),
        })
    }
}

fn rational_power(level: u64, exponent: u32) -> BigInt {
    pow(BigInt::from(level), exponent as usize)
}

/// Builds the boundary-degree table for prime level: the three
/// reducible-boundary component degrees over `δ_i` plus, at level 3, the
/// irreducible-boundary table with its ramification weighting. Both sums
/// are checked against the forgetful degree before returning.
pub fn boundary_degrees_prime(
    genus: u32,
    level: u64,
    index: u32,
) -> Result<BoundaryDegrees, CountingError> {
    let factors = level::prime_powers(level.max(1));
    if level < 2 || factors.len() != 1 || factors[0].1 != 1 {
        return Err(CountingError::NotPrime { level });
    }
    if genus < 2 {
        return Err(CountingError::GenusTooSmall { genus });
    }
    let max = genus / 2;
    if index == 0 || index > max {
        return Err(CountingError::IndexOutOfRange { index, genus, max });
    }
    let l = BigInt::from(level);
    let small = rational_power(level, 2 * index) - BigInt::one();
    let large = rational_power(level, 2 * (genus - index)) - BigInt::one();
    let reducible = [
        BigRational::new(small.clone(), l.clone()),
        BigRational::new(large.clone(), l.clone()),
        BigRational::new(&small * &large, l.clone()),
    ];
    let reducible_sum: BigRational = reducible.iter().sum();
    let forgetful = forgetful_degree(genus, level);
    if reducible_sum != forgetful {
        return Err(CountingError::AuditFailure {
            multiplicity: format!("(reducible boundary, i = {index})"),
            expected: forgetful.to_string(),
            found: reducible_sum.to_string(),
        });
    }
    let irreducible = if level == 3 {
        let bulk = rational_power(3, 2 * genus - 2);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        let degrees = [
            BigRational::from(&bulk - BigInt::one()),
            &third * BigRational::from(BigInt::from(2)),
            &third * BigRational::from(BigInt::from(2) * &bulk),
        ];
        let weighted_sum =
            &degrees[0] + &degrees[1] + &degrees[2] * BigRational::from(BigInt::from(3));
        if weighted_sum != forgetful {
            return Err(CountingError::AuditFailure {
                multiplicity: "(irreducible boundary)".to_string(),
                expected: forgetful.to_string(),
                found: weighted_sum.to_string(),
            });
        }
        Some(IrreducibleBoundary {
            degrees,
            ramified_index: 2,
            ramification_order: 3,
            weighted_sum,
        })
    } else {
        None
    };
    Ok(BoundaryDegrees {
        genus,
        level,
        index,
        reducible,
        reducible_sum,
        irreducible,
        forgetful,
    })
}
