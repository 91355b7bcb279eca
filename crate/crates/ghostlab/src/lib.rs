#![forbid(unsafe_code)]
//! Ghost automorphisms of level structures on stable dual graphs.
//!
//! A nodal curve is encoded by its *dual graph*: one vertex per irreducible
//! component (weighted by its geometric genus), one edge per node, with loops
//! and parallel edges allowed.  A level-`l` structure on a nearby smooth curve
//! degenerates to combinatorial data on the dual graph: a `Z/l`-valued
//! 1-cochain `M` (the *multiplicity cochain*) lying in the kernel of the
//! boundary map.  The automorphisms of the resulting limit object that act
//! trivially on the coarse curve — the *ghost automorphisms* — form a finite
//! abelian group determined entirely by `(graph, M, l)`.
//!
//! This crate computes that group and everything downstream of it:
//!
//! - [`graph`] — stable dual graphs: validation, Betti number, total genus,
//!   spanning-tree circuits, cut/circuit bases, edge contraction, exhaustive
//!   enumeration at desk scale, and a JSON wire format.
//! - [`cochain`] — `Z/n` cochains in degrees 0 and 1, the coboundary `δ` and
//!   boundary `∂`, the edge pairing, membership tests for `im δ` and `ker ∂`,
//!   and transport along contractions (extension by zero, compatible descent).
//! - [`level`] — per-edge local indices `(r, m)`, `p`-adic valuation profiles
//!   of a multiplicity cochain, filtration subgraphs, and the contraction
//!   tower that controls the ghost group one prime at a time.
//! - [`ghosts`] — the symmetric-function model of ghost automorphisms, the
//!   ghost test, the structure theorem (elementary divisors, order, canonical
//!   generators), and two independent enumeration routes used as mutual
//!   oracles.
//! - [`age`] — the age grading in `(1/l)Z`, junior/senior classification,
//!   lexicographically-least junior witnesses, exhaustive no-junior sweeps,
//!   and explicit junior witness families for every level that has one.
//! - [`singularity`] — smooth / canonical / noncanonical classification of a
//!   point of the level-`l` moduli space from its ghost group, age data, and
//!   elliptic-tail annotations.
//! - [`tails`] — the standalone action on level structures of a one-tail
//!   curve, with brute-force stabilizer computation.
//! - [`counting`] — degree and mass formulas: the level-structure count
//!   `Φ_n(l)`, the forgetful-map degree, fiber audits over a fixed dual
//!   graph (component counts × lengths summing to `l^{2g}`), and boundary
//!   degree tables for prime level.
//! - [`gallery`] — frozen known-answer instances used across the test suite
//!   and by the CLI's verification command.
//!
//! Determinism is a design requirement: spanning trees grow from the
//! lexicographically least vertex id with edges scanned in file order, all
//! enumerations emit in a documented canonical order, and every report type
//! serializes with sorted keys, so repeated runs are byte-identical.

pub mod age;
pub mod cochain;
pub mod counting;
pub mod gallery;
pub mod ghosts;
pub mod graph;
pub mod level;
pub mod singularity;
pub mod tails;

pub use age::{AgeError, AgeReport, AgeVerdict, JuniorWitness, SweepReport};
pub use cochain::{Cochain0, Cochain1, CochainError};
pub use counting::{BoundaryDegrees, CountingError, FiberAudit};
pub use ghosts::{GhostError, GhostGroup, SymmetricFunction};
pub use graph::{
    Circuit, Contraction, Cut, DualGraph, EdgeIdx, GraphError, OrientedEdge, VertexIdx,
};
pub use level::{ContractionTower, LevelError, MultiplicityCochain, Valuation, ValuationProfile};
pub use singularity::{CurveAnnotations, SingularityError, SingularityReport, SingularityVerdict};
pub use tails::{TailAutomorphism, TailError, TailLineBundle};
