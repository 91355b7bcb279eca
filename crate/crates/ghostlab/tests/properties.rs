//! Cross-module invariant sweeps at desk scale.
//!
//! These tests brute-force the structural identities the library's fast
//! paths rely on: kernel/image characterizations of the cochain maps,
//! transport along contractions, agreement of the ghost structure theorem
//! with raw enumeration, age bookkeeping, and counting identities.  Sweeps
//! that would be unbounded use explicit per-instance budgets and assert a
//! floor on the number of instances actually verified, so a budget change
//! can never silently turn a suite into a no-op.

use std::collections::BTreeSet;

use num::{BigRational, BigUint, One, Zero};

use ghostlab::age;
use ghostlab::cochain::{
    self, delta, enumerate_ker_partial, in_im_delta, in_ker_partial, Cochain0, Cochain1,
};
use ghostlab::counting;
use ghostlab::gallery;
use ghostlab::ghosts::{self, DEFAULT_ORACLE_BUDGET};
use ghostlab::graph::enumerate_connected;
use ghostlab::level::enumerate_multiplicities;
use ghostlab::singularity;
use ghostlab::{DualGraph, EdgeIdx, MultiplicityCochain, SymmetricFunction};

/// All vectors in `{0, …, n-1}^len`, ascending odometer order.
fn odometer(len: usize, modulus: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = vec![0i64; len];
    loop {
        out.push(current.clone());
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < modulus as i64 {
                break;
            }
            current[pos] = 0;
        }
    }
}

#[test]
fn ker_partial_is_exactly_the_circuit_span() {
    for g in enumerate_connected(5, 4) {
        for n in 2..=6u64 {
            let span: BTreeSet<Vec<u64>> = enumerate_ker_partial(&g, n)
                .unwrap()
                .map(|b| b.values().to_vec())
                .collect();
            assert_eq!(
                span.len() as u64,
                n.pow(g.betti1() as u32),
                "the circuit span has n^b1 distinct elements"
            );
            for values in odometer(g.edge_count(), n) {
                let b = Cochain1::from_values(n, &values).unwrap();
                assert_eq!(in_ker_partial(&g, &b), span.contains(b.values()));
            }
        }
    }
}

#[test]
fn blowups_of_quotient_coboundaries_are_the_coboundaries_vanishing_on_contracted_edges() {
    for g in enumerate_connected(5, 4) {
        let edge_count = g.edge_count();
        for mask in 1u32..(1 << edge_count) {
            let subset: BTreeSet<EdgeIdx> = (0..edge_count)
                .map(EdgeIdx)
                .filter(|e| mask >> e.0 & 1 == 1)
                .collect();
            let contraction = g.contract(&subset);
            let quotient = contraction.quotient();
            for n in [2u64, 3] {
                let blown: BTreeSet<Vec<u64>> = odometer(quotient.vertex_count(), n)
                    .into_iter()
                    .map(|values| {
                        let a = Cochain0::from_values(n, &values).unwrap();
                        cochain::blowup1(&delta(quotient, &a), &contraction)
                            .values()
                            .to_vec()
                    })
                    .collect();
                let vanishing: BTreeSet<Vec<u64>> = odometer(g.vertex_count(), n)
                    .into_iter()
                    .map(|values| {
                        let a = Cochain0::from_values(n, &values).unwrap();
                        delta(&g, &a).values().to_vec()
                    })
                    .filter(|values| subset.iter().all(|e| values[e.0] == 0))
                    .collect();
                assert_eq!(blown, vanishing, "blowup image mismatch at modulus {n}");
            }
        }
    }
}

#[test]
fn enumerated_multiplicities_really_sum_to_zero_at_every_vertex() {
    for g in enumerate_connected(5, 4) {
        for level in 1..=8u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                let b = Cochain1::from_values(
                    level,
                    &m.values().iter().map(|&v| v as i64).collect::<Vec<_>>(),
                )
                .unwrap();
                assert!(in_ker_partial(&g, &b));
                for v in 0..g.vertex_count() {
                    let mut sum = 0i64;
                    for e in 0..g.edge_count() {
                        let edge = g.edge(EdgeIdx(e));
                        if edge.head.0 == v {
                            sum += m.values()[e] as i64;
                        }
                        if edge.tail.0 == v {
                            sum -= m.values()[e] as i64;
                        }
                    }
                    assert_eq!(sum.rem_euclid(level as i64), 0, "nonzero flow at a vertex");
                }
            }
        }
    }
}

#[test]
fn valuation_profiles_are_invariant_under_negation() {
    for g in enumerate_connected(4, 3) {
        for level in [4u64, 6, 8, 9, 12] {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                let negated: Vec<i64> = m.values().iter().map(|&v| -(v as i64)).collect();
                let m_neg = MultiplicityCochain::from_values(&g, level, &negated).unwrap();
                assert_eq!(
                    m.valuation(),
                    m_neg.valuation(),
                    "valuations must not depend on the chosen orientation"
                );
            }
        }
    }
}

#[test]
fn structure_theorem_matches_enumeration_oracle_up_to_budget() {
    // Extends the exact small-scale equivalence to <= 5 edges and levels
    // <= 12, skipping instances whose raw candidate space exceeds the cap.
    let cap = BigUint::from(20_000u64);
    let mut verified = 0u64;
    for g in enumerate_connected(6, 5) {
        for level in 1..=12u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                if ghosts::candidate_count(&m) > cap {
                    continue;
                }
                let group = ghosts::ghost_group(&g, &m);
                let oracle = ghosts::enumerate_ghosts(&g, &m, DEFAULT_ORACLE_BUDGET).unwrap();
                assert_eq!(BigUint::from(oracle.len()), *group.order());
                let mut oracle_orders: Vec<u64> = oracle.iter().map(|a| a.order()).collect();
                let mut group_orders: Vec<u64> = group.elements_iter().map(|a| a.order()).collect();
                oracle_orders.sort_unstable();
                group_orders.sort_unstable();
                assert_eq!(oracle_orders, group_orders);
                verified += 1;
            }
        }
    }
    assert!(verified >= 100_000, "only {verified} instances fit the cap");
}

#[test]
fn age_of_an_element_and_its_inverse_add_up_to_the_support_size() {
    let cap = BigUint::from(10_000u64);
    let mut verified = 0u64;
    for g in enumerate_connected(6, 5) {
        for level in 2..=8u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                let group = ghosts::ghost_group(&g, &m);
                if *group.order() > cap {
                    continue;
                }
                for a in group.elements_iter() {
                    let inverse = a.scale(level - 1);
                    let total = age::age_of(&a) + age::age_of(&inverse);
                    let support = BigRational::from_integer((a.support().len() as u64).into());
                    assert_eq!(total, support);
                    verified += 1;
                }
            }
        }
    }
    assert!(verified >= 100_000, "only {verified} elements verified");
}

#[test]
fn junior_triples_scale_to_multiples_of_the_level() {
    // Scaling (graph, M, a) by k gives a ghost at level k*l of the same age.
    let scale_triple = |g: &DualGraph, m: &MultiplicityCochain, a: &SymmetricFunction, k: u64| {
        let level = m.level() * k;
        let m_values: Vec<i64> = m.values().iter().map(|&v| (v * k) as i64).collect();
        let a_values: Vec<i64> = a.values().iter().map(|&v| (v * k) as i64).collect();
        let scaled_m = MultiplicityCochain::from_values(g, level, &m_values).unwrap();
        let scaled_a = SymmetricFunction::from_values(level, &a_values).unwrap();
        (scaled_m, scaled_a)
    };

    for (g, m, a) in [gallery::junior5(), gallery::junior8(), gallery::junior12()] {
        for k in [2u64, 3] {
            let (scaled_m, scaled_a) = scale_triple(&g, &m, &a, k);
            assert!(ghosts::is_ghost(&g, &scaled_a, &scaled_m).unwrap());
            assert_eq!(age::age_of(&scaled_a), age::age_of(&a));
        }
    }

    let mut verified = 0u64;
    for g in enumerate_connected(4, 3) {
        for level in 2..=6u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                for a in ghosts::enumerate_ghosts(&g, &m, DEFAULT_ORACLE_BUDGET).unwrap() {
                    for k in [2u64, 3] {
                        let (scaled_m, scaled_a) = scale_triple(&g, &m, &a, k);
                        assert!(ghosts::is_ghost(&g, &scaled_a, &scaled_m).unwrap());
                        assert_eq!(age::age_of(&scaled_a), age::age_of(&a));
                        verified += 1;
                    }
                }
            }
        }
    }
    assert!(verified >= 1_000, "only {verified} scalings verified");
}

#[test]
fn level_two_has_no_junior_ghosts_at_desk_scale() {
    // Part 1, <= 4 edges: full enumeration.  Every nontrivial ghost has age
    // >= 1, and every ghost's age is exactly half its support size (each
    // nonzero value at level 2 is 1, contributing 1/2).
    let half = BigRational::new(1.into(), 2.into());
    for g in enumerate_connected(5, 4) {
        for m in enumerate_multiplicities(&g, 2).unwrap() {
            for ghost in ghosts::enumerate_ghosts(&g, &m, DEFAULT_ORACLE_BUDGET).unwrap() {
                let age = age::age_of(&ghost);
                assert_eq!(
                    age,
                    half.clone() * BigRational::from_integer((ghost.support().len() as u64).into()),
                    "level-2 age is half the support size"
                );
                if !ghost.is_zero() {
                    assert!(age >= BigRational::one());
                }
            }
        }
    }

    // Part 2, <= 6 edges: by part 1 a junior ghost at level 2 would have
    // support exactly one edge, so it suffices to rule out single-edge
    // indicators.  Enumerate connected multigraphs loosely (labeled, no
    // isomorphism rejection — duplicates cost time, never soundness).
    let mut graphs = 0u64;
    let mut indicators = 0u64;
    for g in loose_connected_multigraphs(7, 6) {
        graphs += 1;
        let loops: Vec<bool> = (0..g.edge_count()).map(|e| g.is_loop(EdgeIdx(e))).collect();
        for m in enumerate_multiplicities(&g, 2).unwrap() {
            for e in 0..g.edge_count() {
                if loops[e] || m.values()[e] == 0 {
                    continue;
                }
                let mut values = vec![0i64; g.edge_count()];
                values[e] = 1;
                let indicator = SymmetricFunction::from_values(2, &values).unwrap();
                assert!(
                    !ghosts::is_ghost(&g, &indicator, &m).unwrap(),
                    "junior ghost at level 2 on edge {e}"
                );
                indicators += 1;
            }
        }
    }
    assert!(graphs >= 30_000, "only {graphs} graphs enumerated");
    assert!(
        indicators >= 10_000,
        "only {indicators} indicators ruled out"
    );
}

/// Connected multigraphs with loops on at most `max_vertices` labeled
/// vertices and at most `max_edges` edges.  No isomorphism rejection: every
/// shape appears, some more than once.
fn loose_connected_multigraphs(max_vertices: usize, max_edges: usize) -> Vec<DualGraph> {
    let mut out = Vec::new();
    for k in 1..=max_vertices {
        // Unordered vertex pairs (i, j) with i <= j < k, as flat indices.
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
        let min_edges = k.saturating_sub(1);
        for edge_count in min_edges..=max_edges {
            // Nondecreasing index sequences = multisets of pairs.
            let mut choice = vec![0usize; edge_count];
            loop {
                if spans_and_connects(k, &choice, &pairs) {
                    let vertices: Vec<(String, u64)> =
                        (0..k).map(|i| (format!("v{i}"), 0)).collect();
                    let edges: Vec<(String, String, String)> = choice
                        .iter()
                        .enumerate()
                        .map(|(n, &c)| {
                            let (i, j) = pairs[c];
                            (format!("e{n}"), format!("v{i}"), format!("v{j}"))
                        })
                        .collect();
                    out.push(DualGraph::new(vertices, edges).expect("connected by filter"));
                }
                // Advance the nondecreasing odometer.
                let mut pos = edge_count;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    if choice[pos] + 1 < pairs.len() {
                        choice[pos] += 1;
                        let bump = choice[pos];
                        for later in choice.iter_mut().skip(pos + 1) {
                            *later = bump;
                        }
                        break;
                    }
                }
                if pos == 0 && (edge_count == 0 || choice[0] + 1 >= pairs.len()) {
                    break;
                }
            }
        }
    }
    out
}

/// Every vertex of `0..k` is touched and the edge choice connects them.
fn spans_and_connects(k: usize, choice: &[usize], pairs: &[(usize, usize)]) -> bool {
    if k == 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut touched = vec![false; k];
    for &c in choice {
        let (i, j) = pairs[c];
        touched[i] = true;
        touched[j] = true;
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        parent[ri] = rj;
    }
    if !touched.iter().all(|&t| t) {
        return false;
    }
    let root = find(&mut parent, 0);
    (1..k).all(|v| find(&mut parent, v) == root)
}

#[test]
fn nontrivial_ghost_detection_agrees_with_the_group_order() {
    // Two independent code paths: the top contraction stage per prime
    // (bouquet test) versus the assembled group order.
    let mut instances = 0u64;
    for g in enumerate_connected(6, 5) {
        for level in 1..=12u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                let detected = singularity::has_nontrivial_ghosts(&g, &m);
                let group = ghosts::ghost_group(&g, &m);
                assert_eq!(detected, !group.is_trivial());
                instances += 1;
            }
        }
    }
    assert!(instances >= 500_000, "only {instances} instances checked");
}

#[test]
fn bridge_edges_always_carry_multiplicity_zero() {
    for g in enumerate_connected(5, 4) {
        let bridges: Vec<EdgeIdx> = (0..g.edge_count())
            .map(EdgeIdx)
            .filter(|&e| g.is_bridge(e))
            .collect();
        if bridges.is_empty() {
            continue;
        }
        for level in 1..=12u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                for &e in &bridges {
                    assert_eq!(m.value(e), 0, "a separating node must have multiplicity 0");
                }
            }
        }
    }
}

#[test]
fn fiber_totals_match_the_level_power_for_every_genus_assignment() {
    for g in enumerate_connected(5, 4) {
        let slack = 5usize.saturating_sub(g.betti1());
        for genera in genus_vectors(g.vertex_count(), slack) {
            let regraded = with_genera(&g, &genera);
            let genus = regraded.total_genus() as usize;
            for level in 1..=12u64 {
                let total = counting::fiber_total(&regraded, level).unwrap();
                assert_eq!(total, num::pow::pow(BigUint::from(level), 2 * genus));
            }
        }
    }
}

/// All genus vectors of the given length with sum at most `max_sum`.
fn genus_vectors(len: usize, max_sum: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; len];
    fn fill(out: &mut Vec<Vec<u64>>, current: &mut Vec<u64>, pos: usize, left: u64) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for v in 0..=left {
            current[pos] = v;
            fill(out, current, pos + 1, left - v);
        }
        current[pos] = 0;
    }
    fill(&mut out, &mut current, 0, max_sum as u64);
    out
}

/// The same graph with a different genus assignment.
fn with_genera(graph: &DualGraph, genera: &[u64]) -> DualGraph {
    let vertices: Vec<(String, u64)> = (0..graph.vertex_count())
        .map(|i| (graph.vertex(ghostlab::VertexIdx(i)).id.clone(), genera[i]))
        .collect();
    let edges: Vec<(String, String, String)> = (0..graph.edge_count())
        .map(|i| {
            let e = graph.edge(EdgeIdx(i));
            (
                e.id.clone(),
                graph.vertex(e.tail).id.clone(),
                graph.vertex(e.head).id.clone(),
            )
        })
        .collect();
    DualGraph::new(vertices, edges).expect("same shape, new genera")
}

#[test]
fn component_length_two_routes_agree() {
    // Tower formula versus raw-candidate count divided by the group order.
    for g in enumerate_connected(4, 3) {
        for level in 1..=6u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                let by_towers = counting::component_length(&g, &m);
                let candidates = ghosts::candidate_count(&m);
                let order = ghosts::ghost_group(&g, &m).order().clone();
                assert!((candidates.clone() % &order).is_zero());
                assert_eq!(by_towers, candidates / order);
            }
        }
    }
}

#[test]
fn json_round_trips_on_enumerated_instances() {
    for g in enumerate_connected(5, 4) {
        let text = g.to_json().to_string();
        assert_eq!(DualGraph::from_json_str(&text).unwrap(), g);
        for level in [1u64, 6, 12] {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                let text = m.to_json(&g).to_string();
                assert_eq!(MultiplicityCochain::from_json_str(&g, &text).unwrap(), m);
            }
        }
        for m in enumerate_multiplicities(&g, 4).unwrap() {
            for a in ghosts::enumerate_ghosts(&g, &m, DEFAULT_ORACLE_BUDGET).unwrap() {
                let text = a.to_json(&g).to_string();
                assert_eq!(SymmetricFunction::from_json_str(&g, &text).unwrap(), a);
            }
        }
    }
}

#[test]
fn contraction_is_functorial_and_betti_additive() {
    for g in enumerate_connected(6, 5) {
        let edge_count = g.edge_count();
        // Each edge goes to S, to T, or to neither.
        for assignment in odometer(edge_count, 3) {
            let s: BTreeSet<EdgeIdx> = (0..edge_count)
                .map(EdgeIdx)
                .filter(|e| assignment[e.0] == 1)
                .collect();
            let t: BTreeSet<EdgeIdx> = (0..edge_count)
                .map(EdgeIdx)
                .filter(|e| assignment[e.0] == 2)
                .collect();
            let both: BTreeSet<EdgeIdx> = s.union(&t).copied().collect();
            let first = g.contract(&s);
            let t_in_quotient: BTreeSet<EdgeIdx> = t
                .iter()
                .map(|&e| first.quotient_edge(e).expect("t is disjoint from s"))
                .collect();
            let second = first.quotient().contract(&t_in_quotient);
            let direct = g.contract(&both);
            assert_eq!(second.quotient(), direct.quotient());
            assert_eq!(
                g.betti1(),
                direct.quotient().betti1() + g.subgraph_betti1(&both)
            );
        }
    }
}

#[test]
fn in_im_delta_agrees_with_an_integration_witness() {
    // Whenever membership holds, integrating along the spanning tree must
    // produce an actual preimage; whenever it fails, no preimage exists.
    for g in enumerate_connected(4, 4) {
        for n in [2u64, 3, 5] {
            let preimages: BTreeSet<Vec<u64>> = odometer(g.vertex_count(), n)
                .into_iter()
                .map(|values| {
                    let a = Cochain0::from_values(n, &values).unwrap();
                    delta(&g, &a).values().to_vec()
                })
                .collect();
            for values in odometer(g.edge_count(), n) {
                let b = Cochain1::from_values(n, &values).unwrap();
                assert_eq!(in_im_delta(&g, &b), preimages.contains(b.values()));
            }
        }
    }
}
