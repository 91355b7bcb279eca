//! End-to-end acceptance gates for the crate.
//!
//! Each test is one gate and prints a single `PASS` line with its headline
//! numbers (visible with `--nocapture`); the harness line itself is the
//! pass/fail verdict.  The gates pin the frozen known-answer instances from
//! [`ghostlab::gallery`], the exhaustive no-junior sweeps at desk scale, the
//! mutual agreement of the structure-theorem and brute-force enumeration
//! routes, randomized fiber audits, and the closed-form degree identities.

use std::collections::BTreeSet;
use std::time::Instant;

use num::bigint::BigInt;
use num::{BigRational, BigUint, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ghostlab::age::{self, AgeVerdict};
use ghostlab::cochain;
use ghostlab::counting;
use ghostlab::gallery;
use ghostlab::ghosts::{self, DEFAULT_ORACLE_BUDGET};
use ghostlab::graph::enumerate_connected;
use ghostlab::level::enumerate_multiplicities;
use ghostlab::singularity::{self, CurveAnnotations, SingularityVerdict, VerdictReason};
use ghostlab::tails::{tail_stabilizer, TailLineBundle};
use ghostlab::{DualGraph, EdgeIdx};

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `(l^e - 1) / l` as an exact rational.
fn power_minus_one_over(level: u64, exponent: usize) -> BigRational {
    let power = num::pow::pow(BigInt::from(level), exponent);
    BigRational::new(power - 1, BigInt::from(level))
}

#[test]
fn c01_showcase_ghost_group_and_tower_shape() {
    let start = Instant::now();
    let (g, m) = gallery::tower_showcase();
    let group = ghosts::ghost_group(&g, &m);
    assert_eq!(group.order().to_string(), "64");
    assert_eq!(group.divisors(), vec![2, 4, 8]);
    assert_eq!(group.structure(), "Z/2 \u{2295} Z/4 \u{2295} Z/8");
    let tower = m.contraction_tower(&g, 2).unwrap();
    assert_eq!(
        tower.vertex_counts(),
        vec![4, 3, 2],
        "stage vertex counts for k = 3, 2, 1"
    );
    assert_eq!(tower.sigma_v(), 9);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "PASS showcase: order 64 = Z/2 + Z/4 + Z/8, tower (4, 3, 2), sigma_V = 9, in {elapsed:?}"
    );
}

#[test]
fn c02_showcase_generator_ages() {
    let (g, m) = gallery::tower_showcase();
    let group = ghosts::ghost_group(&g, &m);
    let mut seen = Vec::new();
    for generator in group.generators() {
        seen.push((generator.declared_order, age::age_of(&generator.element)));
    }
    seen.sort();
    assert_eq!(
        seen,
        vec![
            (2, rational(3, 2)),
            (4, rational(5, 4)),
            (8, rational(1, 1)),
        ]
    );
    println!("PASS generator ages: 3/2 at order 2, 5/4 at order 4, 1 at order 8");
}

#[test]
fn c03_junior_witnesses_are_ghosts_and_classify_noncanonical() {
    let cases = [
        (gallery::junior5(), rational(4, 5)),
        (gallery::junior8(), rational(3, 4)),
        (gallery::junior12(), rational(2, 3)),
    ];
    for ((g, m, a), expected_age) in cases {
        assert!(ghosts::is_ghost(&g, &a, &m).unwrap());
        let report = age::classify(&a);
        assert_eq!(report.age, expected_age);
        assert_eq!(report.verdict, AgeVerdict::Junior);
        let point = singularity::classify_point(
            &g,
            &m,
            &CurveAnnotations::default(),
            DEFAULT_ORACLE_BUDGET,
        )
        .unwrap();
        assert_eq!(point.verdict, SingularityVerdict::Noncanonical);
        assert!(point
            .reasons
            .iter()
            .any(|r| matches!(r, VerdictReason::JCurve(_))));
        assert!(point.junior_scan_complete);
    }
    println!("PASS junior witnesses: ages 4/5, 3/4, 2/3; all noncanonical via a junior ghost");
}

#[test]
fn c04_level3_circuit_instances() {
    let one = BigRational::one();

    let (g, m) = gallery::triangle3();
    let group = ghosts::ghost_group(&g, &m);
    assert_eq!(group.order().to_string(), "9");
    assert_eq!(group.divisors(), vec![3, 3]);
    let min_nontrivial_age = group
        .elements_iter()
        .filter(|a| !a.is_zero())
        .map(|a| age::age_of(&a))
        .min()
        .unwrap();
    assert_eq!(
        min_nontrivial_age, one,
        "no junior elements on the triangle"
    );

    let (g, m) = gallery::banana3();
    let group = ghosts::ghost_group(&g, &m);
    assert_eq!(group.order().to_string(), "3");
    let nontrivial_ages: Vec<BigRational> = group
        .elements_iter()
        .filter(|a| !a.is_zero())
        .map(|a| age::age_of(&a))
        .collect();
    assert_eq!(nontrivial_ages, vec![one.clone(), one.clone()]);

    let (g, m) = gallery::loop3();
    assert!(ghosts::ghost_group(&g, &m).is_trivial());

    println!("PASS level 3: triangle (Z/3)^2 min age 1, banana Z/3 ages 1 and 1, loop trivial");
}

#[test]
fn c05_no_junior_sweeps_and_witness_levels() {
    let start = Instant::now();
    let mut swept = 0u64;
    for level in [2u64, 3, 4, 6] {
        let report = age::junior_sweep(level, 5, 4, DEFAULT_ORACLE_BUDGET);
        assert!(report.instances > 0);
        assert!(
            report.is_clean(),
            "level {level}: {} witnesses, {} skipped",
            report.witnesses.len(),
            report.skipped.len()
        );
        assert!(report.max_junior_age.is_none());
        swept += report.instances;
    }
    for level in [5u64, 7, 8, 12] {
        let w = age::junior_witness(level).expect("these levels all have junior ghosts");
        assert!(ghosts::is_ghost(&w.graph, &w.element, &w.multiplicity).unwrap());
        assert_eq!(w.age, age::age_of(&w.element));
        assert!(w.age > BigRational::new(0.into(), 1.into()));
        assert!(w.age < BigRational::one());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "PASS sweeps: {swept} instances at levels 2, 3, 4, 6 with no juniors; witnesses at \
         5, 7, 8, 12 validated; in {elapsed:?}"
    );
}

#[test]
fn c06_enumeration_oracle_matches_structure_theorem_exactly() {
    let mut instances = 0usize;
    for g in enumerate_connected(5, 4) {
        for level in 1..=10u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                let group = ghosts::ghost_group(&g, &m);
                let oracle = ghosts::enumerate_ghosts(&g, &m, DEFAULT_ORACLE_BUDGET).unwrap();
                assert_eq!(
                    BigUint::from(oracle.len()),
                    *group.order(),
                    "cardinality mismatch at level {level} on {} edges",
                    g.edge_count()
                );
                let mut oracle_orders: Vec<u64> = oracle.iter().map(|a| a.order()).collect();
                let mut group_orders: Vec<u64> = group.elements_iter().map(|a| a.order()).collect();
                oracle_orders.sort_unstable();
                group_orders.sort_unstable();
                assert_eq!(
                    oracle_orders, group_orders,
                    "element-order multiset mismatch"
                );
                instances += 1;
            }
        }
    }
    println!("PASS oracle equivalence: {instances} instances (<= 4 edges, level <= 10) exact");
}

#[test]
fn c07_fiber_audit_randomized_and_hand_checked() {
    // Hand-checked instance: two genus-1 vertices joined by two edges, level 2.
    let banana = DualGraph::new(
        [("u".to_string(), 1), ("v".to_string(), 1)],
        [
            ("e1".to_string(), "u".to_string(), "v".to_string()),
            ("e2".to_string(), "u".to_string(), "v".to_string()),
        ],
    )
    .unwrap();
    let audit = counting::fiber_audit(&banana, 2).unwrap();
    assert_eq!(audit.rows.len(), 2);
    assert_eq!(audit.rows[0].multiplicity.values(), &[0, 0]);
    assert_eq!(audit.rows[0].components, BigUint::from(32u32));
    assert_eq!(audit.rows[0].length, BigUint::from(1u32));
    assert_eq!(audit.rows[1].multiplicity.values(), &[1, 1]);
    assert_eq!(audit.rows[1].components, BigUint::from(16u32));
    assert_eq!(audit.rows[1].length, BigUint::from(2u32));
    assert_eq!(audit.total, BigUint::from(64u32));

    let mut rng = ChaCha8Rng::seed_from_u64(0x0067_C057);
    for trial in 0..50 {
        let (g, level) = random_instance(&mut rng);
        let audit =
            counting::fiber_audit(&g, level).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        let genus = g.total_genus() as usize;
        assert_eq!(
            audit.total,
            num::pow::pow(BigUint::from(level), 2 * genus),
            "trial {trial}: level {level}, genus {genus}"
        );
    }
    println!("PASS fiber audits: banana rows 32 x 1 + 16 x 2 = 64; 50 randomized totals exact");
}

/// A seeded random connected multigraph with `b1 <= 3`, random genera, and a
/// random level `<= 12`.
fn random_instance(rng: &mut ChaCha8Rng) -> (DualGraph, u64) {
    let vertex_count = rng.random_range(1..=4usize);
    let extra_edges = rng.random_range(0..=3usize);
    let mut edges = Vec::new();
    for child in 1..vertex_count {
        let parent = rng.random_range(0..child);
        edges.push((
            format!("t{child}"),
            format!("v{parent}"),
            format!("v{child}"),
        ));
    }
    for i in 0..extra_edges {
        let a = rng.random_range(0..vertex_count);
        let b = rng.random_range(0..vertex_count);
        edges.push((format!("x{i}"), format!("v{a}"), format!("v{b}")));
    }
    let vertices: Vec<(String, u64)> = (0..vertex_count)
        .map(|i| (format!("v{i}"), rng.random_range(0..=2u64)))
        .collect();
    let g = DualGraph::new(vertices, edges).expect("tree plus extras is connected");
    assert!(g.betti1() <= 3);
    (g, rng.random_range(1..=12u64))
}

/// One classified case: `(l, r, k1, k2)` with its stabilizer pairs.
type StabilizerRow = (u64, u64, u64, u64, Vec<(u64, u64)>);

#[test]
fn c08_tail_stabilizer_classification() {
    let mut found: Vec<StabilizerRow> = Vec::new();
    for l in 1..=12u64 {
        for r in (1..=l).filter(|&r| l.is_multiple_of(r)) {
            for k1 in 0..l {
                for k2 in 0..r {
                    let bundle = TailLineBundle::new(l, r, k1 as i64, k2 as i64).unwrap();
                    if !bundle.is_faithful() || bundle.order() != l {
                        continue;
                    }
                    let stabilizer = tail_stabilizer(&bundle).unwrap();
                    if !stabilizer.is_empty() {
                        found.push((
                            l,
                            r,
                            bundle.k1,
                            bundle.k2,
                            stabilizer.iter().map(|a| (a.a1, a.a2)).collect(),
                        ));
                    }
                }
            }
        }
    }
    let expected = vec![
        (1, 1, 0, 0, vec![(1, 0)]),
        (2, 1, 1, 0, vec![(1, 0)]),
        (2, 2, 0, 1, vec![(1, 0)]),
        (2, 2, 1, 1, vec![(1, 0)]),
        (4, 2, 1, 1, vec![(1, 1)]),
        (4, 2, 3, 1, vec![(1, 1)]),
    ];
    assert_eq!(found, expected);
    println!("PASS tail stabilizers: exactly the four families (six bundles) up to l = 12");
}

#[test]
fn c09_degree_identities() {
    for genus in 2..=6u32 {
        for level in [2u64, 3, 5, 7] {
            assert_eq!(
                counting::forgetful_degree(genus, level),
                power_minus_one_over(level, 2 * genus as usize),
                "forgetful degree at genus {genus}, level {level}"
            );
        }
    }
    for genus in 4..=8u32 {
        let target = power_minus_one_over(3, 2 * genus as usize);
        for index in 1..=genus / 2 {
            let table = counting::boundary_degrees_prime(genus, 3, index).unwrap();
            assert_eq!(
                table.reducible_sum, target,
                "reducible sum at genus {genus}"
            );
            let irreducible = table.irreducible.as_ref().expect("level 3 has this table");
            assert_eq!(
                irreducible.weighted_sum, target,
                "weighted irreducible sum at genus {genus}"
            );
        }
    }
    println!(
        "PASS degrees: forgetful = (l^2g - 1)/l for primes at genus 2..6; level-3 boundary \
         tables sum back for genus 4..8"
    );
}

#[test]
fn c10_invariant_suites() {
    // Adjointness of the coboundary and boundary maps under the edge pairing,
    // on every connected multigraph with <= 5 edges and seeded random cochains.
    let mut rng = ChaCha8Rng::seed_from_u64(0x00AD_0117);
    let mut adjoint_checks = 0usize;
    for g in enumerate_connected(6, 5) {
        for n in 2..=12u64 {
            for _ in 0..3 {
                let a_values: Vec<i64> = (0..g.vertex_count())
                    .map(|_| rng.random_range(0..n) as i64)
                    .collect();
                let b_values: Vec<i64> = (0..g.edge_count())
                    .map(|_| rng.random_range(0..n) as i64)
                    .collect();
                let a = cochain::Cochain0::from_values(n, &a_values).unwrap();
                let b = cochain::Cochain1::from_values(n, &b_values).unwrap();
                assert_eq!(
                    cochain::pairing1(&cochain::delta(&g, &a), &b).unwrap(),
                    cochain::pairing0(&a, &cochain::partial(&g, &b)).unwrap(),
                );
                adjoint_checks += 1;
            }
        }
    }

    // Membership in im(delta) agrees with brute-force preimage search over
    // every 0-cochain, for graphs with <= 4 vertices and moduli <= 6.
    let mut image_checks = 0usize;
    for g in enumerate_connected(4, 4) {
        for n in 2..=6u64 {
            let mut image: BTreeSet<Vec<u64>> = BTreeSet::new();
            for a in all_cochains0(&g, n) {
                image.insert(cochain::delta(&g, &a).values().to_vec());
            }
            for b in all_cochains1(&g, n) {
                assert_eq!(
                    cochain::in_im_delta(&g, &b),
                    image.contains(b.values()),
                    "membership mismatch at modulus {n}"
                );
                image_checks += 1;
            }
        }
    }

    // Every ghost vanishes on loops, and no nontrivial ghost is supported on
    // fewer than 2 edges: exhaustive over <= 4 edges, levels <= 8.
    let mut ghost_checks = 0usize;
    for g in enumerate_connected(5, 4) {
        let loops: Vec<EdgeIdx> = (0..g.edge_count())
            .map(EdgeIdx)
            .filter(|&e| g.is_loop(e))
            .collect();
        for level in 1..=8u64 {
            for m in enumerate_multiplicities(&g, level).unwrap() {
                for ghost in ghosts::enumerate_ghosts(&g, &m, DEFAULT_ORACLE_BUDGET).unwrap() {
                    for &e in &loops {
                        assert_eq!(ghost.value(e), 0, "ghost with a nonzero loop value");
                    }
                    if !ghost.is_zero() {
                        assert!(
                            ghost.support().len() >= 2,
                            "nontrivial ghost supported on {} edge(s)",
                            ghost.support().len()
                        );
                    }
                    ghost_checks += 1;
                }
            }
        }
    }

    println!(
        "PASS invariants: adjointness ({adjoint_checks} checks), im-delta membership \
         ({image_checks} checks), loop vanishing and support >= 2 ({ghost_checks} ghosts)"
    );
}

/// All `n^#V` 0-cochains on a graph.
fn all_cochains0(graph: &DualGraph, modulus: u64) -> Vec<cochain::Cochain0> {
    odometer(graph.vertex_count(), modulus)
        .into_iter()
        .map(|values| cochain::Cochain0::from_values(modulus, &values).unwrap())
        .collect()
}

/// All `n^#E` 1-cochains on a graph.
fn all_cochains1(graph: &DualGraph, modulus: u64) -> Vec<cochain::Cochain1> {
    odometer(graph.edge_count(), modulus)
        .into_iter()
        .map(|values| cochain::Cochain1::from_values(modulus, &values).unwrap())
        .collect()
}

/// All vectors in `{0, …, n-1}^len`, in ascending odometer order.
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
