//! Frozen known-answer instances used across the test suite and by the CLI
//! verification command.
//!
//! Each constructor returns a freshly built graph (plus multiplicity data and,
//! for the junior witnesses, the witnessing element). The numeric facts
//! asserted about them — ghost-group structures, ages, tower shapes — are
//! pinned in the tests and in the CLI `verify` corpus.

use crate::ghosts::SymmetricFunction;
use crate::graph::DualGraph;
use crate::level::MultiplicityCochain;

fn graph(vertices: &[(&str, u64)], edges: &[(&str, &str, &str)]) -> DualGraph {
    DualGraph::new(
        vertices.iter().map(|&(id, g)| (id.to_string(), g)),
        edges
            .iter()
            .map(|&(id, t, h)| (id.to_string(), t.to_string(), h.to_string())),
    )
    .expect("gallery graphs are well-formed")
}

/// The level-8 tower showcase: five genus-0 vertices, eight edges, total
/// genus 4. Its 2-adic contraction tower has vertex counts (4, 3, 2), so the
/// ghost group is `Z/2 ⊕ Z/4 ⊕ Z/8` of order 64.
pub fn tower_showcase() -> (DualGraph, MultiplicityCochain) {
    let g = graph(
        &[("a", 0), ("b", 0), ("c", 0), ("d", 0), ("t", 0)],
        &[
            ("e1", "b", "t"),
            ("e2", "t", "d"),
            ("e3", "a", "b"),
            ("e4", "b", "a"),
            ("e5", "b", "d"),
            ("e6", "c", "b"),
            ("e7", "c", "b"),
            ("e8", "d", "c"),
        ],
    );
    let m = MultiplicityCochain::from_values(&g, 8, &[1, 1, 0, 0, 1, 6, 4, 2])
        .expect("showcase multiplicity is closed");
    (g, m)
}

/// The junior witness at level 5: the odd-level halving family at `d = 5`
/// (two parallel `M = 1` arcs and a 2-edge chain of `M = 2`). The constant
/// element `a ≡ 1` is a ghost of age 4/5.
pub fn junior5() -> (DualGraph, MultiplicityCochain, SymmetricFunction) {
    junior_odd(5)
}

/// The junior witness at level 8: three vertices, five edges, with the
/// element `ã = (1, 1, 1, 1, 2)` a ghost of age 3/4.
pub fn junior8() -> (DualGraph, MultiplicityCochain, SymmetricFunction) {
    let g = graph(
        &[("t", 0), ("a", 0), ("b", 0)],
        &[
            ("s1", "a", "t"),
            ("s2", "t", "b"),
            ("s3", "t", "b"),
            ("s4", "t", "a"),
            ("s5", "b", "a"),
        ],
    );
    let m = MultiplicityCochain::from_values(&g, 8, &[5, 1, 1, 3, 2])
        .expect("level-8 witness multiplicity is closed");
    let a = SymmetricFunction::from_values(8, &[1, 1, 1, 1, 2]).expect("level is positive");
    (g, m, a)
}

/// The junior witness at level 12: four vertices, six edges, with the
/// element `ã = (1, 1, 1, 1, 2, 2)` a ghost of age 2/3.
pub fn junior12() -> (DualGraph, MultiplicityCochain, SymmetricFunction) {
    let g = graph(
        &[("t", 0), ("a", 0), ("b2", 1), ("c", 0)],
        &[
            ("s1", "a", "t"),
            ("s2", "t", "c"),
            ("s3", "t", "c"),
            ("s4", "t", "a"),
            ("s5", "b2", "a"),
            ("s6", "c", "b2"),
        ],
    );
    let m = MultiplicityCochain::from_values(&g, 12, &[7, 1, 1, 5, 2, 2])
        .expect("level-12 witness multiplicity is closed");
    let a = SymmetricFunction::from_values(12, &[1, 1, 1, 1, 2, 2]).expect("level is positive");
    (g, m, a)
}

/// The odd-level halving family for odd `d ≥ 5`: two parallel arcs carrying
/// `M = 1` and a chain of `(d−1)/2` edges carrying `M = 2` back around. The
/// constant element `a ≡ 1` is a ghost of age `(d+3)/(2d) < 1`.
///
/// Chain vertices get genus 1 so the graph is stable.
pub fn junior_odd(d: u64) -> (DualGraph, MultiplicityCochain, SymmetricFunction) {
    assert!(d >= 5 && d % 2 == 1, "the halving family needs odd d ≥ 5");
    let t = (d - 1) / 2;
    let mut vertices: Vec<(String, u64)> = vec![("v0".to_string(), 0), ("v1".to_string(), 0)];
    vertices.extend((1..t).map(|i| (format!("p{i}"), 1)));
    let chain_vertex = |i: u64| -> String {
        match i {
            0 => "v1".to_string(),
            i if i == t => "v0".to_string(),
            i => format!("p{i}"),
        }
    };
    let mut edges: Vec<(String, String, String)> = vec![
        ("a1".to_string(), "v0".to_string(), "v1".to_string()),
        ("a2".to_string(), "v0".to_string(), "v1".to_string()),
    ];
    edges.extend((0..t).map(|i| (format!("c{}", i + 1), chain_vertex(i), chain_vertex(i + 1))));
    let g = DualGraph::new(vertices, edges).expect("halving family graphs are connected");
    let mut values = vec![1i64, 1];
    values.extend(std::iter::repeat_n(2i64, t as usize));
    let m = MultiplicityCochain::from_values(&g, d, &values)
        .expect("halving family multiplicity is closed");
    let a = SymmetricFunction::from_values(d, &vec![1i64; (t + 2) as usize])
        .expect("level is positive");
    (g, m, a)
}

/// The triangle with the circuit multiplicity at level 3: ghost group
/// `(Z/3)²`, minimal nontrivial age 1.
pub fn triangle3() -> (DualGraph, MultiplicityCochain) {
    let g = graph(
        &[("v1", 0), ("v2", 0), ("v3", 0)],
        &[("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
    );
    let m = MultiplicityCochain::from_values(&g, 3, &[1, 1, 1])
        .expect("circuit multiplicities are closed");
    (g, m)
}

/// The genus-(1,1) banana with a nonzero multiplicity at level 3: ghost group
/// `Z/3`, both nontrivial elements of age exactly 1.
pub fn banana3() -> (DualGraph, MultiplicityCochain) {
    let g = graph(
        &[("v1", 1), ("v2", 1)],
        &[("e1", "v1", "v2"), ("e2", "v1", "v2")],
    );
    let m =
        MultiplicityCochain::from_values(&g, 3, &[1, 2]).expect("banana multiplicity is closed");
    (g, m)
}

/// A single genus-1 vertex with one loop at level 3: no nontrivial ghosts.
pub fn loop3() -> (DualGraph, MultiplicityCochain) {
    let g = graph(&[("v", 1)], &[("e", "v", "v")]);
    let m = MultiplicityCochain::from_values(&g, 3, &[1]).expect("loops impose no closedness");
    (g, m)
}

/// The three-edge vine at level 3 with `M = (1, 1, 1)`: the constant `a ≡ 1`
/// is a ghost (the cut multiplicity lies in `im δ` because 3 | level).
pub fn vine3() -> (DualGraph, MultiplicityCochain) {
    let g = graph(
        &[("v1", 0), ("v2", 0)],
        &[("e1", "v1", "v2"), ("e2", "v1", "v2"), ("e3", "v1", "v2")],
    );
    let m = MultiplicityCochain::from_values(&g, 3, &[1, 1, 1])
        .expect("vine multiplicity is closed at level 3");
    (g, m)
}

/// The vine with `M = (1, 2, 3)` at level 6: the ghost group is trivial even
/// though the "edges with `M(e) ≡ 0`" contraction is not a bouquet — the
/// bouquet criterion must be applied one prime at a time.
pub fn parallel_vine6() -> (DualGraph, MultiplicityCochain) {
    let g = graph(
        &[("v1", 0), ("v2", 0)],
        &[("e1", "v1", "v2"), ("e2", "v1", "v2"), ("e3", "v1", "v2")],
    );
    let m = MultiplicityCochain::from_values(&g, 6, &[1, 2, 3])
        .expect("vine multiplicity is closed at level 6");
    (g, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain;

    #[test]
    fn all_instances_are_closed_and_connected() {
        let pairs = [
            tower_showcase(),
            triangle3(),
            banana3(),
            loop3(),
            vine3(),
            parallel_vine6(),
        ];
        for (g, m) in pairs {
            assert!(cochain::in_ker_partial(&g, m.cochain()));
            assert_eq!(m.values().len(), g.edge_count());
        }
        for (g, m, a) in [
            junior5(),
            junior8(),
            junior12(),
            junior_odd(7),
            junior_odd(9),
        ] {
            assert!(cochain::in_ker_partial(&g, m.cochain()));
            a.check_in_s_nu(&g, &m).unwrap();
        }
    }

    #[test]
    fn showcase_shape() {
        let (g, m) = tower_showcase();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.total_genus(), 4);
        assert_eq!(m.level(), 8);
    }

    #[test]
    fn witnesses_are_stable_graphs() {
        for (g, _, _) in [junior5(), junior8(), junior12(), junior_odd(7)] {
            g.validate(true, 0).unwrap();
        }
    }

    #[test]
    fn halving_family_vertex_and_edge_counts() {
        let (g, m, a) = junior_odd(9);
        // t = 4 chain edges plus two arcs; chain interior vertices p1..p3.
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(m.values(), &[1, 1, 2, 2, 2, 2]);
        assert_eq!(a.values(), &[1, 1, 1, 1, 1, 1]);
    }
}
