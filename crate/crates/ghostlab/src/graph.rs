//! Stable dual multigraphs: loops and parallel edges, vertex genera, stored
//! edge orientations, spanning-tree circuits, cut bases, and edge contraction.
//!
//! Every graph is connected by construction (the constructor rejects anything
//! else), and every derived object is deterministic: the spanning tree grows
//! breadth-first from the lexicographically least vertex id with edges scanned
//! in file order, so fundamental circuits, cut bases, and quotient graphs are
//! identical across runs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a vertex in the graph's canonical vertex order (file order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexIdx(pub usize);

/// Index of an unoriented edge in the graph's canonical edge order (file order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeIdx(pub usize);

/// One of the two orientations of an edge.
///
/// The stored (file) orientation of edge `e` is `forward(e)`; the involution
/// `e ↦ ē` swaps `reversed`. A loop's two orientations are still distinct
/// oriented edges, so the involution is fixed-point-free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    /// The underlying unoriented edge.
    pub edge: EdgeIdx,
    /// Whether this orientation is the reverse of the stored one.
    pub reversed: bool,
}

impl OrientedEdge {
    /// The stored tail→head orientation of `edge`.
    pub fn forward(edge: EdgeIdx) -> Self {
        OrientedEdge {
            edge,
            reversed: false,
        }
    }

    /// The reverse of the stored orientation of `edge`.
    pub fn backward(edge: EdgeIdx) -> Self {
        OrientedEdge {
            edge,
            reversed: true,
        }
    }

    /// The involution `e ↦ ē`.
    pub fn opposite(self) -> Self {
        OrientedEdge {
            edge: self.edge,
            reversed: !self.reversed,
        }
    }
}

/// A vertex of a dual graph: one irreducible component of a nodal curve,
/// weighted by its geometric genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    /// Unique identifier (the JSON `id`).
    pub id: String,
    /// Geometric genus of the component.
    pub genus: u64,
}

/// An edge of a dual graph (a node of the curve) with its stored orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Unique identifier (the JSON `id`).
    pub id: String,
    /// Tail vertex of the stored orientation.
    pub tail: VertexIdx,
    /// Head vertex of the stored orientation.
    pub head: VertexIdx,
}

/// Errors arising from graph construction, validation, or lookups.
#[derive(Debug, Error)]
pub enum GraphError {
    /// A graph must have at least one vertex.
    #[error("graph has no vertices")]
    Empty,
    /// Two vertices share an id.
    #[error("duplicate vertex id `{id}`")]
    DuplicateVertex {
        /// The repeated id.
        id: String,
    },
    /// Two edges share an id.
    #[error("duplicate edge id `{id}`")]
    DuplicateEdge {
        /// The repeated id.
        id: String,
    },
    /// An edge endpoint names a vertex that does not exist.
    #[error("edge `{edge}` has dangling endpoint `{vertex}`")]
    DanglingEndpoint {
        /// The offending edge id.
        edge: String,
        /// The missing vertex id.
        vertex: String,
    },
    /// The graph is not connected.
    #[error("graph is disconnected: vertex `{vertex}` is unreachable from `{root}`")]
    Disconnected {
        /// A vertex outside the root's component.
        vertex: String,
        /// The chosen root (lexicographically least vertex id).
        root: String,
    },
    /// A vertex violates stability: genus 0 needs valence ≥ 3, genus 1 needs
    /// valence ≥ 1 (loops count twice).
    #[error("unstable vertex `{vertex}`: genus {genus} with valence {valence}")]
    UnstableVertex {
        /// The offending vertex id.
        vertex: String,
        /// Its genus.
        genus: u64,
        /// Its valence, loops counted twice.
        valence: usize,
    },
    /// The total genus is below a required minimum.
    #[error("total genus {genus} is below the required minimum {min_genus}")]
    GenusTooSmall {
        /// Computed total genus.
        genus: u64,
        /// Required minimum.
        min_genus: u64,
    },
    /// An operation referenced an edge id that is not in the graph.
    #[error("unknown edge id `{id}`")]
    UnknownEdge {
        /// The unresolved id.
        id: String,
    },
    /// An operation referenced a vertex id that is not in the graph.
    #[error("unknown vertex id `{id}`")]
    UnknownVertex {
        /// The unresolved id.
        id: String,
    },
    /// The JSON payload could not be parsed.
    #[error("invalid graph JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Deterministic breadth-first spanning tree data.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SpanningTree {
    /// BFS root: the vertex with the lexicographically least id.
    root: VertexIdx,
    /// For each non-root vertex, the tree edge oriented parent → vertex.
    parent_edge: Vec<Option<OrientedEdge>>,
    /// BFS depth of each vertex.
    depth: Vec<usize>,
    /// Edges outside the tree, in canonical order (loops are always here).
    non_tree: Vec<EdgeIdx>,
}

/// A connected multigraph with loops, parallel edges, vertex genera, and a
/// stored orientation per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_ids: BTreeMap<String, VertexIdx>,
    edge_ids: BTreeMap<String, EdgeIdx>,
    tree: SpanningTree,
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: String,
    genus: u64,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    tail: String,
    head: String,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

impl DualGraph {
    /// Builds a graph from `(id, genus)` vertices and `(id, tail, head)` edges.
    ///
    /// Checks well-formedness (nonempty, unique ids, resolvable endpoints) and
    /// connectivity; stability is a separate, on-demand check ([`Self::validate`]).
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = (String, u64)>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .map(|(id, genus)| Vertex { id, genus })
            .collect();
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut vertex_ids = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_ids.insert(v.id.clone(), VertexIdx(i)).is_some() {
                return Err(GraphError::DuplicateVertex { id: v.id.clone() });
            }
        }
        let mut resolved = Vec::new();
        let mut edge_ids = BTreeMap::new();
        for (id, tail, head) in edges {
            let lookup = |end: &str| {
                vertex_ids
                    .get(end)
                    .copied()
                    .ok_or_else(|| GraphError::DanglingEndpoint {
                        edge: id.clone(),
                        vertex: end.to_string(),
                    })
            };
            let edge = Edge {
                tail: lookup(&tail)?,
                head: lookup(&head)?,
                id,
            };
            if edge_ids
                .insert(edge.id.clone(), EdgeIdx(resolved.len()))
                .is_some()
            {
                return Err(GraphError::DuplicateEdge { id: edge.id });
            }
            resolved.push(edge);
        }
        let tree = SpanningTree::grow(&vertices, &resolved)?;
        Ok(DualGraph {
            vertices,
            edges: resolved,
            vertex_ids,
            edge_ids,
            tree,
        })
    }

    /// Parses the graph JSON wire format:
    /// `{"vertices":[{"id","genus"},…],"edges":[{"id","tail","head"},…]}`.
    /// Edge order in the file is the canonical edge enumeration.
    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson = serde_json::from_str(text)?;
        DualGraph::new(
            raw.vertices.into_iter().map(|v| (v.id, v.genus)),
            raw.edges.into_iter().map(|e| (e.id, e.tail, e.head)),
        )
    }

    /// Serializes to the graph JSON wire format, preserving canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        let raw = GraphJson {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexJson {
                    id: v.id.clone(),
                    genus: v.genus,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    tail: self.vertices[e.tail.0].id.clone(),
                    head: self.vertices[e.head.0].id.clone(),
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("graph serialization cannot fail")
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of unoriented edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertices in canonical order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The vertex at a canonical index.
    pub fn vertex(&self, v: VertexIdx) -> &Vertex {
        &self.vertices[v.0]
    }

    /// The edge at a canonical index.
    pub fn edge(&self, e: EdgeIdx) -> &Edge {
        &self.edges[e.0]
    }

    /// Resolves a vertex id.
    pub fn vertex_idx(&self, id: &str) -> Option<VertexIdx> {
        self.vertex_ids.get(id).copied()
    }

    /// Resolves an edge id.
    pub fn edge_idx(&self, id: &str) -> Option<EdgeIdx> {
        self.edge_ids.get(id).copied()
    }

    /// Tail vertex of an oriented edge.
    pub fn tail_of(&self, oe: OrientedEdge) -> VertexIdx {
        let e = &self.edges[oe.edge.0];
        if oe.reversed {
            e.head
        } else {
            e.tail
        }
    }

    /// Head vertex of an oriented edge.
    pub fn head_of(&self, oe: OrientedEdge) -> VertexIdx {
        let e = &self.edges[oe.edge.0];
        if oe.reversed {
            e.tail
        } else {
            e.head
        }
    }

    /// Whether an edge is a loop (equal endpoints).
    pub fn is_loop(&self, e: EdgeIdx) -> bool {
        let edge = &self.edges[e.0];
        edge.tail == edge.head
    }

    /// Valence of a vertex, with loops counting twice.
    pub fn valence(&self, v: VertexIdx) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.tail == v) + usize::from(e.head == v))
            .sum()
    }

    /// The breadth-first root: the vertex with the lexicographically least id.
    pub fn root(&self) -> VertexIdx {
        self.tree.root
    }

    /// Checks stability and (optionally) a genus floor.
    ///
    /// Connectivity and well-formedness always hold by construction. With
    /// `require_stable`, every genus-0 vertex needs valence ≥ 3 and every
    /// genus-1 vertex valence ≥ 1 (loops count twice); `min_genus` bounds the
    /// total genus from below.
    pub fn validate(&self, require_stable: bool, min_genus: u64) -> Result<(), GraphError> {
        if require_stable {
            for (i, v) in self.vertices.iter().enumerate() {
                let valence = self.valence(VertexIdx(i));
                let unstable = (v.genus == 0 && valence < 3) || (v.genus == 1 && valence < 1);
                if unstable {
                    return Err(GraphError::UnstableVertex {
                        vertex: v.id.clone(),
                        genus: v.genus,
                        valence,
                    });
                }
            }
        }
        let genus = self.total_genus();
        if genus < min_genus {
            return Err(GraphError::GenusTooSmall { genus, min_genus });
        }
        Ok(())
    }

    /// First Betti number `#E − #V + 1` of the (connected) graph.
    pub fn betti1(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Total genus `Σ_v genus(v) + b₁`.
    pub fn total_genus(&self) -> u64 {
        self.vertices.iter().map(|v| v.genus).sum::<u64>() + self.betti1() as u64
    }

    /// Sum of vertex genera (the geometric-genus part, without `b₁`).
    pub fn vertex_genus_sum(&self) -> u64 {
        self.vertices.iter().map(|v| v.genus).sum()
    }

    /// Whether the graph is a bouquet (a single vertex, any number of loops).
    pub fn is_bouquet(&self) -> bool {
        self.vertices.len() == 1
    }

    /// The unique tree path between two vertices, as oriented edges from
    /// `from` to `to` (empty when they coincide).
    fn tree_path(&self, from: VertexIdx, to: VertexIdx) -> Vec<OrientedEdge> {
        let parent_of = |v: VertexIdx| -> (OrientedEdge, VertexIdx) {
            let pe = self.tree.parent_edge[v.0].expect("non-root vertex has a parent");
            (pe, self.tail_of(pe))
        };
        let mut ascent = Vec::new(); // walks from → ancestor
        let mut descent = Vec::new(); // walks ancestor → to, collected backwards
        let (mut x, mut y) = (from, to);
        while self.tree.depth[x.0] > self.tree.depth[y.0] {
            let (pe, parent) = parent_of(x);
            ascent.push(pe.opposite());
            x = parent;
        }
        while self.tree.depth[y.0] > self.tree.depth[x.0] {
            let (pe, parent) = parent_of(y);
            descent.push(pe);
            y = parent;
        }
        while x != y {
            let (pe_x, px) = parent_of(x);
            ascent.push(pe_x.opposite());
            x = px;
            let (pe_y, py) = parent_of(y);
            descent.push(pe_y);
            y = py;
        }
        ascent.extend(descent.into_iter().rev());
        ascent
    }

    /// The fundamental circuits of the deterministic spanning tree: one per
    /// non-tree edge, in canonical edge order. There are exactly `b₁` of them
    /// and their characteristic 1-cochains are linearly independent.
    pub fn fundamental_circuits(&self) -> Vec<Circuit> {
        self.tree
            .non_tree
            .iter()
            .map(|&e| {
                let mut edges = vec![OrientedEdge::forward(e)];
                edges.extend(self.tree_path(self.edges[e.0].head, self.edges[e.0].tail));
                let circuit = Circuit { edges };
                debug_assert!(circuit.is_valid(self));
                circuit
            })
            .collect()
    }

    /// A deterministic basis of the cut space: the single-vertex cuts `{v}`
    /// for every vertex except the breadth-first root, in canonical order.
    pub fn cuts_basis(&self) -> Vec<Cut> {
        (0..self.vertices.len())
            .map(VertexIdx)
            .filter(|&v| v != self.tree.root)
            .map(Cut::of_vertex)
            .collect()
    }

    /// Whether an edge is a bridge (separating edge). Loops never are.
    ///
    /// An edge lies on some circuit iff it lies on some fundamental circuit,
    /// so bridges are exactly the edges missed by all of them.
    pub fn is_bridge(&self, e: EdgeIdx) -> bool {
        !self
            .fundamental_circuits()
            .iter()
            .flat_map(|c| c.edges.iter())
            .any(|oe| oe.edge == e)
    }

    /// First Betti number of the subgraph spanned by an edge subset (vertex
    /// set = incident vertices), summing one `b₁` per connected piece.
    pub fn subgraph_betti1(&self, edges: &BTreeSet<EdgeIdx>) -> usize {
        let mut dsu: UnionFind<usize> = UnionFind::new(self.vertices.len());
        let mut incident = BTreeSet::new();
        for &e in edges {
            let edge = &self.edges[e.0];
            dsu.union(edge.tail.0, edge.head.0);
            incident.insert(edge.tail.0);
            incident.insert(edge.head.0);
        }
        let pieces: BTreeSet<usize> = incident.iter().map(|&v| dsu.find(v)).collect();
        edges.len() + pieces.len() - incident.len()
    }

    /// Contracts an edge subset given by ids. Fails on unknown ids.
    pub fn contract_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Contraction, GraphError> {
        let mut edges = BTreeSet::new();
        for id in ids {
            let idx = self
                .edge_idx(id.as_ref())
                .ok_or_else(|| GraphError::UnknownEdge {
                    id: id.as_ref().to_string(),
                })?;
            edges.insert(idx);
        }
        Ok(self.contract(&edges))
    }

    /// Contracts an edge subset.
    ///
    /// Vertices connected by contracted edges merge into one quotient vertex,
    /// named after the member with the least canonical index; its genus is the
    /// sum of member genera plus the `b₁` of the contracted piece, so the
    /// total genus is preserved. Non-contracted edges survive with their ids
    /// and stored orientations.
    pub fn contract(&self, edges: &BTreeSet<EdgeIdx>) -> Contraction {
        assert!(
            edges.iter().all(|e| e.0 < self.edges.len()),
            "contracted edge index out of range"
        );
        let mut dsu: UnionFind<usize> = UnionFind::new(self.vertices.len());
        for &e in edges {
            let edge = &self.edges[e.0];
            dsu.union(edge.tail.0, edge.head.0);
        }
        // Quotient classes ordered by least member index (= first appearance).
        let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex_map = vec![VertexIdx(0); self.vertices.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (v, slot) in vertex_map.iter_mut().enumerate() {
            let root = dsu.find(v);
            let class = *class_of_root.entry(root).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            members[class].push(v);
            *slot = VertexIdx(class);
        }
        let mut contracted_in_class = vec![0usize; members.len()];
        for &e in edges {
            contracted_in_class[vertex_map[self.edges[e.0].tail.0].0] += 1;
        }
        let quotient_vertices: Vec<(String, u64)> = members
            .iter()
            .zip(&contracted_in_class)
            .map(|(member, &e_count)| {
                // Each piece is connected by its contracted edges, so its b₁
                // is #edges − #vertices + 1.
                let piece_betti = e_count + 1 - member.len();
                let genus: u64 = member.iter().map(|&v| self.vertices[v].genus).sum::<u64>()
                    + piece_betti as u64;
                (self.vertices[member[0]].id.clone(), genus)
            })
            .collect();
        let mut edge_map = Vec::new();
        let mut edge_preimage = vec![None; self.edges.len()];
        let quotient_edges: Vec<(String, String, String)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !edges.contains(&EdgeIdx(*i)))
            .map(|(i, e)| {
                edge_preimage[i] = Some(EdgeIdx(edge_map.len()));
                edge_map.push(EdgeIdx(i));
                (
                    e.id.clone(),
                    quotient_vertices[vertex_map[e.tail.0].0].0.clone(),
                    quotient_vertices[vertex_map[e.head.0].0].0.clone(),
                )
            })
            .collect();
        let quotient = DualGraph::new(quotient_vertices, quotient_edges)
            .expect("contraction of a connected graph is connected");
        Contraction {
            source: self.clone(),
            contracted: edges.iter().copied().collect(),
            quotient,
            vertex_map,
            edge_map,
            edge_preimage,
        }
    }
}

impl SpanningTree {
    fn grow(vertices: &[Vertex], edges: &[Edge]) -> Result<Self, GraphError> {
        let root = vertices
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.id.cmp(&b.id))
            .map(|(i, _)| VertexIdx(i))
            .ok_or(GraphError::Empty)?;
        // Adjacency in canonical edge order, both orientations.
        let mut adjacency: Vec<Vec<OrientedEdge>> = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.tail.0].push(OrientedEdge::forward(EdgeIdx(i)));
            if e.tail != e.head {
                adjacency[e.head.0].push(OrientedEdge::backward(EdgeIdx(i)));
            }
        }
        let mut parent_edge = vec![None; vertices.len()];
        let mut depth = vec![usize::MAX; vertices.len()];
        let mut in_tree = vec![false; edges.len()];
        depth[root.0] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &oe in &adjacency[v.0] {
                let e = &edges[oe.edge.0];
                let target = if oe.reversed { e.tail } else { e.head };
                if depth[target.0] == usize::MAX {
                    depth[target.0] = depth[v.0] + 1;
                    parent_edge[target.0] = Some(oe);
                    in_tree[oe.edge.0] = true;
                    queue.push_back(target);
                }
            }
        }
        if let Some(stranded) = depth.iter().position(|&d| d == usize::MAX) {
            return Err(GraphError::Disconnected {
                vertex: vertices[stranded].id.clone(),
                root: vertices[root.0].id.clone(),
            });
        }
        let non_tree = (0..edges.len())
            .map(EdgeIdx)
            .filter(|e| !in_tree[e.0])
            .collect();
        Ok(SpanningTree {
            root,
            parent_edge,
            depth,
            non_tree,
        })
    }
}

/// A closed walk of oriented edges, each unoriented edge used at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    /// The oriented edges in traversal order; head of each equals tail of the
    /// next, cyclically. A single loop is a valid circuit.
    pub edges: Vec<OrientedEdge>,
}

impl Circuit {
    /// Number of edges traversed.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    /// Circuits are never empty, but the standard pairing keeps clippy happy.
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Checks the circuit invariants against a graph: nonempty, cyclically
    /// matched endpoints, distinct unoriented edges.
    pub fn is_valid(&self, graph: &DualGraph) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let distinct: BTreeSet<EdgeIdx> = self.edges.iter().map(|oe| oe.edge).collect();
        if distinct.len() != self.edges.len() {
            return false;
        }
        self.edges
            .iter()
            .circular_tuple_windows()
            .all(|(a, b)| graph.head_of(*a) == graph.tail_of(*b))
    }
}

/// A cut: the ±1 edge function of a proper nonempty vertex subset `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    /// The vertex subset `W`.
    pub side: BTreeSet<VertexIdx>,
}

impl Cut {
    /// The single-vertex cut `W = {v}`.
    pub fn of_vertex(v: VertexIdx) -> Self {
        Cut {
            side: BTreeSet::from([v]),
        }
    }

    /// Value on the stored orientation of `e`: `+1` leaving `W`, `−1`
    /// entering `W`, `0` otherwise (in particular on loops).
    pub fn coefficient(&self, graph: &DualGraph, e: EdgeIdx) -> i8 {
        let edge = graph.edge(e);
        match (
            self.side.contains(&edge.tail),
            self.side.contains(&edge.head),
        ) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        }
    }
}

/// An edge contraction `Γ → Γ(ν)`: the source, the contracted subset, the
/// quotient, and the vertex/edge correspondences.
#[derive(Clone, Debug)]
pub struct Contraction {
    source: DualGraph,
    contracted: Vec<EdgeIdx>,
    quotient: DualGraph,
    vertex_map: Vec<VertexIdx>,
    edge_map: Vec<EdgeIdx>,
    edge_preimage: Vec<Option<EdgeIdx>>,
}

impl Contraction {
    /// The graph being contracted.
    pub fn source(&self) -> &DualGraph {
        &self.source
    }

    /// The quotient graph.
    pub fn quotient(&self) -> &DualGraph {
        &self.quotient
    }

    /// The contracted edges, sorted by canonical index.
    pub fn contracted_edges(&self) -> &[EdgeIdx] {
        &self.contracted
    }

    /// Image of a source vertex in the quotient.
    pub fn map_vertex(&self, v: VertexIdx) -> VertexIdx {
        self.vertex_map[v.0]
    }

    /// The source edge underlying a quotient edge.
    pub fn source_edge(&self, e: EdgeIdx) -> EdgeIdx {
        self.edge_map[e.0]
    }

    /// The quotient edge a source edge survives as (`None` if contracted).
    pub fn quotient_edge(&self, e: EdgeIdx) -> Option<EdgeIdx> {
        self.edge_preimage[e.0]
    }
}

/// Enumerates all connected multigraphs (loops and parallel edges allowed)
/// with at most `max_vertices` vertices and `max_edges` edges, one
/// representative per isomorphism class, all genera 0.
///
/// The representative is canonical: its sorted edge list (as vertex-index
/// pairs) is minimal over all vertex relabelings. Output is ordered by
/// (vertex count, edge count, canonical edge list); ids are `v0, v1, …` and
/// `e0, e1, …`.
pub fn enumerate_connected(max_vertices: usize, max_edges: usize) -> Vec<DualGraph> {
    let mut canonical_forms: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
    for nv in 1..=max_vertices {
        let slots: Vec<(usize, usize)> =
            (0..nv).flat_map(|i| (i..nv).map(move |j| (i, j))).collect();
        let min_edges = nv.saturating_sub(1);
        for ne in min_edges..=max_edges {
            for combo in slots.iter().combinations_with_replacement(ne) {
                let edges: Vec<(usize, usize)> = combo.into_iter().copied().collect();
                if !spans_connected(nv, &edges) {
                    continue;
                }
                canonical_forms.insert((nv, canonical_form(nv, &edges)));
            }
        }
    }
    canonical_forms
        .into_iter()
        .map(|(nv, edges)| {
            DualGraph::new(
                (0..nv).map(|i| (format!("v{i}"), 0)),
                edges
                    .iter()
                    .enumerate()
                    .map(|(k, &(i, j))| (format!("e{k}"), format!("v{i}"), format!("v{j}"))),
            )
            .expect("enumerated graphs are connected and well-formed")
        })
        .collect()
}

/// Whether the edge list connects all `nv` vertices.
fn spans_connected(nv: usize, edges: &[(usize, usize)]) -> bool {
    let mut dsu: UnionFind<usize> = UnionFind::new(nv);
    for &(i, j) in edges {
        dsu.union(i, j);
    }
    (1..nv).all(|v| dsu.equiv(0, v))
}

/// The minimal sorted edge list over all vertex relabelings.
fn canonical_form(nv: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    (0..nv)
        .permutations(nv)
        .map(|perm| {
            let mut relabeled: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(i, j)| {
                    let (a, b) = (perm[i], perm[j]);
                    (a.min(b), a.max(b))
                })
                .collect();
            relabeled.sort_unstable();
            relabeled
        })
        .min()
        .expect("at least one permutation exists")
}
