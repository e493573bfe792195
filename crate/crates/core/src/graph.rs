//! Finite multigraphs with named vertices and edges, plus the handful of
//! connectivity primitives the rest of the crate is built on.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub ends: (VertexId, VertexId),
}

impl Edge {
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

/// Loop-free multigraph. Vertices and edges are indexed in sorted order of
/// their identifiers, so index order is canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(EdgeId, VertexId)>>,
    loops_stripped: usize,
}

impl Multigraph {
    /// Builds a multigraph from identifier lists. Loops are dropped and
    /// counted; connectivity is not required here.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut vertex_names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        vertex_names.sort();
        if let Some(w) = vertex_names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0].clone()));
        }
        let lookup = |name: &str| vertex_names.binary_search_by(|v| v.as_str().cmp(name)).ok();

        let mut raw: Vec<(String, usize, usize)> = Vec::new();
        let mut seen = HashSet::new();
        let mut loops_stripped = 0;
        for (id, a, b) in edges {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateEdge(id));
            }
            let ua = lookup(&a).ok_or_else(|| Error::DanglingEndpoint { edge: id.clone(), vertex: a.clone() })?;
            let ub = lookup(&b).ok_or_else(|| Error::DanglingEndpoint { edge: id.clone(), vertex: b.clone() })?;
            if ua == ub {
                loops_stripped += 1;
                continue;
            }
            raw.push((id, ua, ub));
        }
        raw.sort_by(|x, y| x.0.cmp(&y.0));

        let mut adjacency = vec![Vec::new(); vertex_names.len()];
        let edges = raw
            .into_iter()
            .enumerate()
            .map(|(i, (name, a, b))| {
                adjacency[a].push((EdgeId(i), VertexId(b)));
                adjacency[b].push((EdgeId(i), VertexId(a)));
                Edge { name, ends: (VertexId(a), VertexId(b)) }
            })
            .collect();
        Ok(Multigraph { vertex_names, edges, adjacency, loops_stripped })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn loops_stripped(&self) -> usize {
        self.loops_stripped
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.binary_search_by(|v| v.as_str().cmp(name)).ok().map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn neighbors(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.0].len()
    }

    /// Component label per vertex of the graph with `removed` edges deleted.
    /// Labels are assigned in order of each component's smallest vertex.
    pub fn component_labels(&self, removed: &FixedBitSet) -> (Vec<usize>, usize) {
        self.labels_avoiding(removed, None)
    }

    fn labels_avoiding(&self, removed_edges: &FixedBitSet, removed_vertices: Option<&FixedBitSet>) -> (Vec<usize>, usize) {
        const UNSET: usize = usize::MAX;
        let mut label = vec![UNSET; self.vertex_count()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.vertex_count() {
            if label[start] != UNSET || removed_vertices.is_some_and(|r| r.contains(start)) {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in &self.adjacency[v] {
                    if removed_edges.contains(e.0) || label[w.0] != UNSET {
                        continue;
                    }
                    if removed_vertices.is_some_and(|r| r.contains(w.0)) {
                        continue;
                    }
                    label[w.0] = count;
                    queue.push_back(w.0);
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Component labels after deleting vertices (and all incident edges).
    /// Deleted vertices carry `usize::MAX`.
    pub fn component_labels_without_vertices(&self, removed: &FixedBitSet) -> (Vec<usize>, usize) {
        self.labels_avoiding(&FixedBitSet::with_capacity(self.edge_count()), Some(removed))
    }

    pub fn component_count(&self) -> usize {
        self.component_labels(&FixedBitSet::with_capacity(self.edge_count())).1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn edge_set(&self, edges: &[EdgeId]) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.edge_count());
        for e in edges {
            set.insert(e.0);
        }
        set
    }

    /// Maximum number of edge-disjoint paths between `s` and `t`, i.e. the
    /// size of a minimum `s`-`t` edge cut.
    pub fn edge_connectivity(&self, s: VertexId, t: VertexId) -> usize {
        self.edge_connectivity_capped(s, t, usize::MAX)
    }

    /// Like [`Multigraph::edge_connectivity`] but stops once `cap` paths are found.
    pub fn edge_connectivity_capped(&self, s: VertexId, t: VertexId, cap: usize) -> usize {
        if s == t {
            return usize::MAX;
        }
        // flow[e] is the flow along e from ends.0 to ends.1, in {-1, 0, 1}
        let mut flow = vec![0i8; self.edge_count()];
        let mut value = 0;
        let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        while value < cap {
            parent.iter_mut().for_each(|p| *p = None);
            let mut reached = FixedBitSet::with_capacity(self.vertex_count());
            reached.insert(s.0);
            queue.clear();
            queue.push_back(s);
            'bfs: while let Some(v) = queue.pop_front() {
                for &(e, w) in &self.adjacency[v.0] {
                    if reached.contains(w.0) {
                        continue;
                    }
                    let forward = self.edges[e.0].ends.0 == v;
                    let residual = if forward { 1 - flow[e.0] } else { 1 + flow[e.0] };
                    if residual <= 0 {
                        continue;
                    }
                    reached.insert(w.0);
                    parent[w.0] = Some((e, v));
                    if w == t {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
            if !reached.contains(t.0) {
                break;
            }
            let mut v = t;
            while let Some((e, u)) = parent[v.0] {
                if self.edges[e.0].ends.0 == u {
                    flow[e.0] += 1;
                } else {
                    flow[e.0] -= 1;
                }
                v = u;
            }
            value += 1;
        }
        value
    }

    /// Renames vertices through `rename`, keeping edge identifiers.
    pub fn relabeled(&self, rename: impl Fn(&str) -> String) -> Result<Multigraph> {
        let vertices: Vec<String> = self.vertex_names.iter().map(|n| rename(n)).collect();
        let edges = self.edges.iter().map(|e| {
            (e.name.clone(), rename(self.vertex_name(e.ends.0)), rename(self.vertex_name(e.ends.1)))
        });
        Multigraph::new(vertices, edges.collect::<Vec<_>>())
    }
}

/// Terminal vertices, sorted. Terminal `i` is the `i`-th smallest terminal
/// vertex; all terminal bitsets in the crate are indexed this way.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TerminalSet {
    vertices: Vec<VertexId>,
}

impl TerminalSet {
    pub fn new(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort();
        vertices.dedup();
        TerminalSet { vertices }
    }

    pub fn all(g: &Multigraph) -> Self {
        TerminalSet { vertices: g.vertices().collect() }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, index: usize) -> VertexId {
        self.vertices[index]
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn names<'a>(&'a self, g: &'a Multigraph) -> impl Iterator<Item = &'a str> + 'a {
        self.vertices.iter().map(move |&v| g.vertex_name(v))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeDocument {
    pub id: String,
    pub ends: [String; 2],
}

/// On-disk graph description shared by the CLI and the fixture corpus.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminals: Option<Vec<String>>,
}

impl GraphDocument {
    pub fn from_graph(g: &Multigraph, t: &TerminalSet) -> Self {
        GraphDocument {
            vertices: g.vertex_names.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    id: e.name.clone(),
                    ends: [g.vertex_name(e.ends.0).to_owned(), g.vertex_name(e.ends.1).to_owned()],
                })
                .collect(),
            terminals: Some(t.names(g).map(str::to_owned).collect()),
        }
    }

    pub fn into_graph(self) -> Result<(Multigraph, TerminalSet)> {
        let g = Multigraph::new(
            self.vertices,
            self.edges.into_iter().map(|e| {
                let [a, b] = e.ends;
                (e.id, a, b)
            }),
        )?;
        let components = g.component_count();
        if components > 1 {
            return Err(Error::Disconnected(components));
        }
        let mut terminals = Vec::new();
        let mut seen = BTreeSet::new();
        for name in self.terminals.unwrap_or_default() {
            let v = g.vertex(&name).ok_or_else(|| Error::UnknownTerminal(name.clone()))?;
            if !seen.insert(v) {
                return Err(Error::Malformed(format!("terminal `{name}` listed twice")));
            }
            terminals.push(v);
        }
        Ok((g, TerminalSet::new(terminals)))
    }
}

/// Parses a graph document. The result is loop-free and connected.
pub fn parse_graph(text: &str) -> Result<(Multigraph, TerminalSet)> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.into_graph()
}

/// The graph with every edge split in two by a midpoint vertex.
#[derive(Clone, Debug)]
pub struct SubdividedGraph {
    pub graph: Multigraph,
    /// For each vertex of `graph`, the source edge it is the midpoint of.
    pub midpoint_of: Vec<Option<EdgeId>>,
    /// For each vertex of `graph`, the source vertex it stands for.
    pub original_of: Vec<Option<VertexId>>,
}

impl SubdividedGraph {
    pub fn midpoint(&self, e: EdgeId) -> VertexId {
        VertexId(self.midpoint_of.iter().position(|m| *m == Some(e)).expect("every edge has a midpoint"))
    }
}

fn fresh_name(base: String, taken: &HashSet<String>) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

pub fn barycentric_subdivision(g: &Multigraph) -> SubdividedGraph {
    let mut taken: HashSet<String> = g.vertex_names.iter().cloned().collect();
    let mut vertices = g.vertex_names.clone();
    let mut mid_names = Vec::with_capacity(g.edge_count());
    for e in &g.edges {
        let name = fresh_name(format!("{}@mid", e.name), &taken);
        taken.insert(name.clone());
        vertices.push(name.clone());
        mid_names.push(name);
    }
    let mut edge_names: HashSet<String> = HashSet::new();
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    for (e, mid) in g.edges.iter().zip(&mid_names) {
        for (half, end) in [(0, e.ends.0), (1, e.ends.1)] {
            let name = fresh_name(format!("{}.{half}", e.name), &edge_names);
            edge_names.insert(name.clone());
            edges.push((name, g.vertex_name(end).to_owned(), mid.clone()));
        }
    }
    let graph = Multigraph::new(vertices, edges).expect("subdivision of a valid multigraph is valid");
    let mut midpoint_of = vec![None; graph.vertex_count()];
    let mut original_of = vec![None; graph.vertex_count()];
    for v in g.vertices() {
        original_of[graph.vertex(g.vertex_name(v)).unwrap().0] = Some(v);
    }
    for (i, mid) in mid_names.iter().enumerate() {
        midpoint_of[graph.vertex(mid).unwrap().0] = Some(EdgeId(i));
    }
    SubdividedGraph { graph, midpoint_of, original_of }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub cut: Vec<EdgeId>,
    /// Components in order of their smallest vertex.
    pub components: Vec<Vec<VertexId>>,
    /// Per component, the cut edges incident to it (the midpoints bounding it
    /// in the subdivided picture).
    pub boundaries: Vec<Vec<EdgeId>>,
}

impl ComponentDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

pub fn delete_edges(g: &Multigraph, cut: &[EdgeId]) -> Result<ComponentDecomposition> {
    if let Some(e) = cut.iter().find(|e| e.0 >= g.edge_count()) {
        return Err(Error::UnknownEdge(format!("#{}", e.0)));
    }
    let mut cut: Vec<EdgeId> = cut.to_vec();
    cut.sort();
    cut.dedup();
    let (labels, count) = g.component_labels(&g.edge_set(&cut));
    let mut components = vec![Vec::new(); count];
    for v in g.vertices() {
        components[labels[v.0]].push(v);
    }
    let mut boundaries = vec![Vec::new(); count];
    for &e in &cut {
        let (a, b) = g.edge(e).ends;
        boundaries[labels[a.0]].push(e);
        if labels[b.0] != labels[a.0] {
            boundaries[labels[b.0]].push(e);
        }
    }
    Ok(ComponentDecomposition { cut, components, boundaries })
}

/// Same as [`delete_edges`] but with edges named by identifier.
pub fn delete_named_edges(g: &Multigraph, cut: &[&str]) -> Result<ComponentDecomposition> {
    let ids = cut
        .iter()
        .map(|name| g.edge_by_name(name).ok_or_else(|| Error::UnknownEdge((*name).to_owned())))
        .collect::<Result<Vec<_>>>()?;
    delete_edges(g, &ids)
}

/// Minimum cardinality of an edge cut separating two terminals.
///
/// Every terminal-separating cut separates the first terminal from some
/// other terminal, so the minimum over pairs `(t0, ti)` already equals the
/// minimum over all pairs.
pub fn min_separating_cut_size(g: &Multigraph, t: &TerminalSet) -> Result<usize> {
    if t.len() < 2 {
        return Err(Error::TooFewTerminals(t.len()));
    }
    let first = t.vertex(0);
    let mut best = usize::MAX;
    for &other in &t.vertices()[1..] {
        best = best.min(g.edge_connectivity_capped(first, other, best));
    }
    Ok(best)
}
