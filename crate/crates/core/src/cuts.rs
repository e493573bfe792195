//! Minimum terminal-separating edge cuts and their equivalence classes.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{structural, Error, Result};
use crate::graph::{min_separating_cut_size, EdgeId, Multigraph, TerminalSet, VertexId};

/// Limits for exhaustive cut enumeration. Exceeding any of them is an
/// error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_cut_size: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_vertices: 10, max_edges: 16, max_cut_size: 4 }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_vertices: usize::MAX, max_edges: usize::MAX, max_cut_size: usize::MAX }
    }

    pub fn check_graph(&self, g: &Multigraph) -> Result<()> {
        if g.vertex_count() > self.max_vertices {
            return Err(Error::BudgetExceeded(format!(
                "{} vertices > {} allowed",
                g.vertex_count(),
                self.max_vertices
            )));
        }
        if g.edge_count() > self.max_edges {
            return Err(Error::BudgetExceeded(format!("{} edges > {} allowed", g.edge_count(), self.max_edges)));
        }
        Ok(())
    }

    pub fn check_cut_size(&self, size: usize) -> Result<()> {
        if size > self.max_cut_size {
            return Err(Error::BudgetExceeded(format!(
                "minimum cut cardinality {size} > {} allowed",
                self.max_cut_size
            )));
        }
        Ok(())
    }
}

/// A set of edges, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeCut {
    edges: Vec<EdgeId>,
}

impl EdgeCut {
    pub fn new(mut edges: Vec<EdgeId>) -> Self {
        edges.sort();
        edges.dedup();
        EdgeCut { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn names<'a>(&'a self, g: &'a Multigraph) -> Vec<&'a str> {
        self.edges.iter().map(|&e| g.edge_name(e)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Partition of the terminals into two nonempty sides. `side_a` always
/// holds terminal 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TerminalBipartition {
    side_a: FixedBitSet,
    side_b: FixedBitSet,
}

impl TerminalBipartition {
    /// Orients `one` and its complement canonically. Fails if either side
    /// would be empty.
    pub fn from_side(one: FixedBitSet, terminal_count: usize) -> Result<Self> {
        let mut other = FixedBitSet::with_capacity(terminal_count);
        other.insert_range(..);
        other.difference_with(&one);
        if one.count_ones(..) == 0 || other.count_ones(..) == 0 {
            return Err(structural!("bipartition with an empty side"));
        }
        if one.contains(0) {
            Ok(TerminalBipartition { side_a: one, side_b: other })
        } else {
            Ok(TerminalBipartition { side_a: other, side_b: one })
        }
    }

    pub fn from_indices(side: &[usize], terminal_count: usize) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(terminal_count);
        for &i in side {
            bits.insert(i);
        }
        Self::from_side(bits, terminal_count)
    }

    pub fn side(&self, side: Side) -> &FixedBitSet {
        match side {
            Side::A => &self.side_a,
            Side::B => &self.side_b,
        }
    }

    pub fn side_a(&self) -> &FixedBitSet {
        &self.side_a
    }

    pub fn side_b(&self) -> &FixedBitSet {
        &self.side_b
    }

    pub fn terminal_count(&self) -> usize {
        self.side_a.len()
    }

    pub fn side_of(&self, terminal: usize) -> Side {
        if self.side_a.contains(terminal) {
            Side::A
        } else {
            Side::B
        }
    }

    pub fn separates(&self, t1: usize, t2: usize) -> bool {
        self.side_a.contains(t1) != self.side_a.contains(t2)
    }

    fn key(&self) -> impl Iterator<Item = usize> + '_ {
        self.side_a.ones()
    }
}

impl Ord for TerminalBipartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(other.key())
    }
}

impl PartialOrd for TerminalBipartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub usize);

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// All minimum cuts inducing one terminal bipartition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutClass {
    pub id: ClassId,
    pub bipartition: TerminalBipartition,
    pub representatives: Vec<EdgeCut>,
}

impl CutClass {
    pub fn cardinality(&self) -> usize {
        self.representatives[0].len()
    }
}

/// Enumerates every minimum terminal-separating cut.
///
/// A minimum cut is the full edge set between its two sides, so it never
/// splits a bundle of parallel edges; the search runs over bundles.
pub fn enumerate_minimal_cuts(g: &Multigraph, t: &TerminalSet, budget: &Budget) -> Result<Vec<EdgeCut>> {
    if t.len() < 2 {
        return Err(Error::TooFewTerminals(t.len()));
    }
    budget.check_graph(g)?;
    let lambda = min_separating_cut_size(g, t)?;
    budget.check_cut_size(lambda)?;

    let mut bundles: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    for e in g.edge_ids() {
        let (a, b) = g.edge(e).ends;
        bundles.entry((a.min(b), a.max(b))).or_default().push(e);
    }
    let bundles: Vec<Vec<EdgeId>> = bundles.into_values().collect();
    // suffix sums bound how much cut size the remaining bundles can add
    let mut remaining = vec![0; bundles.len() + 1];
    for i in (0..bundles.len()).rev() {
        remaining[i] = remaining[i + 1] + bundles[i].len();
    }

    let mut found = Vec::new();
    let mut chosen = Vec::new();
    search_bundles(g, t, &bundles, &remaining, 0, lambda, &mut chosen, &mut found)?;
    found.sort();
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn search_bundles(
    g: &Multigraph,
    t: &TerminalSet,
    bundles: &[Vec<EdgeId>],
    remaining: &[usize],
    next: usize,
    need: usize,
    chosen: &mut Vec<EdgeId>,
    found: &mut Vec<EdgeCut>,
) -> Result<()> {
    if need == 0 {
        if let Some(cut) = accept_cut(g, t, chosen)? {
            found.push(cut);
        }
        return Ok(());
    }
    if next == bundles.len() || remaining[next] < need {
        return Ok(());
    }
    let bundle = &bundles[next];
    if bundle.len() <= need {
        chosen.extend_from_slice(bundle);
        search_bundles(g, t, bundles, remaining, next + 1, need - bundle.len(), chosen, found)?;
        chosen.truncate(chosen.len() - bundle.len());
    }
    search_bundles(g, t, bundles, remaining, next + 1, need, chosen, found)
}

fn accept_cut(g: &Multigraph, t: &TerminalSet, edges: &[EdgeId]) -> Result<Option<EdgeCut>> {
    let (labels, count) = g.component_labels(&g.edge_set(edges));
    let first = labels[t.vertex(0).0];
    let separating = t.vertices().iter().any(|v| labels[v.0] != first);
    if !separating {
        return Ok(None);
    }
    if count != 2 {
        let names: Vec<_> = edges.iter().map(|&e| g.edge_name(e)).collect();
        return Err(structural!("minimum cut {names:?} leaves {count} components"));
    }
    if edges.iter().any(|&e| {
        let (a, b) = g.edge(e).ends;
        labels[a.0] == labels[b.0]
    }) {
        return Ok(None);
    }
    Ok(Some(EdgeCut::new(edges.to_vec())))
}

/// The terminal bipartition induced by a minimum cut.
pub fn signature(g: &Multigraph, t: &TerminalSet, cut: &EdgeCut) -> Result<TerminalBipartition> {
    let (labels, count) = g.component_labels(&g.edge_set(cut.edges()));
    if count != 2 {
        return Err(structural!("cut {:?} leaves {count} components, expected 2", cut.names(g)));
    }
    let mut side = FixedBitSet::with_capacity(t.len());
    for (i, v) in t.vertices().iter().enumerate() {
        if labels[v.0] == 0 {
            side.insert(i);
        }
    }
    TerminalBipartition::from_side(side, t.len())
        .map_err(|_| structural!("cut {:?} does not separate terminals", cut.names(g)))
}

/// Groups cuts by signature. Class ids follow the sorted order of
/// bipartitions.
pub fn classify(cuts: &[EdgeCut], signatures: &[TerminalBipartition]) -> Vec<CutClass> {
    let mut groups: BTreeMap<&TerminalBipartition, Vec<EdgeCut>> = BTreeMap::new();
    for (cut, sig) in cuts.iter().zip(signatures) {
        groups.entry(sig).or_default().push(cut.clone());
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(i, (bipartition, mut representatives))| {
            representatives.sort();
            CutClass { id: ClassId(i), bipartition: bipartition.clone(), representatives }
        })
        .collect()
}

/// Enumeration, signatures and classification in one call.
pub fn cut_classes(g: &Multigraph, t: &TerminalSet, cuts: &[EdgeCut]) -> Result<Vec<CutClass>> {
    let signatures = cuts.iter().map(|c| signature(g, t, c)).collect::<Result<Vec<_>>>()?;
    Ok(classify(cuts, &signatures))
}
