//! Cut systems on finite graphs: inseparable blocks, the thresholds N(k)
//! and M(k), essential cuts, and the reduction of both systems to the
//! terminal pipeline with one representative per qualifying block.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::cuts::{enumerate_minimal_cuts, Budget, EdgeCut, TerminalBipartition};
use crate::error::{structural, Error, Result};
use crate::graph::{EdgeId, Multigraph, TerminalSet, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ends,
    Global,
    Thin,
    Slim,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Ends, Mode::Global, Mode::Thin, Mode::Slim];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ends => "ends",
            Mode::Global => "global",
            Mode::Thin => "thin",
            Mode::Slim => "slim",
        }
    }

    pub fn from_name(name: &str) -> Option<Mode> {
        Mode::ALL.into_iter().find(|m| m.as_str() == name)
    }

    pub fn needs_k(self) -> bool {
        matches!(self, Mode::Thin | Mode::Slim)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Maximal inseparable vertex sets for cut size `n`, ordered by their
/// least vertex. `k` is set for the slim relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InseparabilityPartition {
    pub n: usize,
    pub k: Option<usize>,
    pub blocks: Vec<Vec<VertexId>>,
}

impl InseparabilityPartition {
    fn from_relation(vertex_count: usize, n: usize, k: Option<usize>, mut joined: impl FnMut(usize, usize) -> bool) -> Self {
        let mut blocks: Vec<Vec<VertexId>> = Vec::new();
        for v in 0..vertex_count {
            match blocks.iter_mut().find(|b| joined(b[0].0, v)) {
                Some(b) => b.push(VertexId(v)),
                None => blocks.push(vec![VertexId(v)]),
            }
        }
        InseparabilityPartition { n, k, blocks }
    }

    pub fn block_of(&self, v: VertexId) -> usize {
        self.blocks.iter().position(|b| b.contains(&v)).expect("every vertex lies in a block")
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Indices of the blocks with at least `k` vertices.
    pub fn qualifying(&self, k: usize) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&i| self.blocks[i].len() >= k).collect()
    }

    /// Least vertex of each qualifying block.
    pub fn representatives(&self, k: usize) -> TerminalSet {
        TerminalSet::new(self.qualifying(k).into_iter().map(|i| self.blocks[i][0]).collect())
    }
}

/// Blocks of the relation "no cut of size at most `n` separates u and v",
/// decided by pairwise edge connectivity.
pub fn inseparability_classes(g: &Multigraph, n: usize) -> InseparabilityPartition {
    InseparabilityPartition::from_relation(g.vertex_count(), n, None, |u, v| {
        g.edge_connectivity_capped(VertexId(u), VertexId(v), n.saturating_add(1)) > n
    })
}

fn max_pairwise_connectivity(g: &Multigraph) -> usize {
    let mut best = 0;
    for u in 0..g.vertex_count() {
        for v in u + 1..g.vertex_count() {
            best = best.max(g.edge_connectivity(VertexId(u), VertexId(v)));
        }
    }
    best
}

/// N(k): the least `n` with two blocks of at least `k` vertices, or `None`
/// when no such `n` exists.
pub fn thinness_threshold(g: &Multigraph, k: usize) -> Option<usize> {
    // beyond the largest pairwise connectivity every block is a singleton
    (0..=max_pairwise_connectivity(g)).find(|&n| inseparability_classes(g, n).qualifying(k).len() >= 2)
}

/// Calls `visit` on every `r`-subset of the edges, in lexicographic order.
fn for_each_subset(m: usize, r: usize, mut visit: impl FnMut(&[EdgeId]) -> Result<()>) -> Result<()> {
    if r > m {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let edges: Vec<EdgeId> = idx.iter().map(|&i| EdgeId(i)).collect();
        visit(&edges)?;
        let Some(pos) = (0..r).rev().find(|&i| idx[i] != i + m - r) else {
            return Ok(());
        };
        idx[pos] += 1;
        for j in pos + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn component_sizes(labels: &[usize], count: usize) -> Vec<usize> {
    let mut sizes = vec![0; count];
    for &l in labels {
        sizes[l] += 1;
    }
    sizes
}

/// Whether deleting `edges` leaves at least two components of at least `k`
/// vertices each.
pub fn is_nk_cut(g: &Multigraph, edges: &[EdgeId], k: usize) -> bool {
    let (labels, count) = g.component_labels(&g.edge_set(edges));
    component_sizes(&labels, count).into_iter().filter(|&s| s >= k).count() >= 2
}

/// All edge sets of exactly `n` edges that are (n,k)-cuts.
pub fn enumerate_nk_cuts(g: &Multigraph, n: usize, k: usize, budget: &Budget) -> Result<Vec<EdgeCut>> {
    budget.check_graph(g)?;
    budget.check_cut_size(n)?;
    let mut out = Vec::new();
    for_each_subset(g.edge_count(), n, |edges| {
        if is_nk_cut(g, edges, k) {
            out.push(EdgeCut::new(edges.to_vec()));
        }
        Ok(())
    })?;
    Ok(out)
}

/// Blocks of the relation "no (r,k)-cut with r at most `n` separates u and v".
pub fn slim_inseparability_classes(g: &Multigraph, n: usize, k: usize, budget: &Budget) -> Result<InseparabilityPartition> {
    budget.check_graph(g)?;
    budget.check_cut_size(n)?;
    let separations = slim_separations(g, n.min(g.edge_count()), k)?;
    Ok(slim_partition(g, n, k, &separations[..=n.min(g.edge_count())]))
}

/// For each r, the vertex labelings of every (r,k)-cut.
fn slim_separations(g: &Multigraph, max_r: usize, k: usize) -> Result<Vec<Vec<Vec<usize>>>> {
    (0..=max_r)
        .map(|r| {
            let mut found = Vec::new();
            for_each_subset(g.edge_count(), r, |edges| {
                let (labels, count) = g.component_labels(&g.edge_set(edges));
                if component_sizes(&labels, count).into_iter().filter(|&s| s >= k).count() >= 2 {
                    found.push(labels);
                }
                Ok(())
            })?;
            Ok(found)
        })
        .collect()
}

fn slim_partition(g: &Multigraph, n: usize, k: usize, separations: &[Vec<Vec<usize>>]) -> InseparabilityPartition {
    InseparabilityPartition::from_relation(g.vertex_count(), n, Some(k), |u, v| {
        separations.iter().flatten().all(|labels| labels[u] == labels[v])
    })
}

/// M(k) and its blocks, or `None` when no cut size yields two blocks of at
/// least `k` vertices. The scan covers every size up to the edge count.
pub fn slimness_threshold(g: &Multigraph, k: usize, budget: &Budget) -> Result<Option<InseparabilityPartition>> {
    budget.check_graph(g)?;
    let separations = slim_separations(g, g.edge_count(), k)?;
    for n in 0..=g.edge_count() {
        let p = slim_partition(g, n, k, &separations[..=n]);
        if p.qualifying(k).len() >= 2 {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Edge sets of size `partition.n` that put two qualifying blocks into
/// different components, with every edge joining two components. For the
/// slim relation the set must also be an (n,k)-cut.
pub fn essential_cuts(g: &Multigraph, partition: &InseparabilityPartition, k: usize, budget: &Budget) -> Result<Vec<EdgeCut>> {
    budget.check_graph(g)?;
    budget.check_cut_size(partition.n)?;
    let reps = partition.representatives(k);
    let mut out = Vec::new();
    for_each_subset(g.edge_count(), partition.n, |edges| {
        let (labels, count) = g.component_labels(&g.edge_set(edges));
        let first = labels[reps.vertex(0).0];
        if reps.vertices().iter().all(|v| labels[v.0] == first) {
            return Ok(());
        }
        if edges.iter().any(|&e| {
            let (a, b) = g.edge(e).ends;
            labels[a.0] == labels[b.0]
        }) {
            return Ok(());
        }
        if partition.k.is_some() && component_sizes(&labels, count).into_iter().filter(|&s| s >= k).count() < 2 {
            return Ok(());
        }
        out.push(EdgeCut::new(edges.to_vec()));
        Ok(())
    })?;
    Ok(out)
}

/// Bipartition of representatives induced by an essential cut. The
/// representatives must fall into exactly two components.
pub fn block_signature(g: &Multigraph, reps: &TerminalSet, cut: &EdgeCut) -> Result<TerminalBipartition> {
    let (labels, _) = g.component_labels(&g.edge_set(cut.edges()));
    let mut groups: Vec<usize> = reps.vertices().iter().map(|v| labels[v.0]).collect();
    let first = groups[0];
    let mut side = FixedBitSet::with_capacity(reps.len());
    for (i, &l) in groups.iter().enumerate() {
        if l == first {
            side.insert(i);
        }
    }
    groups.sort();
    groups.dedup();
    if groups.len() != 2 {
        return Err(structural!(
            "cut {:?} spreads the blocks over {} components",
            cut.names(g),
            groups.len()
        ));
    }
    TerminalBipartition::from_side(side, reps.len())
}

/// Threshold, blocks and representative terminals for a §4 cut system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSystemConfig {
    pub mode: Mode,
    pub k: usize,
    pub threshold: usize,
    pub partition: InseparabilityPartition,
    pub terminals: TerminalSet,
}

pub fn resolve_config(g: &Multigraph, mode: Mode, k: Option<usize>, budget: &Budget) -> Result<CutSystemConfig> {
    let k = match (mode, k) {
        (Mode::Global, _) => 1,
        (Mode::Thin | Mode::Slim, Some(k)) if k >= 1 => k,
        (Mode::Thin | Mode::Slim, _) => return Err(Error::Infeasible(format!("mode {mode} needs k >= 1"))),
        (Mode::Ends, _) => return Err(Error::Infeasible("end mode has no block threshold".into())),
    };
    let partition = match mode {
        Mode::Slim => slimness_threshold(g, k, budget)?.ok_or(Error::ThresholdAbsent(k))?,
        _ => {
            let n = thinness_threshold(g, k).ok_or(Error::ThresholdAbsent(k))?;
            inseparability_classes(g, n)
        }
    };
    let terminals = partition.representatives(k);
    if terminals.len() < 2 {
        return Err(Error::TooFewTerminals(terminals.len()));
    }
    Ok(CutSystemConfig { mode, k, threshold: partition.n, partition, terminals })
}

/// The essential cuts of a resolved cut system. Thin systems go through
/// the terminal enumeration on the representatives; slim systems use the
/// definition directly.
pub fn system_cuts(g: &Multigraph, config: &CutSystemConfig, budget: &Budget) -> Result<Vec<EdgeCut>> {
    match config.mode {
        Mode::Slim => essential_cuts(g, &config.partition, config.k, budget),
        _ => enumerate_minimal_cuts(g, &config.terminals, budget),
    }
}
