//! Crossing cut classes and the circular bead structures they form.
//!
//! Two classes cross when all four intersections of their sides are
//! nonempty. Crossing-connected classes arrange the terminals into a circle
//! of beads, with every class cutting the circle at two gaps.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::cuts::{ClassId, CutClass, EdgeCut, Side, TerminalBipartition};
use crate::error::{structural, Result};
use crate::graph::{EdgeId, Multigraph, TerminalSet, VertexId};

/// Result of comparing two distinct classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Crossing,
    /// `a.side(inner)` is contained in `b.side(outer)`.
    Nested { inner: Side, outer: Side },
}

pub fn relation(a: &TerminalBipartition, b: &TerminalBipartition) -> Relation {
    for inner in [Side::A, Side::B] {
        for outer in [Side::A, Side::B] {
            if a.side(inner).is_subset(b.side(outer)) {
                return Relation::Nested { inner, outer };
            }
        }
    }
    Relation::Crossing
}

pub fn crosses(a: &CutClass, b: &CutClass) -> Relation {
    relation(&a.bipartition, &b.bipartition)
}

pub fn is_crossing(a: &TerminalBipartition, b: &TerminalBipartition) -> bool {
    relation(a, b) == Relation::Crossing
}

/// All crossing pairs `(a, b)` with `a < b`.
pub fn crossing_pairs(classes: &[CutClass]) -> Vec<(ClassId, ClassId)> {
    let mut pairs = Vec::new();
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if is_crossing(&a.bipartition, &b.bipartition) {
                pairs.push((a.id, b.id));
            }
        }
    }
    pairs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadrant {
    pub vertices: Vec<VertexId>,
    pub terminals: Vec<usize>,
    /// Number of edges of `K ∪ L` incident to the quadrant.
    pub boundary: usize,
}

/// Shape of `G - (K ∪ L)` for two crossing minimum cuts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingReport {
    /// `|K| = 2 * half`.
    pub half: usize,
    pub disjoint: bool,
    pub quadrants: Vec<Quadrant>,
    /// Edges of `K` inside each component of `G - L`.
    pub k_per_side: [usize; 2],
    /// Edges of `L` inside each component of `G - K`.
    pub l_per_side: [usize; 2],
}

fn side_labels(g: &Multigraph, cut: &EdgeCut) -> Result<Vec<usize>> {
    let (labels, count) = g.component_labels(&g.edge_set(cut.edges()));
    if count != 2 {
        return Err(structural!("cut {:?} leaves {count} components", cut.names(g)));
    }
    Ok(labels)
}

fn per_side(g: &Multigraph, edges: &[EdgeId], labels: &[usize]) -> Result<[usize; 2]> {
    let mut counts = [0; 2];
    for &e in edges {
        let (a, b) = g.edge(e).ends;
        if labels[a.0] != labels[b.0] {
            return Err(structural!("edge {} joins both sides of the other cut", g.edge_name(e)));
        }
        counts[labels[a.0]] += 1;
    }
    Ok(counts)
}

/// Checks the structure forced on two crossing minimum cuts: even size,
/// disjointness, four quadrants each holding a terminal, and each cut split
/// evenly by the other. Any failed clause is an error.
pub fn check_crossing_structure(g: &Multigraph, t: &TerminalSet, k: &EdgeCut, l: &EdgeCut) -> Result<CrossingReport> {
    let k_labels = side_labels(g, k)?;
    let l_labels = side_labels(g, l)?;
    let mut quadrant_terminals = [[false; 2]; 2];
    for v in t.vertices() {
        quadrant_terminals[k_labels[v.0]][l_labels[v.0]] = true;
    }
    if quadrant_terminals.iter().flatten().any(|q| !q) {
        return Err(structural!("cuts {:?} and {:?} do not cross", k.names(g), l.names(g)));
    }
    if !k.len().is_multiple_of(2) || k.len() != l.len() {
        return Err(structural!("crossing cuts of sizes {} and {}", k.len(), l.len()));
    }
    let half = k.len() / 2;
    let disjoint = k.edges().iter().all(|&e| !l.contains(e));
    if !disjoint {
        return Err(structural!("crossing cuts {:?} and {:?} share edges", k.names(g), l.names(g)));
    }

    let union: Vec<EdgeId> = k.edges().iter().chain(l.edges()).copied().collect();
    let (labels, count) = g.component_labels(&g.edge_set(&union));
    if count != 4 {
        return Err(structural!("removing both cuts leaves {count} components, expected 4"));
    }
    let mut quadrants = vec![Quadrant { vertices: Vec::new(), terminals: Vec::new(), boundary: 0 }; count];
    for v in g.vertices() {
        quadrants[labels[v.0]].vertices.push(v);
    }
    for (i, v) in t.vertices().iter().enumerate() {
        quadrants[labels[v.0]].terminals.push(i);
    }
    for &e in &union {
        let (a, b) = g.edge(e).ends;
        quadrants[labels[a.0]].boundary += 1;
        quadrants[labels[b.0]].boundary += 1;
    }
    if let Some(q) = quadrants.iter().find(|q| q.terminals.is_empty()) {
        return Err(structural!("quadrant {:?} holds no terminal", q.vertices));
    }

    let k_per_side = per_side(g, k.edges(), &l_labels)?;
    let l_per_side = per_side(g, l.edges(), &k_labels)?;
    if k_per_side != [half, half] || l_per_side != [half, half] {
        return Err(structural!("uneven split {k_per_side:?} / {l_per_side:?}, expected {half} per side"));
    }
    Ok(CrossingReport { half, disjoint, quadrants, k_per_side, l_per_side })
}

/// Connected components of the crossing graph on classes, ordered by their
/// smallest class. Singletons are the isolated classes.
pub fn crossing_components(classes: &[CutClass]) -> Vec<Vec<ClassId>> {
    let n = classes.len();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut component = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if !seen[j] && is_crossing(&classes[i].bipartition, &classes[j].bipartition) {
                    seen[j] = true;
                    component.push(j);
                    queue.push_back(j);
                }
            }
        }
        component.sort();
        components.push(component.into_iter().map(|i| classes[i].id).collect());
    }
    components
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StructureId(pub usize);

impl fmt::Display for StructureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub class: ClassId,
    /// Gap `i` sits between bead `i` and bead `i + 1` (mod bead count).
    pub gaps: (usize, usize),
    /// Set for single-bead classes taken over from the isolated ones.
    pub absorbed: bool,
}

/// A maximal family of crossing-connected classes laid out on a circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicStructure {
    pub id: StructureId,
    /// Terminal blocks in circular order.
    pub beads: Vec<FixedBitSet>,
    /// Sorted by class.
    pub members: Vec<Member>,
}

impl CyclicStructure {
    pub fn bead_count(&self) -> usize {
        self.beads.len()
    }

    pub fn bead_of(&self, terminal: usize) -> Option<usize> {
        self.beads.iter().position(|b| b.contains(terminal))
    }

    /// The gap pair cutting `side` off as an arc of beads, if it is one.
    pub fn gap_pair(&self, side: &FixedBitSet) -> Option<(usize, usize)> {
        arc_gaps(&self.beads, side)
    }

    pub fn member(&self, class: ClassId) -> Option<&Member> {
        self.members.iter().find(|m| m.class == class)
    }

    pub fn classes(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.members.iter().map(|m| m.class)
    }

    /// Beads strictly inside the arc `gaps.0 + 1 ..= gaps.1`.
    pub fn arc(&self, gaps: (usize, usize)) -> Vec<usize> {
        let m = self.bead_count();
        let mut out = Vec::new();
        let mut b = (gaps.0 + 1) % m;
        loop {
            out.push(b);
            if b == gaps.1 {
                break;
            }
            b = (b + 1) % m;
        }
        out
    }

    /// Every gap pair is realised by exactly one member.
    pub fn is_complete(&self) -> bool {
        let m = self.bead_count();
        let pairs: BTreeSet<_> = self.members.iter().map(|x| x.gaps).collect();
        pairs.len() == self.members.len() && self.members.len() == m * (m - 1) / 2
    }
}

fn arc_gaps(beads: &[FixedBitSet], side: &FixedBitSet) -> Option<(usize, usize)> {
    let m = beads.len();
    let mut inside = Vec::with_capacity(m);
    for b in beads {
        if b.is_subset(side) {
            inside.push(true);
        } else if b.is_disjoint(side) {
            inside.push(false);
        } else {
            return None;
        }
    }
    let starts: Vec<usize> = (0..m).filter(|&i| inside[i] && !inside[(i + m - 1) % m]).collect();
    let ends: Vec<usize> = (0..m).filter(|&i| inside[i] && !inside[(i + 1) % m]).collect();
    if starts.len() != 1 || ends.len() != 1 {
        return None;
    }
    let before = (starts[0] + m - 1) % m;
    Some((before.min(ends[0]), before.max(ends[0])))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fit {
    In,
    Out,
    Mixed,
}

/// Refines the circular block sequence so that `side` becomes an arc, if
/// that can be done by splitting the two blocks at the ends of the arc.
fn refine(seq: &[FixedBitSet], side: &FixedBitSet) -> Option<Vec<FixedBitSet>> {
    let n = seq.len();
    let fit: Vec<Fit> = seq
        .iter()
        .map(|b| {
            if b.is_subset(side) {
                Fit::In
            } else if b.is_disjoint(side) {
                Fit::Out
            } else {
                Fit::Mixed
            }
        })
        .collect();
    if fit.iter().all(|f| *f != Fit::Out) {
        return None;
    }
    // rotate so the run of touched blocks starts right after an Out block
    let start = (0..n).find(|&i| fit[i] != Fit::Out && fit[(i + n - 1) % n] == Fit::Out)?;
    let run: Vec<usize> = (0..n).map(|j| (start + j) % n).take_while(|&i| fit[i] != Fit::Out).collect();
    if (0..n).filter(|i| fit[*i] != Fit::Out).count() != run.len() {
        return None;
    }
    let last = run.len() - 1;
    if run.len() == 1 && fit[run[0]] == Fit::Mixed {
        return None;
    }
    if run.len() > 2 && run[1..last].iter().any(|&i| fit[i] == Fit::Mixed) {
        return None;
    }
    let mut out = Vec::with_capacity(n + 2);
    for j in 0..n {
        let i = (start + j) % n;
        let block = &seq[i];
        if fit[i] == Fit::Mixed {
            let mut inner = block.clone();
            inner.intersect_with(side);
            let mut outer = block.clone();
            outer.difference_with(side);
            if j == 0 {
                out.push(outer);
                out.push(inner);
            } else {
                out.push(inner);
                out.push(outer);
            }
        } else {
            out.push(block.clone());
        }
    }
    Some(out)
}

fn complement(side: &FixedBitSet) -> FixedBitSet {
    let mut c = FixedBitSet::with_capacity(side.len());
    c.insert_range(..);
    c.difference_with(side);
    c
}

/// Lexicographically least rotation or reflection, keyed on each bead's
/// smallest terminal.
fn canonical_order(beads: Vec<FixedBitSet>) -> Vec<FixedBitSet> {
    let m = beads.len();
    let keys: Vec<usize> = beads.iter().map(|b| b.minimum().expect("beads are nonempty")).collect();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for start in 0..m {
        for reflect in [false, true] {
            let order: Vec<usize> = (0..m)
                .map(|j| if reflect { (start + m - j) % m } else { (start + j) % m })
                .collect();
            let key: Vec<usize> = order.iter().map(|&i| keys[i]).collect();
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, order));
            }
        }
    }
    let (_, order) = best.expect("at least one bead");
    order.into_iter().map(|i| beads[i].clone()).collect()
}

/// Beyond this many atoms the exhaustive fallback refuses to run.
const MAX_FALLBACK_ATOMS: usize = 10;

fn atoms(sides: &[&FixedBitSet], terminal_count: usize) -> Vec<FixedBitSet> {
    let mut groups: Vec<(Vec<bool>, FixedBitSet)> = Vec::new();
    for t in 0..terminal_count {
        let pattern: Vec<bool> = sides.iter().map(|s| s.contains(t)).collect();
        match groups.iter_mut().find(|(p, _)| *p == pattern) {
            Some((_, bits)) => bits.insert(t),
            None => {
                let mut bits = FixedBitSet::with_capacity(terminal_count);
                bits.insert(t);
                groups.push((pattern, bits));
            }
        }
    }
    groups.into_iter().map(|(_, b)| b).collect()
}

fn exhaustive_order(sides: &[&FixedBitSet], terminal_count: usize) -> Result<Vec<FixedBitSet>> {
    let atoms = atoms(sides, terminal_count);
    if atoms.len() > MAX_FALLBACK_ATOMS {
        return Err(structural!("{} atoms exceed the exhaustive ordering limit", atoms.len()));
    }
    let mut rest: Vec<usize> = (1..atoms.len()).collect();
    let mut found = None;
    permute(&mut rest, 0, &mut |perm| {
        let order: Vec<FixedBitSet> =
            std::iter::once(0).chain(perm.iter().copied()).map(|i| atoms[i].clone()).collect();
        if sides.iter().all(|s| arc_gaps(&order, s).is_some()) {
            found = Some(order);
            true
        } else {
            false
        }
    });
    found.ok_or_else(|| structural!("no circular order makes every member an arc"))
}

fn permute(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permute(items, k + 1, visit) {
            return true;
        }
        items.swap(k, i);
    }
    false
}

/// Lays out a crossing component on a circle of beads.
///
/// Starts from the four quadrants of one crossing pair and inserts the other
/// classes in breadth-first crossing order, refining the two blocks at the
/// ends of each new arc. Falls back to trying every circular order of the
/// atoms when a refinement step is ambiguous.
pub fn build_cyclic_structure(id: StructureId, component: &[&CutClass]) -> Result<CyclicStructure> {
    if component.len() < 2 {
        return Err(structural!("cyclic structure needs at least two crossing classes"));
    }
    let terminal_count = component[0].bipartition.terminal_count();
    let order = bfs_crossing_order(component)?;
    let first = &component[order[0]].bipartition;
    let second = &component[order[1]].bipartition;

    let quadrant = |x: &FixedBitSet, y: &FixedBitSet| {
        let mut q = x.clone();
        q.intersect_with(y);
        q
    };
    let mut seq = vec![
        quadrant(first.side_a(), second.side_a()),
        quadrant(first.side_a(), second.side_b()),
        quadrant(first.side_b(), second.side_b()),
        quadrant(first.side_b(), second.side_a()),
    ];
    let mut refined = true;
    for &i in &order[2..] {
        let side = component[i].bipartition.side_a();
        match refine(&seq, side).or_else(|| refine(&seq, &complement(side))) {
            Some(next) => seq = next,
            None => {
                refined = false;
                break;
            }
        }
    }
    let sides: Vec<&FixedBitSet> = component.iter().map(|c| c.bipartition.side_a()).collect();
    if !refined || sides.iter().any(|s| arc_gaps(&seq, s).is_none()) {
        seq = exhaustive_order(&sides, terminal_count)?;
    }
    if seq.len() < 4 {
        return Err(structural!("crossing classes produced only {} beads", seq.len()));
    }

    let beads = canonical_order(seq);
    let mut members = Vec::with_capacity(component.len());
    for class in component {
        let gaps = arc_gaps(&beads, class.bipartition.side_a())
            .ok_or_else(|| structural!("class {} is not an arc of its structure", class.id))?;
        members.push(Member { class: class.id, gaps, absorbed: false });
    }
    members.sort_by_key(|m| m.class);
    let distinct: BTreeSet<_> = members.iter().map(|m| m.gaps).collect();
    if distinct.len() != members.len() {
        return Err(structural!("two classes of structure {id} share a gap pair"));
    }
    Ok(CyclicStructure { id, beads, members })
}

fn bfs_crossing_order(component: &[&CutClass]) -> Result<Vec<usize>> {
    let n = component.len();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut order = vec![0];
    let mut head = 0;
    while head < order.len() {
        let i = order[head];
        head += 1;
        for j in 0..n {
            if !seen[j] && is_crossing(&component[i].bipartition, &component[j].bipartition) {
                seen[j] = true;
                order.push(j);
            }
        }
    }
    if order.len() != n {
        return Err(structural!("classes passed as one component are not crossing-connected"));
    }
    Ok(order)
}

/// Takes over isolated classes that cut off exactly one bead. Returns the
/// updated structure and the classes left isolated.
pub fn absorb_bead_cuts(s: &CyclicStructure, isolated: &[&CutClass]) -> Result<(CyclicStructure, Vec<ClassId>)> {
    let m = s.bead_count();
    let mut out = s.clone();
    let mut remaining = Vec::new();
    let mut taken = vec![None; m];
    for class in isolated {
        if s.member(class.id).is_some() {
            return Err(structural!("class {} is already a member of {}", class.id, s.id));
        }
        let bead = s.beads.iter().position(|b| {
            b == class.bipartition.side_a() || b == class.bipartition.side_b()
        });
        match bead {
            Some(b) => {
                if let Some(other) = taken[b] {
                    return Err(structural!("classes {other} and {} both cut off bead {b} of {}", class.id, s.id));
                }
                taken[b] = Some(class.id);
                let before = (b + m - 1) % m;
                out.members.push(Member { class: class.id, gaps: (before.min(b), before.max(b)), absorbed: true });
            }
            None => remaining.push(class.id),
        }
    }
    out.members.sort_by_key(|m| m.class);
    Ok((out, remaining))
}

/// Builds every cyclic structure and absorbs the bead cuts into them.
/// Returns the structures and the isolated (non-crossing) classes.
pub fn build_structures(classes: &[CutClass]) -> Result<(Vec<CyclicStructure>, Vec<ClassId>)> {
    let components = crossing_components(classes);
    let mut isolated = Vec::new();
    let mut structures = Vec::new();
    for component in &components {
        if component.len() == 1 {
            isolated.push(component[0]);
        } else {
            let members: Vec<&CutClass> = component.iter().map(|c| &classes[c.0]).collect();
            structures.push(build_cyclic_structure(StructureId(structures.len()), &members)?);
        }
    }
    let isolated_classes: Vec<&CutClass> = isolated.iter().map(|c| &classes[c.0]).collect();
    let mut absorbed_by: Vec<Option<StructureId>> = vec![None; classes.len()];
    for s in &mut structures {
        let (next, _) = absorb_bead_cuts(s, &isolated_classes)?;
        for m in next.members.iter().filter(|m| m.absorbed) {
            if let Some(prev) = absorbed_by[m.class.0].replace(s.id) {
                return Err(structural!("class {} absorbed by both {prev} and {}", m.class, s.id));
            }
        }
        *s = next;
    }
    Ok((structures, isolated))
}
