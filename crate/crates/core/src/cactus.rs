//! Cactus assembly from the structure tree, and cactus-side queries.
//!
//! Each cyclic structure becomes a cycle on its beads. Every other isolated
//! class becomes a doubled edge between the stars on its two sides, or to a
//! fresh leaf when one side holds no further element. A star made of a
//! cyclic structure and one of its bead cuts is contracted onto the bead, as
//! is the star on the far side of that bead cut.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::crossing::CyclicStructure;
use crate::cuts::{CutClass, Side};
use crate::error::{structural, Error, Result};
use crate::pretree::{Attachment, ElementId, ElementKind, Pretree, StructureTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Bead,
    Star,
    Leaf,
}

impl VertexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VertexKind::Bead => "bead",
            VertexKind::Star => "star",
            VertexKind::Leaf => "leaf",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CactusEdge {
    pub ends: (usize, usize),
    /// The parallel partner of a doubled edge.
    pub twin: Option<usize>,
    /// The cycle a cycle edge belongs to.
    pub cycle: Option<usize>,
}

/// The cactus together with the terminal map and the class-to-cut map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CactusModel {
    pub vertices: Vec<VertexKind>,
    pub edges: Vec<CactusEdge>,
    /// Edge indices of each cycle, in circular order.
    pub cycles: Vec<Vec<usize>>,
    /// Vertex of each terminal. Empty for the single-vertex cactus.
    pub terminal_map: Vec<usize>,
    /// Edge pair of each class, smaller edge first.
    pub cut_map: Vec<(usize, usize)>,
}

impl CactusModel {
    pub fn single_vertex() -> Self {
        CactusModel {
            vertices: vec![VertexKind::Star],
            edges: Vec::new(),
            cycles: Vec::new(),
            terminal_map: Vec::new(),
            cut_map: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_ends(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| e.ends).collect()
    }

    /// Component label of each vertex once the given edges are removed.
    pub fn labels_without(&self, removed: &[usize]) -> Vec<usize> {
        component_labels(self.vertex_count(), &self.edge_ends(), removed).0
    }

    /// Vertices whose removal leaves the cactus connected.
    pub fn end_vertices(&self) -> Vec<usize> {
        let ends = self.edge_ends();
        (0..self.vertex_count())
            .filter(|&v| {
                if self.vertex_count() == 1 {
                    return true;
                }
                let kept: Vec<(usize, usize)> = ends.iter().copied().filter(|&(a, b)| a != v && b != v).collect();
                let (labels, _) = component_labels(self.vertex_count(), &kept, &[]);
                let mut others = (0..self.vertex_count()).filter(|&u| u != v).map(|u| labels[u]);
                let first = others.next();
                others.all(|l| Some(l) == first)
            })
            .collect()
    }

    /// Checks the structural contract: a cactus whose minimum cuts are
    /// exactly the images of the classes, a terminal map onto the end
    /// vertices, and agreement of separations in both directions.
    pub fn validate(&self, classes: &[CutClass]) -> Result<()> {
        if !is_cactus(self.vertex_count(), &self.edge_ends()) {
            return Err(structural!("assembled graph is not a cactus"));
        }
        if self.edges.iter().any(|e| e.twin.is_none() && e.cycle.is_none()) {
            return Err(structural!("undoubled bridge in the cactus"));
        }
        let min_cuts: BTreeSet<(usize, usize)> = cactus_min_cuts(self).into_iter().collect();
        let images: BTreeSet<(usize, usize)> = self.cut_map.iter().copied().collect();
        if images.len() != classes.len() || images != min_cuts {
            return Err(structural!(
                "{} classes map onto {} distinct pairs; the cactus has {} minimum cuts",
                classes.len(),
                images.len(),
                min_cuts.len()
            ));
        }
        if classes.is_empty() {
            return Ok(());
        }
        let hit: BTreeSet<usize> = self.terminal_map.iter().copied().collect();
        if let Some(v) = self.end_vertices().into_iter().find(|v| !hit.contains(v)) {
            return Err(structural!("end vertex {v} carries no terminal"));
        }
        for class in classes {
            let (x, y) = self.cut_map[class.id.0];
            let labels = self.labels_without(&[x, y]);
            for t1 in 0..self.terminal_map.len() {
                for t2 in t1 + 1..self.terminal_map.len() {
                    let in_graph = class.bipartition.separates(t1, t2);
                    let in_cactus = labels[self.terminal_map[t1]] != labels[self.terminal_map[t2]];
                    if in_graph != in_cactus {
                        return Err(structural!("terminals {t1} and {t2} disagree on class {}", class.id));
                    }
                }
            }
        }
        Ok(())
    }
}

fn component_labels(n: usize, edges: &[(usize, usize)], removed: &[usize]) -> (Vec<usize>, usize) {
    let mut adjacency = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if !removed.contains(&i) {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[v] {
                if label[w] == usize::MAX {
                    label[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Edge sets of the biconnected blocks of a multigraph.
pub fn blocks(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adjacency = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adjacency[a].push((i, b));
        adjacency[b].push((i, a));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // frames: (vertex, parent edge, next adjacency index)
        let mut frames: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (v, parent_edge, ref mut next)) = frames.last_mut() {
            if *next < adjacency[v].len() {
                let (e, w) = adjacency[v][*next];
                *next += 1;
                if Some(e) == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    stack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, Some(e), 0));
                } else if disc[w] < disc[v] {
                    stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let (Some(&(u, _, _)), Some(e)) = (frames.last(), parent_edge) {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(x) = stack.pop() {
                            block.push(x);
                            if x == e {
                                break;
                            }
                        }
                        block.sort();
                        out.push(block);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn block_vertex_count(edges: &[(usize, usize)], block: &[usize]) -> usize {
    block.iter().flat_map(|&e| [edges[e].0, edges[e].1]).collect::<BTreeSet<_>>().len()
}

/// Connected, and every block is a single edge or a simple cycle.
pub fn is_cactus(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 || component_labels(n, edges, &[]).1 != 1 {
        return false;
    }
    blocks(n, edges).iter().all(|b| b.len() == 1 || b.len() == block_vertex_count(edges, b))
}

/// All two-edge cuts: doubled bridges and pairs of edges on one cycle.
pub fn cactus_min_cuts(c: &CactusModel) -> Vec<(usize, usize)> {
    let ends = c.edge_ends();
    let mut pairs = Vec::new();
    for block in blocks(c.vertex_count(), &ends) {
        if block.len() >= 2 && block.len() == block_vertex_count(&ends, &block) {
            for (i, &x) in block.iter().enumerate() {
                for &y in &block[i + 1..] {
                    pairs.push((x.min(y), x.max(y)));
                }
            }
        }
    }
    pairs.sort();
    pairs
}

pub fn separated_in_cactus(c: &CactusModel, va: usize, vb: usize, pair: (usize, usize)) -> Result<bool> {
    let pair = (pair.0.min(pair.1), pair.0.max(pair.1));
    if !cactus_min_cuts(c).contains(&pair) {
        return Err(Error::UnknownPair);
    }
    let labels = c.labels_without(&[pair.0, pair.1]);
    Ok(labels[va] != labels[vb])
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn push(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }
}

/// Builds the cactus from the verified structure tree.
pub fn assemble_cactus(
    tree: &StructureTree,
    pretree: &Pretree,
    structures: &[CyclicStructure],
    classes: &[CutClass],
    terminal_count: usize,
) -> Result<CactusModel> {
    if classes.is_empty() {
        return Ok(CactusModel::single_vertex());
    }
    let mut kinds: Vec<VertexKind> = vec![VertexKind::Star; tree.stars.len()];
    let mut bead_base = Vec::with_capacity(structures.len());
    for s in structures {
        bead_base.push(kinds.len());
        kinds.extend(std::iter::repeat_n(VertexKind::Bead, s.bead_count()));
    }
    let mut uf = UnionFind((0..kinds.len()).collect());

    // class -> (structure index, bead) for absorbed bead cuts
    let mut bead_cut: HashMap<usize, (usize, usize)> = HashMap::new();
    for (si, s) in structures.iter().enumerate() {
        let m = s.bead_count();
        for member in s.members.iter().filter(|x| x.absorbed) {
            let (a, b) = member.gaps;
            let bead = if b == a + 1 { b } else if (a, b) == (0, m - 1) { 0 } else {
                return Err(structural!("absorbed class {} has non-adjacent gaps", member.class));
            };
            bead_cut.insert(member.class.0, (si, bead));
        }
    }
    let structure_index: HashMap<_, usize> = structures.iter().enumerate().map(|(i, s)| (s.id, i)).collect();

    let mut edges: Vec<CactusEdge> = Vec::new();
    let mut edge_nodes: Vec<(usize, usize)> = Vec::new();
    let mut cut_map = vec![None; classes.len()];
    // a node known to lie on a given side of each class
    let mut anchors: Vec<Option<(usize, Side)>> = vec![None; classes.len()];

    for element in pretree.elements() {
        let stars = tree.stars_of(element.id);
        match element.kind {
            ElementKind::Cyclic(sid) => {
                let si = structure_index[&sid];
                for &h in &stars {
                    let star = &tree.stars[h].elements;
                    let other = star.iter().find(|&&x| x != element.id);
                    let bead = match (star.len(), other.map(|&x| pretree.elements()[x.0].kind)) {
                        (2, Some(ElementKind::Isolated(c))) => match bead_cut.get(&c.0) {
                            Some(&(s2, bead)) if s2 == si => bead,
                            _ => return Err(structural!("star next to {sid} holds a class that is not its bead cut")),
                        },
                        _ => return Err(structural!("star next to {sid} does not have degree 2")),
                    };
                    uf.union(h, bead_base[si] + bead);
                }
            }
            ElementKind::Isolated(class) => {
                if let Some(&(si, bead)) = bead_cut.get(&class.0) {
                    if stars.len() > 2 {
                        return Err(structural!("bead cut {class} lies in {} stars", stars.len()));
                    }
                    for &h in &stars {
                        uf.union(h, bead_base[si] + bead);
                    }
                    continue;
                }
                let (near, far) = match stars[..] {
                    [h] => {
                        let leaf = uf.push();
                        kinds.push(VertexKind::Leaf);
                        // a lone class: both ends are leaves
                        if tree.stars[h].elements.len() == 1 {
                            kinds[h] = VertexKind::Leaf;
                        }
                        (h, leaf)
                    }
                    [h1, h2] => (h1, h2),
                    _ => return Err(structural!("class {class} lies in {} maximal stars", stars.len())),
                };
                let near_side = star_side(pretree, tree, near, element.id)?.unwrap_or(Side::A);
                anchors[class.0] = Some((near, near_side));
                let first = edges.len();
                for twin in [first + 1, first] {
                    edges.push(CactusEdge { ends: (0, 0), twin: Some(twin), cycle: None });
                    edge_nodes.push((near, far));
                }
                cut_map[class.0] = Some((first, first + 1));
            }
        }
    }

    let mut cycles = Vec::with_capacity(structures.len());
    for (si, s) in structures.iter().enumerate() {
        let m = s.bead_count();
        let first = edges.len();
        for gap in 0..m {
            edges.push(CactusEdge { ends: (0, 0), twin: None, cycle: Some(si) });
            edge_nodes.push((bead_base[si] + gap, bead_base[si] + (gap + 1) % m));
        }
        cycles.push((first..first + m).collect::<Vec<_>>());
        for member in &s.members {
            let (a, b) = member.gaps;
            cut_map[member.class.0] = Some((first + a, first + b));
            let arc = s.arc((a, b));
            let mut union = s.beads[arc[0]].clone();
            for &x in &arc[1..] {
                union.union_with(&s.beads[x]);
            }
            let bp = &classes[member.class.0].bipartition;
            let side = if &union == bp.side_a() {
                Side::A
            } else if &union == bp.side_b() {
                Side::B
            } else {
                return Err(structural!("arc of {} does not match the sides of {}", s.id, member.class));
            };
            anchors[member.class.0] = Some((bead_base[si] + arc[0], side));
        }
    }

    // contract node sets into vertices: beads first, then stars, then leaves
    let node_count = kinds.len();
    let mut vertex_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut vertex_of = vec![0; node_count];
    let star_count = tree.stars.len();
    let bead_end = bead_base.last().map_or(star_count, |&b| b + structures.last().map_or(0, |s| s.bead_count()));
    let order = (star_count..bead_end).chain(0..star_count).chain(bead_end..node_count);
    for node in order {
        let root = uf.find(node);
        let next = vertex_of_root.len();
        vertex_of[node] = *vertex_of_root.entry(root).or_insert(next);
    }
    let mut vertices = vec![VertexKind::Star; vertex_of_root.len()];
    for node in 0..node_count {
        let v = vertex_of[node];
        vertices[v] = match (vertices[v], kinds[node]) {
            (VertexKind::Bead, _) | (_, VertexKind::Bead) => VertexKind::Bead,
            (VertexKind::Leaf, _) | (_, VertexKind::Leaf) => VertexKind::Leaf,
            _ => VertexKind::Star,
        };
    }
    for (edge, &(a, b)) in edges.iter_mut().zip(&edge_nodes) {
        let (va, vb) = (vertex_of[a], vertex_of[b]);
        if va == vb {
            return Err(structural!("contraction turned an edge into a loop at vertex {va}"));
        }
        edge.ends = (va.min(vb), va.max(vb));
    }
    let cut_map: Vec<(usize, usize)> = cut_map
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| structural!("class c{i} has no image in the cactus")))
        .collect::<Result<_>>()?;

    let mut model = CactusModel { vertices, edges, cycles, terminal_map: Vec::new(), cut_map };
    model.terminal_map = terminal_positions(&model, classes, &anchors, &vertex_of, terminal_count)?;
    model.validate(classes)?;
    Ok(model)
}

/// Side of `class_element` that faces star `h`, or `None` when the star
/// holds nothing else.
fn star_side(pretree: &Pretree, tree: &StructureTree, h: usize, class_element: ElementId) -> Result<Option<Side>> {
    let Some(&other) = tree.stars[h].elements.iter().find(|&&x| x != class_element) else {
        return Ok(None);
    };
    match pretree.attachment(class_element, other) {
        Some(Attachment::Side(s)) => Ok(Some(s)),
        _ => Err(structural!("isolated element {class_element} has no side facing {other}")),
    }
}

fn terminal_positions(
    model: &CactusModel,
    classes: &[CutClass],
    anchors: &[Option<(usize, Side)>],
    vertex_of: &[usize],
    terminal_count: usize,
) -> Result<Vec<usize>> {
    // side of every vertex, per class
    let mut sides: Vec<Vec<Side>> = vec![Vec::with_capacity(classes.len()); model.vertex_count()];
    for class in classes {
        let (node, side) = anchors[class.id.0].ok_or_else(|| structural!("class {} has no anchor", class.id))?;
        let (x, y) = model.cut_map[class.id.0];
        let labels = model.labels_without(&[x, y]);
        let anchor_label = labels[vertex_of[node]];
        for (v, s) in sides.iter_mut().enumerate() {
            s.push(if labels[v] == anchor_label { side } else { side.opposite() });
        }
    }
    (0..terminal_count)
        .map(|t| {
            let want: Vec<Side> = classes.iter().map(|c| c.bipartition.side_of(t)).collect();
            let hits: Vec<usize> = (0..model.vertex_count()).filter(|&v| sides[v] == want).collect();
            match hits[..] {
                [v] => Ok(v),
                _ => Err(structural!("terminal {t} matches {} cactus vertices", hits.len())),
            }
        })
        .collect()
}

/// Pair counts between two vertices: (cycle edges, doubled edges).
fn pair_counts(c: &CactusModel) -> Vec<Vec<(u8, u8)>> {
    let n = c.vertex_count();
    let mut m = vec![vec![(0u8, 0u8); n]; n];
    for e in &c.edges {
        let (a, b) = e.ends;
        for (x, y) in [(a, b), (b, a)] {
            if e.cycle.is_some() {
                m[x][y].0 += 1;
            } else {
                m[x][y].1 += 1;
            }
        }
    }
    m
}

/// A kind-, cycle- and pairing-preserving vertex bijection from `c1` to
/// `c2`, if one exists.
pub fn cactus_isomorphic(c1: &CactusModel, c2: &CactusModel) -> Option<Vec<usize>> {
    cactus_isomorphic_with(c1, c2, &[])
}

/// Like [`cactus_isomorphic`], with some vertex images fixed in advance.
pub fn cactus_isomorphic_with(c1: &CactusModel, c2: &CactusModel, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    cactus_isomorphic_where(c1, c2, fixed, &|_| true)
}

/// Like [`cactus_isomorphic_with`], returning the first bijection that also
/// satisfies `accept`.
pub fn cactus_isomorphic_where(
    c1: &CactusModel,
    c2: &CactusModel,
    fixed: &[(usize, usize)],
    accept: &dyn Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    let n = c1.vertex_count();
    if n != c2.vertex_count() || c1.edges.len() != c2.edges.len() || c1.cycles.len() != c2.cycles.len() {
        return None;
    }
    let (m1, m2) = (pair_counts(c1), pair_counts(c2));
    let profile = |m: &Vec<Vec<(u8, u8)>>, kinds: &[VertexKind], v: usize| {
        let mut row: Vec<(u8, u8)> = m[v].iter().copied().filter(|&p| p != (0, 0)).collect();
        row.sort();
        (kinds[v], row)
    };
    let p1: Vec<_> = (0..n).map(|v| profile(&m1, &c1.vertices, v)).collect();
    let p2: Vec<_> = (0..n).map(|v| profile(&m2, &c2.vertices, v)).collect();

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &(a, b) in fixed {
        if a >= n || b >= n || p1[a] != p2[b] || (map[a] != usize::MAX && map[a] != b) || (used[b] && map[a] != b) {
            return None;
        }
        map[a] = b;
        used[b] = true;
    }
    for a in 0..n {
        for b in 0..n {
            if map[a] != usize::MAX && map[b] != usize::MAX && m1[a][b] != m2[map[a]][map[b]] {
                return None;
            }
        }
    }
    // visit vertices in BFS order so each new vertex has a mapped neighbour
    let mut order: Vec<usize> = (0..n).filter(|&v| map[v] != usize::MAX).collect();
    let mut seen: Vec<bool> = map.iter().map(|&x| x != usize::MAX).collect();
    let mut head = 0;
    loop {
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in 0..n {
                if !seen[w] && m1[v][w] != (0, 0) {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        match (0..n).find(|&v| !seen[v]) {
            Some(v) => {
                seen[v] = true;
                order.push(v);
            }
            None => break,
        }
    }
    let free: Vec<usize> = order.into_iter().filter(|&v| map[v] == usize::MAX).collect();
    let tables = Tables { m1: &m1, m2: &m2, p1: &p1, p2: &p2, accept };
    if extend(&free, 0, &mut map, &mut used, &tables) {
        Some(map)
    } else {
        None
    }
}

struct Tables<'a, P> {
    m1: &'a [Vec<(u8, u8)>],
    m2: &'a [Vec<(u8, u8)>],
    p1: &'a [P],
    p2: &'a [P],
    accept: &'a dyn Fn(&[usize]) -> bool,
}

fn extend<P: PartialEq>(free: &[usize], i: usize, map: &mut [usize], used: &mut [bool], tables: &Tables<'_, P>) -> bool {
    let Some(&a) = free.get(i) else { return (tables.accept)(map) };
    let n = map.len();
    for b in 0..n {
        if used[b] || tables.p1[a] != tables.p2[b] {
            continue;
        }
        let consistent = (0..n).all(|x| map[x] == usize::MAX || tables.m1[a][x] == tables.m2[b][map[x]]);
        if !consistent {
            continue;
        }
        map[a] = b;
        used[b] = true;
        if extend(free, i + 1, map, used, tables) {
            return true;
        }
        map[a] = usize::MAX;
        used[b] = false;
    }
    false
}

/// Whether `phi` carries `g1`'s images onto `g2`'s: `class_map[i]` is the
/// class of the second model corresponding to class `i` of the first. Edges
/// are compared by their mapped endpoints.
pub fn cut_maps_compatible(c1: &CactusModel, c2: &CactusModel, phi: &[usize], class_map: &[usize]) -> bool {
    let endpoints = |c: &CactusModel, (x, y): (usize, usize), map: &dyn Fn(usize) -> usize| {
        let mut pairs = [c.edges[x].ends, c.edges[y].ends].map(|(a, b)| {
            let (a, b) = (map(a), map(b));
            (a.min(b), a.max(b))
        });
        pairs.sort();
        pairs
    };
    class_map.iter().enumerate().all(|(i, &j)| {
        endpoints(c1, c1.cut_map[i], &|v| phi[v]) == endpoints(c2, c2.cut_map[j], &|v| v)
    })
}
