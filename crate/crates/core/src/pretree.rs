//! The pretree of isolated classes and cyclic structures, and its
//! completion to a tree by adding one vertex per maximal star.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::crossing::{CyclicStructure, StructureId};
use crate::cuts::{ClassId, CutClass, Side, TerminalBipartition};
use crate::error::{structural, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Isolated(ClassId),
    Cyclic(StructureId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    Isolated(TerminalBipartition),
    Cyclic(Vec<FixedBitSet>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PretreeElement {
    pub id: ElementId,
    pub kind: ElementKind,
    shape: Shape,
    /// Bipartitions of the classes the element stands for; for a cyclic
    /// element only its crossing members, since bead cuts are elements of
    /// their own.
    classes: Vec<TerminalBipartition>,
}

/// Where an element sits relative to a base element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attachment {
    Bead(usize),
    Side(Side),
}

/// Pretree elements: every class that crosses nothing (bead cuts included),
/// then every cyclic structure.
pub fn elements(classes: &[CutClass], structures: &[CyclicStructure]) -> Vec<PretreeElement> {
    let mut in_structure = vec![false; classes.len()];
    for s in structures {
        for m in s.members.iter().filter(|m| !m.absorbed) {
            in_structure[m.class.0] = true;
        }
    }
    let isolated = classes.iter().filter(|c| !in_structure[c.id.0]).map(|c| {
        (ElementKind::Isolated(c.id), Shape::Isolated(c.bipartition.clone()), vec![c.bipartition.clone()])
    });
    let cyclic = structures.iter().map(|s| {
        let member_classes =
            s.members.iter().filter(|m| !m.absorbed).map(|m| classes[m.class.0].bipartition.clone()).collect();
        (ElementKind::Cyclic(s.id), Shape::Cyclic(s.beads.clone()), member_classes)
    });
    isolated
        .chain(cyclic)
        .enumerate()
        .map(|(i, (kind, shape, classes))| PretreeElement { id: ElementId(i), kind, shape, classes })
        .collect()
}

/// The bead or side of `base` that holds one side of every class of `other`.
pub fn attach(base: &PretreeElement, other: &PretreeElement) -> Result<Attachment> {
    if base.id == other.id {
        return Err(structural!("element {} attached to itself", base.id));
    }
    let mut found: Option<Attachment> = None;
    for class in &other.classes {
        let here = match &base.shape {
            Shape::Cyclic(beads) => {
                let hits: Vec<usize> = (0..beads.len())
                    .filter(|&i| class.side_a().is_subset(&beads[i]) || class.side_b().is_subset(&beads[i]))
                    .collect();
                match hits[..] {
                    [i] => Attachment::Bead(i),
                    _ => return Err(structural!("{} does not sit inside one bead of {}", other.id, base.id)),
                }
            }
            Shape::Isolated(sides) => {
                let hits: Vec<Side> = [Side::A, Side::B]
                    .into_iter()
                    .filter(|&s| class.side_a().is_subset(sides.side(s)) || class.side_b().is_subset(sides.side(s)))
                    .collect();
                match hits[..] {
                    [s] => Attachment::Side(s),
                    _ => return Err(structural!("{} does not sit on one side of {}", other.id, base.id)),
                }
            }
        };
        match found {
            None => found = Some(here),
            Some(prev) if prev != here => {
                return Err(structural!("classes of {} attach to {} inconsistently", other.id, base.id))
            }
            _ => {}
        }
    }
    found.ok_or_else(|| structural!("element {} stands for no class", other.id))
}

/// Whether `middle` lies between `a` and `b`.
pub fn between(middle: &PretreeElement, a: &PretreeElement, b: &PretreeElement) -> Result<bool> {
    if middle.id == a.id || middle.id == b.id || a.id == b.id {
        return Ok(false);
    }
    Ok(attach(middle, a)? != attach(middle, b)?)
}

/// Betweenness of two classes by nested sides: `middle` lies between `a`
/// and `b` when some orientation gives `a ⊆ middle ⊆ b` side-wise.
pub fn class_between(middle: &TerminalBipartition, a: &TerminalBipartition, b: &TerminalBipartition) -> bool {
    if middle == a || middle == b || a == b {
        return false;
    }
    [Side::A, Side::B].into_iter().any(|ma| {
        [Side::A, Side::B].into_iter().any(|sa| {
            [Side::A, Side::B].into_iter().any(|sb| {
                a.side(sa).is_subset(middle.side(ma)) && middle.side(ma).is_subset(b.side(sb))
            })
        })
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomCounts {
    pub triples: usize,
    pub quadruples: usize,
}

#[derive(Clone, Debug)]
pub struct Pretree {
    elements: Vec<PretreeElement>,
    /// `attachments[base * n + other]`
    attachments: Vec<Option<Attachment>>,
}

impl Pretree {
    pub fn elements(&self) -> &[PretreeElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn attachment(&self, base: ElementId, other: ElementId) -> Option<Attachment> {
        self.attachments[base.0 * self.len() + other.0]
    }

    pub fn between(&self, middle: ElementId, a: ElementId, b: ElementId) -> bool {
        if middle == a || middle == b || a == b {
            return false;
        }
        self.attachment(middle, a) != self.attachment(middle, b)
    }

    pub fn adjacent(&self, a: ElementId, b: ElementId) -> bool {
        a != b && (0..self.len()).all(|z| !self.between(ElementId(z), a, b))
    }

    /// Triples `(a, middle, b)` with `middle` between `a` and `b`, `a < b`.
    pub fn betweenness(&self) -> Vec<(ElementId, ElementId, ElementId)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for m in 0..n {
                    if self.between(ElementId(m), ElementId(a), ElementId(b)) {
                        out.push((ElementId(a), ElementId(m), ElementId(b)));
                    }
                }
            }
        }
        out
    }

    /// Exhaustively checks the four pretree axioms. Writing `xyz` for "y is
    /// between x and z":
    /// 1. no `xyx`; 2. `xzy` iff `yzx`; 3. `xyz` excludes `xzy`;
    /// 4. `xzy` and `w != z` give `xzw` or `yzw`.
    pub fn verify_axioms(&self) -> Result<AxiomCounts> {
        let n = self.len();
        let bt = |x: usize, y: usize, z: usize| self.between(ElementId(y), ElementId(x), ElementId(z));
        let mut counts = AxiomCounts::default();
        for x in 0..n {
            for y in 0..n {
                if bt(x, y, x) {
                    return Err(structural!("axiom 1 fails: p{y} between p{x} and itself"));
                }
                for z in 0..n {
                    counts.triples += 1;
                    if bt(x, z, y) != bt(y, z, x) {
                        return Err(structural!("axiom 2 fails on (p{x}, p{z}, p{y})"));
                    }
                    if bt(x, y, z) && bt(x, z, y) {
                        return Err(structural!("axiom 3 fails on (p{x}, p{y}, p{z})"));
                    }
                }
            }
        }
        for x in 0..n {
            for z in 0..n {
                for y in 0..n {
                    if !bt(x, z, y) {
                        counts.quadruples += n;
                        continue;
                    }
                    for w in 0..n {
                        counts.quadruples += 1;
                        if w != z && !bt(x, z, w) && !bt(y, z, w) {
                            return Err(structural!("axiom 4 fails on (p{x}, p{z}, p{y}) with p{w}"));
                        }
                    }
                }
            }
        }
        Ok(counts)
    }
}

/// Computes all attachments. Axioms are verified in debug builds.
pub fn build_pretree(elements: Vec<PretreeElement>) -> Result<Pretree> {
    let n = elements.len();
    let mut attachments = vec![None; n * n];
    for base in &elements {
        for other in &elements {
            if base.id != other.id {
                attachments[base.id.0 * n + other.id.0] = Some(attach(base, other)?);
            }
        }
    }
    let pretree = Pretree { elements, attachments };
    if cfg!(debug_assertions) {
        pretree.verify_axioms()?;
    }
    Ok(pretree)
}

/// A maximal set of pairwise adjacent elements, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Star {
    pub elements: Vec<ElementId>,
}

pub fn maximal_stars(p: &Pretree) -> Vec<Star> {
    let n = p.len();
    let adjacency: Vec<FixedBitSet> = (0..n)
        .map(|a| {
            let mut row = FixedBitSet::with_capacity(n);
            for b in 0..n {
                if p.adjacent(ElementId(a), ElementId(b)) {
                    row.insert(b);
                }
            }
            row
        })
        .collect();
    let mut stars = Vec::new();
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    bron_kerbosch(&adjacency, Vec::new(), all, FixedBitSet::with_capacity(n), &mut stars);
    let mut stars: Vec<Star> = stars
        .into_iter()
        .map(|mut elements: Vec<usize>| {
            elements.sort();
            Star { elements: elements.into_iter().map(ElementId).collect() }
        })
        .collect();
    stars.sort();
    stars
}

fn bron_kerbosch(
    adjacency: &[FixedBitSet],
    clique: Vec<usize>,
    mut candidates: FixedBitSet,
    mut excluded: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.count_ones(..) == 0 {
        if excluded.count_ones(..) == 0 && !clique.is_empty() {
            out.push(clique);
        }
        return;
    }
    let pivot = candidates
        .ones()
        .chain(excluded.ones())
        .max_by_key(|&u| adjacency[u].intersection_count(&candidates))
        .expect("candidates nonempty");
    let mut pool = candidates.clone();
    pool.difference_with(&adjacency[pivot]);
    for v in pool.ones().collect::<Vec<_>>() {
        let mut next = clique.clone();
        next.push(v);
        let mut c = candidates.clone();
        c.intersect_with(&adjacency[v]);
        let mut x = excluded.clone();
        x.intersect_with(&adjacency[v]);
        bron_kerbosch(adjacency, next, c, x, out);
        candidates.set(v, false);
        excluded.insert(v);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeVertex {
    Element(ElementId),
    Star(usize),
}

/// Bipartite incidence tree between elements and maximal stars. Element
/// `i` is vertex `i`; star `j` is vertex `elements + j`.
#[derive(Clone, Debug)]
pub struct StructureTree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<(usize, usize)>,
    pub stars: Vec<Star>,
}

impl StructureTree {
    pub fn element_count(&self) -> usize {
        self.vertices.len() - self.stars.len()
    }

    pub fn star_vertex(&self, star: usize) -> usize {
        self.element_count() + star
    }

    /// Indices of the stars containing `element`.
    pub fn stars_of(&self, element: ElementId) -> Vec<usize> {
        (0..self.stars.len()).filter(|&s| self.stars[s].elements.contains(&element)).collect()
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == vertex || b == vertex).count()
    }
}

pub fn pretree_to_tree(p: &Pretree) -> Result<StructureTree> {
    let stars = maximal_stars(p);
    let n = p.len();
    let mut vertices: Vec<TreeVertex> = (0..n).map(|i| TreeVertex::Element(ElementId(i))).collect();
    vertices.extend((0..stars.len()).map(TreeVertex::Star));
    let mut edges = Vec::new();
    for (j, star) in stars.iter().enumerate() {
        for e in &star.elements {
            edges.push((e.0, n + j));
        }
    }
    edges.sort();
    let tree = StructureTree { vertices, edges, stars };
    check_tree(&tree)?;
    Ok(tree)
}

fn check_tree(tree: &StructureTree) -> Result<()> {
    let v = tree.vertices.len();
    if v == 0 {
        return Ok(());
    }
    if tree.edges.len() + 1 != v {
        return Err(structural!("star incidence graph has {} vertices but {} edges", v, tree.edges.len()));
    }
    // union-find: a cycle shows up as an edge inside one class
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in &tree.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(structural!("star incidence graph has a cycle through {a} and {b}"));
        }
        parent[ra] = rb;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossing::build_structures;
    use crate::cuts::{cut_classes, enumerate_minimal_cuts, Budget, EdgeCut};
    use crate::fixtures::Fixture;
    use crate::graph::Multigraph;

    struct Setup {
        g: Multigraph,
        classes: Vec<CutClass>,
        pretree: Pretree,
    }

    fn setup(f: Fixture) -> Setup {
        let (g, t) = f.load();
        let cuts = enumerate_minimal_cuts(&g, &t, &Budget::default()).unwrap();
        let classes = cut_classes(&g, &t, &cuts).unwrap();
        let (structures, _) = build_structures(&classes).unwrap();
        let pretree = build_pretree(elements(&classes, &structures)).unwrap();
        Setup { g, classes, pretree }
    }

    impl Setup {
        fn element_of(&self, cut: &[&str]) -> ElementId {
            let cut = EdgeCut::new(cut.iter().map(|n| self.g.edge_by_name(n).unwrap()).collect());
            let class = self.classes.iter().find(|c| c.representatives.contains(&cut)).unwrap().id;
            self.pretree.elements().iter().find(|e| e.kind == ElementKind::Isolated(class)).unwrap().id
        }

        fn cyclic(&self) -> ElementId {
            self.pretree.elements().iter().find(|e| matches!(e.kind, ElementKind::Cyclic(_))).unwrap().id
        }
    }

    #[test]
    fn f3_betweenness() {
        let s = setup(Fixture::F3);
        let a1 = s.element_of(&["e1", "e3"]);
        let a2 = s.element_of(&["e1", "e2"]);
        let b1 = s.element_of(&["e4", "e6"]);
        let mid = s.element_of(&["e2", "e3"]);
        assert_eq!(s.pretree.len(), 5);
        assert!(s.pretree.between(mid, a1, b1));
        assert!(!s.pretree.between(mid, a1, a2));
        let triples = s.pretree.betweenness();
        assert_eq!(triples.len(), 4);
        assert!(triples.iter().all(|&(_, m, _)| m == mid));

        let p = s.pretree.elements();
        let mid_class = &s.classes[match p[mid.0].kind {
            ElementKind::Isolated(c) => c.0,
            _ => unreachable!(),
        }];
        let side_a1 = attach(&p[mid.0], &p[a1.0]).unwrap();
        let Attachment::Side(side) = side_a1 else { panic!() };
        let a1_terminal = s.g.vertex("a1").unwrap();
        let t = Fixture::F3.terminals();
        assert!(mid_class.bipartition.side(side).contains(t.index_of(a1_terminal).unwrap()));
    }

    #[test]
    fn f3_class_level_betweenness() {
        let s = setup(Fixture::F3);
        let bp = |cut: &[&str]| {
            let cut = EdgeCut::new(cut.iter().map(|n| s.g.edge_by_name(n).unwrap()).collect());
            s.classes.iter().find(|c| c.representatives.contains(&cut)).unwrap().bipartition.clone()
        };
        let (a1, a2, b1, mid) = (bp(&["e1", "e3"]), bp(&["e1", "e2"]), bp(&["e4", "e6"]), bp(&["e2", "e3"]));
        assert!(class_between(&mid, &a1, &b1));
        assert!(!class_between(&mid, &a1, &a2));
    }

    #[test]
    fn f2_betweenness_and_stars() {
        let s = setup(Fixture::F2);
        assert_eq!(s.pretree.len(), 5);
        let cyc = s.cyclic();
        let v2 = s.element_of(&["e1", "e2"]);
        let v3 = s.element_of(&["e2", "e3"]);
        assert!(s.pretree.between(cyc, v2, v3));
        assert_eq!(s.pretree.attachment(cyc, v2), Some(Attachment::Bead(1)));
        assert_eq!(s.pretree.attachment(cyc, v3), Some(Attachment::Bead(2)));
        let corners: Vec<ElementId> = s.pretree.elements().iter().map(|e| e.id).filter(|&e| e != cyc).collect();
        for (i, &a) in corners.iter().enumerate() {
            for &b in &corners[i + 1..] {
                assert!(s.pretree.between(cyc, a, b));
            }
        }
        let stars = maximal_stars(&s.pretree);
        assert_eq!(stars.len(), 4);
        assert!(stars.iter().all(|st| st.elements.len() == 2 && st.elements.contains(&cyc)));

        let tree = pretree_to_tree(&s.pretree).unwrap();
        assert_eq!(tree.vertices.len(), 9);
        assert_eq!(tree.edges.len(), 8);
        assert_eq!(tree.degree(cyc.0), 4);
        assert!((0..4).all(|j| tree.degree(tree.star_vertex(j)) == 2));
    }

    #[test]
    fn f3_stars_and_tree() {
        let s = setup(Fixture::F3);
        let mid = s.element_of(&["e2", "e3"]);
        let a: Vec<ElementId> = {
            let mut v = vec![s.element_of(&["e1", "e3"]), s.element_of(&["e1", "e2"]), mid];
            v.sort();
            v
        };
        let b: Vec<ElementId> = {
            let mut v = vec![s.element_of(&["e4", "e6"]), s.element_of(&["e4", "e5"]), mid];
            v.sort();
            v
        };
        let stars: Vec<Vec<ElementId>> = maximal_stars(&s.pretree).into_iter().map(|s| s.elements).collect();
        assert_eq!(stars.len(), 2);
        assert!(stars.contains(&a) && stars.contains(&b));
        let tree = pretree_to_tree(&s.pretree).unwrap();
        assert_eq!((tree.vertices.len(), tree.edges.len()), (7, 6));
        assert_eq!(tree.degree(mid.0), 2);
    }

    #[test]
    fn f1_singleton() {
        let s = setup(Fixture::F1);
        assert_eq!(s.pretree.len(), 1);
        assert!(s.pretree.betweenness().is_empty());
        let stars = maximal_stars(&s.pretree);
        assert_eq!(stars, [Star { elements: vec![ElementId(0)] }]);
        let tree = pretree_to_tree(&s.pretree).unwrap();
        assert_eq!((tree.vertices.len(), tree.edges.len()), (2, 1));
    }

    #[test]
    fn f5_has_no_external_elements() {
        let s = setup(Fixture::F5);
        let external = s.pretree.elements().iter().filter(|e| e.id != s.cyclic()).count();
        // only the five absorbed bead cuts remain next to the circle
        assert_eq!(external, 5);
        assert!(s.pretree.verify_axioms().is_ok());
    }

    #[test]
    fn pendant_attaches_to_its_bead() {
        let s = setup(Fixture::F2Pendant);
        let pendant = s.element_of(&["e5", "e6"]);
        let cyc = s.cyclic();
        assert_eq!(s.pretree.attachment(cyc, pendant), Some(Attachment::Bead(0)));
        let tree = pretree_to_tree(&s.pretree).unwrap();
        assert_eq!(tree.stars_of(pendant).len(), 1);
    }

    #[test]
    fn axiom_counts_cover_every_tuple() {
        let s = setup(Fixture::F3);
        let counts = s.pretree.verify_axioms().unwrap();
        assert_eq!(counts.triples, 125);
        assert_eq!(counts.quadruples, 625);
    }
}
