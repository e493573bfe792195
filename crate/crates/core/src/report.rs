//! JSON and DOT renderings of an analysis.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cactus::{CactusModel, VertexKind};
use crate::cuts::Side;
use crate::generalized::Mode;
use crate::graph::{Multigraph, TerminalSet};
use crate::pipeline::Analysis;
use crate::pretree::ElementKind;

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub loops_stripped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassDocument {
    pub id: String,
    pub side_a: Vec<String>,
    pub side_b: Vec<String>,
    pub representatives: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberDocument {
    pub class: String,
    /// Gap `i` (from 1) sits between bead `i` and the next bead.
    pub gaps: [usize; 2],
    pub absorbed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureDocument {
    pub id: String,
    pub beads: Vec<Vec<String>>,
    pub members: Vec<MemberDocument>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementDocument {
    pub id: String,
    pub kind: &'static str,
    pub of: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PretreeDocument {
    pub elements: Vec<ElementDocument>,
    pub stars: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CactusVertexDocument {
    pub id: usize,
    pub kind: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CactusEdgeDocument {
    pub id: usize,
    pub ends: [usize; 2],
    /// The parallel partner of a doubled edge; null on cycle edges.
    pub pair: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CactusDocument {
    pub vertices: Vec<CactusVertexDocument>,
    pub edges: Vec<CactusEdgeDocument>,
    pub cycles: Vec<Vec<usize>>,
    pub terminal_map: BTreeMap<String, usize>,
    pub cut_map: BTreeMap<String, [usize; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockDocument {
    pub vertices: Vec<String>,
    /// Set on blocks large enough to act as a terminal.
    pub representative: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisDocument {
    pub mode: Mode,
    pub k: Option<usize>,
    pub threshold: Option<usize>,
    pub graph: GraphSummary,
    pub terminals: Vec<String>,
    pub cut_size: Option<usize>,
    pub classes: Vec<ClassDocument>,
    pub crossing_pairs: Vec<[String; 2]>,
    pub structures: Vec<StructureDocument>,
    pub pretree: PretreeDocument,
    pub cactus: CactusDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockDocument>>,
}

fn terminal_names(g: &Multigraph, t: &TerminalSet, side: impl Iterator<Item = usize>) -> Vec<String> {
    side.map(|i| g.vertex_name(t.vertex(i)).to_owned()).collect()
}

pub fn cactus_document(c: &CactusModel, g: &Multigraph, t: &TerminalSet) -> CactusDocument {
    CactusDocument {
        vertices: c.vertices.iter().enumerate().map(|(id, k)| CactusVertexDocument { id, kind: k.as_str() }).collect(),
        edges: c
            .edges
            .iter()
            .enumerate()
            .map(|(id, e)| CactusEdgeDocument { id, ends: [e.ends.0, e.ends.1], pair: e.twin })
            .collect(),
        cycles: c.cycles.clone(),
        terminal_map: c
            .terminal_map
            .iter()
            .enumerate()
            .map(|(i, &v)| (g.vertex_name(t.vertex(i)).to_owned(), v))
            .collect(),
        cut_map: c.cut_map.iter().enumerate().map(|(i, &(x, y))| (format!("c{i}"), [x, y])).collect(),
    }
}

impl AnalysisDocument {
    pub fn new(a: &Analysis) -> Self {
        let g = &a.graph;
        let t = &a.terminals;
        let names = |edges: Vec<&str>| edges.into_iter().map(str::to_owned).collect::<Vec<_>>();
        AnalysisDocument {
            mode: a.mode,
            k: a.config.as_ref().filter(|_| a.mode.needs_k()).map(|c| c.k),
            threshold: a.config.as_ref().map(|c| c.threshold),
            graph: GraphSummary { vertices: g.vertex_count(), edges: g.edge_count(), loops_stripped: g.loops_stripped() },
            terminals: t.names(g).map(str::to_owned).collect(),
            cut_size: a.cut_size(),
            classes: a
                .classes
                .iter()
                .map(|c| ClassDocument {
                    id: c.id.to_string(),
                    side_a: terminal_names(g, t, c.bipartition.side(Side::A).ones()),
                    side_b: terminal_names(g, t, c.bipartition.side(Side::B).ones()),
                    representatives: c.representatives.iter().map(|r| names(r.names(g))).collect(),
                })
                .collect(),
            crossing_pairs: a.crossing_pairs.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect(),
            structures: a
                .structures
                .iter()
                .map(|s| StructureDocument {
                    id: s.id.to_string(),
                    beads: s.beads.iter().map(|b| terminal_names(g, t, b.ones())).collect(),
                    members: s
                        .members
                        .iter()
                        .map(|m| MemberDocument { class: m.class.to_string(), gaps: [m.gaps.0 + 1, m.gaps.1 + 1], absorbed: m.absorbed })
                        .collect(),
                })
                .collect(),
            pretree: PretreeDocument {
                elements: a
                    .pretree
                    .elements()
                    .iter()
                    .map(|e| {
                        let (kind, of) = match e.kind {
                            ElementKind::Isolated(c) => ("class", c.to_string()),
                            ElementKind::Cyclic(s) => ("structure", s.to_string()),
                        };
                        ElementDocument { id: e.id.to_string(), kind, of }
                    })
                    .collect(),
                stars: a.tree.stars.iter().map(|s| s.elements.iter().map(|e| e.to_string()).collect()).collect(),
            },
            cactus: cactus_document(&a.cactus, g, t),
            blocks: a.config.as_ref().map(|config| {
                let reps = config.partition.qualifying(config.k);
                config
                    .partition
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(i, b)| BlockDocument {
                        vertices: b.iter().map(|&v| g.vertex_name(v).to_owned()).collect(),
                        representative: reps.contains(&i).then(|| g.vertex_name(b[0]).to_owned()),
                    })
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// DOT rendering: cycle edges plain, doubled edges bold, terminals listed
/// under their vertex.
pub fn to_dot(a: &Analysis) -> String {
    let c = &a.cactus;
    let mut labels: Vec<Vec<&str>> = vec![Vec::new(); c.vertex_count()];
    for (i, &v) in c.terminal_map.iter().enumerate() {
        labels[v].push(a.graph.vertex_name(a.terminals.vertex(i)));
    }
    let mut classes_on: Vec<Vec<String>> = vec![Vec::new(); c.edges.len()];
    for (i, &(x, y)) in c.cut_map.iter().enumerate() {
        if c.edges[x].twin == Some(y) {
            classes_on[x].push(format!("c{i}"));
        }
    }
    let mut out = String::from("graph cactus {\n  node [shape=circle];\n");
    for (v, kind) in c.vertices.iter().enumerate() {
        let shape = match kind {
            VertexKind::Bead => "circle",
            VertexKind::Star => "point",
            VertexKind::Leaf => "box",
        };
        let mut label = v.to_string();
        if !labels[v].is_empty() {
            label = format!("{v}\\n{}", labels[v].join(","));
        }
        let shape = if labels[v].is_empty() { shape } else { "circle" };
        writeln!(out, "  {v} [label=\"{label}\", shape={shape}];").unwrap();
    }
    for (i, e) in c.edges.iter().enumerate() {
        let (x, y) = e.ends;
        match (e.cycle, e.twin) {
            (Some(cycle), _) => writeln!(out, "  {x} -- {y} [label=\"{i}\", color=\"/set19/{}\"];", cycle % 9 + 1).unwrap(),
            (None, Some(twin)) if twin > i => {
                writeln!(out, "  {x} -- {y} [label=\"{}\", style=bold, color=\"black:black\"];", classes_on[i].join(",")).unwrap()
            }
            _ => {}
        }
    }
    out.push_str("}\n");
    out
}

/// Isomorphism-invariant summary of a cactus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub vertices: usize,
    pub beads: usize,
    pub stars: usize,
    pub leaves: usize,
    pub cycle_lengths: Vec<usize>,
    pub doubled_pairs: usize,
    pub degrees: Vec<usize>,
}

pub fn canonical_form(c: &CactusModel) -> CanonicalForm {
    let count = |k: VertexKind| c.vertices.iter().filter(|&&x| x == k).count();
    let mut cycle_lengths: Vec<usize> = c.cycles.iter().map(Vec::len).collect();
    cycle_lengths.sort();
    let mut degrees = vec![0; c.vertex_count()];
    for e in &c.edges {
        degrees[e.ends.0] += 1;
        degrees[e.ends.1] += 1;
    }
    degrees.sort_by(|a, b| b.cmp(a));
    CanonicalForm {
        vertices: c.vertex_count(),
        beads: count(VertexKind::Bead),
        stars: count(VertexKind::Star),
        leaves: count(VertexKind::Leaf),
        cycle_lengths,
        doubled_pairs: c.edges.iter().filter(|e| e.twin.is_some()).count() / 2,
        degrees,
    }
}
