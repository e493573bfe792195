//! The full pipeline from a graph and a cut system to a verified cactus.

use crate::cactus::{assemble_cactus, CactusModel};
use crate::crossing::{build_structures, crossing_pairs, CyclicStructure};
use crate::cuts::{classify, cut_classes, enumerate_minimal_cuts, Budget, ClassId, CutClass, EdgeCut};
use crate::error::Result;
use crate::generalized::{block_signature, resolve_config, system_cuts, CutSystemConfig, Mode};
use crate::graph::{Multigraph, TerminalSet};
use crate::pretree::{build_pretree, elements, pretree_to_tree, Pretree, StructureTree};

/// Everything computed for one instance.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub mode: Mode,
    pub graph: Multigraph,
    /// The terminals the cuts separate: the input terminals in end mode,
    /// block representatives otherwise.
    pub terminals: TerminalSet,
    pub config: Option<CutSystemConfig>,
    pub cuts: Vec<EdgeCut>,
    pub classes: Vec<CutClass>,
    pub crossing_pairs: Vec<(ClassId, ClassId)>,
    pub structures: Vec<CyclicStructure>,
    pub pretree: Pretree,
    pub tree: StructureTree,
    pub cactus: CactusModel,
}

impl Analysis {
    /// Cardinality of the cuts, if there are any.
    pub fn cut_size(&self) -> Option<usize> {
        self.cuts.first().map(EdgeCut::len)
    }
}

/// Runs the pipeline. `t` is used in end mode only; `k` in thin and slim
/// mode only.
pub fn analyze(g: &Multigraph, t: &TerminalSet, mode: Mode, k: Option<usize>, budget: &Budget) -> Result<Analysis> {
    budget.check_graph(g)?;
    let (terminals, config, cuts, classes) = match mode {
        Mode::Ends => {
            let cuts = if t.len() < 2 { Vec::new() } else { enumerate_minimal_cuts(g, t, budget)? };
            let classes = cut_classes(g, t, &cuts)?;
            (t.clone(), None, cuts, classes)
        }
        _ => {
            let config = resolve_config(g, mode, k, budget)?;
            let cuts = system_cuts(g, &config, budget)?;
            let classes = match mode {
                Mode::Slim => {
                    let sigs = cuts.iter().map(|c| block_signature(g, &config.terminals, c)).collect::<Result<Vec<_>>>()?;
                    classify(&cuts, &sigs)
                }
                _ => cut_classes(g, &config.terminals, &cuts)?,
            };
            (config.terminals.clone(), Some(config), cuts, classes)
        }
    };
    let crossing_pairs = crossing_pairs(&classes);
    let (structures, _) = build_structures(&classes)?;
    let pretree = build_pretree(elements(&classes, &structures))?;
    let tree = pretree_to_tree(&pretree)?;
    let cactus = assemble_cactus(&tree, &pretree, &structures, &classes, terminals.len())?;
    Ok(Analysis {
        mode,
        graph: g.clone(),
        terminals,
        config,
        cuts,
        classes,
        crossing_pairs,
        structures,
        pretree,
        tree,
        cactus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::{cactus_isomorphic, cactus_min_cuts, separated_in_cactus, VertexKind};
    use crate::cuts::TerminalBipartition;
    use crate::fixtures::Fixture;

    fn run(f: Fixture) -> Analysis {
        let (g, t) = f.load();
        analyze(&g, &t, Mode::Ends, None, &Budget::default()).unwrap()
    }

    #[test]
    fn f1_is_a_doubled_edge() {
        let a = run(Fixture::F1);
        assert_eq!(a.cactus.vertex_count(), 2);
        assert_eq!(a.cactus.edges.len(), 2);
        assert_eq!(a.cactus.cut_map, [(0, 1)]);
        let f = &a.cactus.terminal_map;
        assert_ne!(f[0], f[1]);
        assert!(separated_in_cactus(&a.cactus, f[0], f[1], (0, 1)).unwrap());
    }

    #[test]
    fn f2_is_a_four_cycle() {
        let a = run(Fixture::F2);
        let c = &a.cactus;
        assert_eq!(c.vertex_count(), 4);
        assert_eq!(c.cycles.len(), 1);
        assert_eq!(c.cycles[0].len(), 4);
        assert_eq!(cactus_min_cuts(c).len(), 6);
        assert!(c.vertices.iter().all(|&k| k == VertexKind::Bead));
        assert_eq!(c.terminal_map, [0, 1, 2, 3]);
        // class {v1,v4} | {v2,v3}
        let target = TerminalBipartition::from_indices(&[0, 3], 4).unwrap();
        let class = a.classes.iter().find(|k| k.bipartition == target).unwrap();
        let pair = c.cut_map[class.id.0];
        let f = &c.terminal_map;
        assert!(separated_in_cactus(c, f[0], f[1], pair).unwrap());
        assert!(!separated_in_cactus(c, f[0], f[3], pair).unwrap());
    }

    #[test]
    fn f3_is_a_tree_of_doubled_edges() {
        let a = run(Fixture::F3);
        let c = &a.cactus;
        assert_eq!(c.vertex_count(), 6);
        assert!(c.cycles.is_empty());
        assert_eq!(cactus_min_cuts(c).len(), 5);
        assert_eq!(c.vertices.iter().filter(|&&k| k == VertexKind::Leaf).count(), 4);
    }

    #[test]
    fn fixture_cut_counts() {
        for (f, count) in [(Fixture::F1, 1), (Fixture::F2, 6), (Fixture::F3, 5), (Fixture::F4, 1), (Fixture::F5, 10)] {
            let a = run(f);
            assert_eq!(a.classes.len(), count, "{}", f.name());
            assert_eq!(cactus_min_cuts(&a.cactus).len(), count, "{}", f.name());
        }
    }

    #[test]
    fn pendant_hangs_off_a_bead() {
        let a = run(Fixture::F2Pendant);
        let c = &a.cactus;
        assert_eq!(c.cycles.len(), 1);
        assert_eq!(c.vertex_count(), 5);
        assert_eq!(cactus_min_cuts(c).len(), 7);
    }

    #[test]
    fn degenerate_inputs_give_one_vertex() {
        let (g, _) = Fixture::F7.load();
        let a = analyze(&g, &TerminalSet::new(Vec::new()), Mode::Ends, None, &Budget::default()).unwrap();
        assert_eq!(a.cactus, CactusModel::single_vertex());
    }

    #[test]
    fn isomorphisms_between_fixtures() {
        assert!(cactus_isomorphic(&run(Fixture::F1).cactus, &run(Fixture::F4).cactus).is_some());
        assert!(cactus_isomorphic(&run(Fixture::F2).cactus, &run(Fixture::F5).cactus).is_none());
    }

    #[test]
    fn generalized_modes() {
        let b = Budget::default();
        let f6 = Fixture::F6.graph();
        let thin = analyze(&f6, &TerminalSet::new(Vec::new()), Mode::Thin, Some(2), &b).unwrap();
        assert_eq!(thin.classes.len(), 1);
        assert_eq!(thin.cactus.vertex_count(), 2);

        let f7 = Fixture::F7.graph();
        let slim = analyze(&f7, &TerminalSet::new(Vec::new()), Mode::Slim, Some(2), &b).unwrap();
        assert_eq!(slim.classes.len(), 1);
        assert_eq!(slim.classes[0].representatives.len(), 2);
        assert_eq!(slim.cactus.vertex_count(), 2);

        let (f2, t) = Fixture::F2.load();
        let global = analyze(&f2, &t, Mode::Global, None, &b).unwrap();
        let ends = analyze(&f2, &t, Mode::Ends, None, &b).unwrap();
        assert_eq!(global.cactus, ends.cactus);
        assert!(global.classes.iter().all(|c| c.representatives.len() == 1));
    }
}
