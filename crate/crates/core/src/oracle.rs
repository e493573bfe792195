//! Brute-force oracle and end-to-end instance verification.
//!
//! The oracle enumerates raw edge subsets and runs its own component
//! search. It shares only the graph type with the pipeline.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cactus::{cactus_min_cuts, is_cactus};
use crate::crossing::check_crossing_structure;
use crate::cuts::{Budget, CutClass, Side};
use crate::error::{Error, Result};
use crate::generalized::{inseparability_classes, slimness_threshold, thinness_threshold, Mode};
use crate::graph::{GraphDocument, Multigraph, TerminalSet};
use crate::pipeline::{analyze, Analysis};

/// Largest edge count the subset oracle accepts.
pub const MAX_ORACLE_EDGES: usize = 20;

/// Component label per vertex after deleting the edges in `removed`.
fn components(g: &Multigraph, removed: u32) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adjacency = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if removed & (1 << i) == 0 {
            adjacency[e.ends.0 .0].push(e.ends.1 .0);
            adjacency[e.ends.1 .0].push(e.ends.0 .0);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if label[w] == usize::MAX {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

fn check_size(g: &Multigraph, budget: &Budget) -> Result<()> {
    budget.check_graph(g)?;
    if g.edge_count() > MAX_ORACLE_EDGES {
        return Err(Error::BudgetExceeded(format!("oracle handles at most {MAX_ORACLE_EDGES} edges")));
    }
    Ok(())
}

/// Subsets of `m` edges with exactly `r` members, as bit masks.
fn masks(m: usize, r: usize) -> impl Iterator<Item = u32> {
    (0u32..1 << m).filter(move |s| s.count_ones() as usize == r)
}

/// What the oracle expects of the end-cut pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub cut_size: Option<usize>,
    /// Minimum cuts as sorted edge-name lists.
    pub cuts: Vec<Vec<String>>,
    /// Per class, the terminal indices sharing a side with terminal 0.
    pub classes: Vec<Vec<usize>>,
    /// Representatives per class, as edge-name lists.
    pub representatives: Vec<Vec<Vec<String>>>,
    /// Crossing matrix over `classes`.
    pub crossing: Vec<Vec<bool>>,
    pub crossing_pairs: usize,
    pub expected_cactus_cuts: usize,
}

/// Recomputes minimum cuts, classes and crossings by exhaustive search.
pub fn brute_force_pipeline(g: &Multigraph, t: &TerminalSet, budget: &Budget) -> Result<OracleResult> {
    check_size(g, budget)?;
    let m = g.edge_count();
    let terms: Vec<usize> = t.vertices().iter().map(|v| v.0).collect();
    let mut found: Vec<(u32, Vec<usize>)> = Vec::new();
    let mut cut_size = None;
    if terms.len() >= 2 {
        for r in 1..=m {
            for s in masks(m, r) {
                let label = components(g, s);
                if terms.iter().any(|&x| label[x] != label[terms[0]]) {
                    let side = (0..terms.len()).filter(|&i| label[terms[i]] == label[terms[0]]).collect();
                    found.push((s, side));
                }
            }
            if !found.is_empty() {
                cut_size = Some(r);
                break;
            }
        }
    }
    if let Some(r) = cut_size {
        budget.check_cut_size(r)?;
    }
    let names = |s: u32| -> Vec<String> {
        (0..m).filter(|&i| s & (1 << i) != 0).map(|i| g.edges()[i].name.clone()).collect()
    };
    let mut grouped: BTreeMap<Vec<usize>, Vec<Vec<String>>> = BTreeMap::new();
    for (s, side) in &found {
        grouped.entry(side.clone()).or_default().push(names(*s));
    }
    let classes: Vec<Vec<usize>> = grouped.keys().cloned().collect();
    let representatives: Vec<Vec<Vec<String>>> = grouped
        .into_values()
        .map(|mut reps| {
            reps.sort();
            reps
        })
        .collect();
    let full: Vec<usize> = (0..terms.len()).collect();
    let crossing: Vec<Vec<bool>> = classes
        .iter()
        .map(|a| {
            classes
                .iter()
                .map(|b| {
                    let in_a = |i: &usize| a.contains(i);
                    let in_b = |i: &usize| b.contains(i);
                    full.iter().any(|i| in_a(i) && in_b(i))
                        && full.iter().any(|i| in_a(i) && !in_b(i))
                        && full.iter().any(|i| !in_a(i) && in_b(i))
                        && full.iter().any(|i| !in_a(i) && !in_b(i))
                })
                .collect()
        })
        .collect();
    let crossing_pairs = crossing.iter().flatten().filter(|&&x| x).count() / 2;
    let mut cuts: Vec<Vec<String>> = found.iter().map(|(s, _)| names(*s)).collect();
    cuts.sort();
    Ok(OracleResult {
        cut_size,
        cuts,
        expected_cactus_cuts: classes.len(),
        classes,
        representatives,
        crossing,
        crossing_pairs,
    })
}

/// Brute-force block structure: for every vertex pair, the least size of
/// an edge set separating it, over all sets (`k = None`) or over (r,k)-cuts.
fn separation_sizes(g: &Multigraph, k: Option<usize>) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut best = vec![vec![usize::MAX; n]; n];
    for s in 0u32..1 << m {
        let label = components(g, s);
        if let Some(k) = k {
            let mut sizes = vec![0; n];
            for &l in &label {
                sizes[l] += 1;
            }
            if sizes.iter().filter(|&&x| x >= k).count() < 2 {
                continue;
            }
        }
        let r = s.count_ones() as usize;
        for u in 0..n {
            for v in 0..n {
                if label[u] != label[v] && r < best[u][v] {
                    best[u][v] = r;
                }
            }
        }
    }
    best
}

fn blocks_from(best: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (v, _) in best.iter().enumerate() {
        match blocks.iter_mut().find(|b| best[b[0]][v] > n) {
            Some(b) => b.push(v),
            None => blocks.push(vec![v]),
        }
    }
    blocks
}

/// Threshold and block sizes found by scanning the definition directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteThreshold {
    pub threshold: Option<usize>,
    pub blocks: Vec<Vec<usize>>,
}

fn scan(g: &Multigraph, k: usize, best: &[Vec<usize>]) -> BruteThreshold {
    for n in 0..=g.edge_count() {
        let blocks = blocks_from(best, n);
        if blocks.iter().filter(|b| b.len() >= k).count() >= 2 {
            return BruteThreshold { threshold: Some(n), blocks };
        }
    }
    BruteThreshold { threshold: None, blocks: Vec::new() }
}

pub fn brute_thinness(g: &Multigraph, k: usize, budget: &Budget) -> Result<BruteThreshold> {
    check_size(g, budget)?;
    Ok(scan(g, k, &separation_sizes(g, None)))
}

pub fn brute_slimness(g: &Multigraph, k: usize, budget: &Budget) -> Result<BruteThreshold> {
    check_size(g, budget)?;
    Ok(scan(g, k, &separation_sizes(g, Some(k))))
}

/// Number of edge sets of least size whose removal disconnects the graph.
pub fn brute_global_min_cuts(g: &Multigraph, budget: &Budget) -> Result<(usize, usize)> {
    check_size(g, budget)?;
    let m = g.edge_count();
    for r in 1..=m {
        let count = masks(m, r).filter(|&s| components(g, s).iter().any(|&l| l != 0)).count();
        if count > 0 {
            return Ok((r, count));
        }
    }
    Ok((0, 0))
}

/// A §4 cut system recomputed from the definitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteSystem {
    pub threshold: Option<usize>,
    pub block_sizes: Vec<usize>,
    pub cuts: usize,
    pub classes: usize,
}

/// Threshold, blocks, essential cuts and classes of a thin, global or slim
/// system, straight from the definitions.
pub fn brute_system(g: &Multigraph, mode: Mode, k: usize, budget: &Budget) -> Result<BruteSystem> {
    let scanned = match mode {
        Mode::Slim => brute_slimness(g, k, budget)?,
        _ => brute_thinness(g, k, budget)?,
    };
    let block_sizes = scanned.blocks.iter().map(Vec::len).collect();
    let Some(n) = scanned.threshold else {
        return Ok(BruteSystem { threshold: None, block_sizes, cuts: 0, classes: 0 });
    };
    let reps: Vec<usize> = scanned.blocks.iter().filter(|b| b.len() >= k).map(|b| b[0]).collect();
    let mut keys: Vec<Vec<usize>> = Vec::new();
    let mut cuts = 0;
    for s in masks(g.edge_count(), n) {
        let label = components(g, s);
        if reps.iter().all(|&r| label[r] == label[reps[0]]) {
            continue;
        }
        let crossing_only = g
            .edges()
            .iter()
            .enumerate()
            .all(|(i, e)| s & (1 << i) == 0 || label[e.ends.0 .0] != label[e.ends.1 .0]);
        if !crossing_only {
            continue;
        }
        if mode == Mode::Slim {
            let mut sizes = vec![0; g.vertex_count()];
            for &l in &label {
                sizes[l] += 1;
            }
            if sizes.iter().filter(|&&x| x >= k).count() < 2 {
                continue;
            }
        }
        cuts += 1;
        let key: Vec<usize> = (0..reps.len()).filter(|&i| label[reps[i]] == label[reps[0]]).collect();
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    Ok(BruteSystem { threshold: Some(n), block_sizes, cuts, classes: keys.len() })
}

/// One named check: how often it ran and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub executed: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome { name, executed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.executed += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub graph: GraphDocument,
    pub cut: Vec<String>,
    pub terminals: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub vertices: usize,
    pub edges: usize,
    pub terminals: Vec<String>,
    pub mode: Mode,
    pub k: Option<usize>,
    pub threshold: Option<usize>,
    pub cut_size: Option<usize>,
    pub classes: usize,
    pub crossing_pairs: usize,
    pub structures: usize,
    pub cactus_vertices: usize,
    pub cactus_cuts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub instance: Option<InstanceSummary>,
    pub checks: Vec<CheckOutcome>,
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs the pipeline and checks every claim about its output.
pub fn verify_instance(g: &Multigraph, t: &TerminalSet, mode: Mode, k: Option<usize>, budget: &Budget) -> VerificationReport {
    match analyze(g, t, mode, k, budget) {
        Ok(a) => verify_analysis(&a, budget),
        Err(e) => {
            let mut pipeline = CheckOutcome::new("pipeline");
            pipeline.record(false, || e.to_string());
            VerificationReport {
                instance: None,
                checks: vec![pipeline],
                counterexample: Some(Counterexample {
                    check: "pipeline".into(),
                    graph: GraphDocument::from_graph(g, t),
                    cut: Vec::new(),
                    terminals: None,
                }),
            }
        }
    }
}

fn edge_names(g: &Multigraph, class: &CutClass, i: usize) -> Vec<String> {
    class.representatives[i].names(g).into_iter().map(str::to_owned).collect()
}

/// Checks an already computed analysis. Altering the analysis before the
/// call is how fault injection is tested.
pub fn verify_analysis(a: &Analysis, budget: &Budget) -> VerificationReport {
    let g = &a.graph;
    let t = &a.terminals;
    let c = &a.cactus;
    let tname = |i: usize| g.vertex_name(t.vertex(i)).to_owned();
    let mut counterexample: Option<Counterexample> = None;
    let mut note = |check: &str, cut: Vec<String>, pair: Option<(usize, usize)>| {
        if counterexample.is_none() {
            counterexample = Some(Counterexample {
                check: check.to_owned(),
                graph: GraphDocument::from_graph(g, t),
                cut,
                terminals: pair.map(|(x, y)| (tname(x), tname(y))),
            });
        }
    };

    // separation in the graph, by deletion of each representative
    let mut main = CheckOutcome::new("main_theorem");
    let images_known = c.cut_map.len() == a.classes.len() && c.terminal_map.len() == t.len();
    for class in &a.classes {
        for (ri, rep) in class.representatives.iter().enumerate() {
            let mut mask = 0u32;
            for e in rep.edges() {
                mask |= 1 << e.0;
            }
            let label = components(g, mask);
            let (x, y) = if images_known { c.cut_map[class.id.0] } else { (0, 0) };
            let cactus_label = if images_known { c.labels_without(&[x, y]) } else { Vec::new() };
            for t1 in 0..t.len() {
                for t2 in t1 + 1..t.len() {
                    let in_graph = label[t.vertex(t1).0] != label[t.vertex(t2).0];
                    let ok = images_known && in_graph == (cactus_label[c.terminal_map[t1]] != cactus_label[c.terminal_map[t2]]);
                    main.record(ok, || {
                        format!("class {} separates {} and {}: graph {in_graph}, cactus {}", class.id, tname(t1), tname(t2), !in_graph)
                    });
                    if !ok {
                        note("main_theorem", edge_names(g, class, ri), Some((t1, t2)));
                    }
                }
            }
        }
    }

    let mut basic = CheckOutcome::new("lemma_basic");
    if a.mode != Mode::Slim {
        for &(x, y) in &a.crossing_pairs {
            let (kx, ky) = (&a.classes[x.0], &a.classes[y.0]);
            for k in &kx.representatives {
                for l in &ky.representatives {
                    let result = check_crossing_structure(g, t, k, l);
                    basic.record(result.is_ok(), || format!("{x} x {y}: {}", result.as_ref().err().map(|e| e.to_string()).unwrap_or_default()));
                }
            }
        }
    }

    let mut axioms = CheckOutcome::new("pretree_axioms");
    match a.pretree.verify_axioms() {
        Ok(counts) => axioms.executed = counts.triples + counts.quadruples,
        Err(e) => axioms.record(false, || e.to_string()),
    }

    let mut bijection = CheckOutcome::new("bijection");
    let min_cuts = cactus_min_cuts(c);
    bijection.record(min_cuts.len() == a.classes.len(), || {
        format!("{} classes, {} cactus minimum cuts", a.classes.len(), min_cuts.len())
    });
    for s in &a.structures {
        let m = s.bead_count();
        bijection.record(s.members.len() == m * (m - 1) / 2, || {
            format!("{} has {} beads and {} members", s.id, m, s.members.len())
        });
    }

    let mut validity = CheckOutcome::new("cactus_validity");
    validity.record(is_cactus(c.vertex_count(), &c.edge_ends()), || "not a cactus".into());
    let validated = c.validate(&a.classes);
    validity.record(validated.is_ok(), || validated.err().map(|e| e.to_string()).unwrap_or_default());

    let mut odd = CheckOutcome::new("odd_cardinality");
    if let Some(size) = a.cut_size() {
        if size % 2 == 1 && a.mode != Mode::Slim {
            odd.record(a.crossing_pairs.is_empty() && c.cycles.is_empty(), || {
                format!("odd cut size {size} with {} crossing pairs", a.crossing_pairs.len())
            });
        }
    }

    let mut agreement = CheckOutcome::new("oracle_agreement");
    if a.mode != Mode::Slim {
        match brute_force_pipeline(g, t, budget) {
            Ok(o) => {
                let mine: Vec<Vec<usize>> = a.classes.iter().map(|k| k.bipartition.side(Side::A).ones().collect()).collect();
                let mut sorted = mine.clone();
                sorted.sort();
                agreement.record(sorted == o.classes, || format!("classes {mine:?} vs oracle {:?}", o.classes));
                let index: Vec<Option<usize>> = mine.iter().map(|k| o.classes.iter().position(|x| x == k)).collect();
                for &(x, y) in &a.crossing_pairs {
                    let ok = matches!((index[x.0], index[y.0]), (Some(i), Some(j)) if o.crossing[i][j]);
                    agreement.record(ok, || format!("{x} x {y} not crossing in the oracle"));
                }
                agreement.record(a.crossing_pairs.len() == o.crossing_pairs, || {
                    format!("{} crossing pairs vs oracle {}", a.crossing_pairs.len(), o.crossing_pairs)
                });
                agreement.record(min_cuts.len() == o.expected_cactus_cuts, || {
                    format!("{} cactus cuts vs oracle {}", min_cuts.len(), o.expected_cactus_cuts)
                });
                let mut reps: Vec<Vec<String>> =
                    a.cuts.iter().map(|k| k.names(g).into_iter().map(str::to_owned).collect()).collect();
                reps.sort();
                agreement.record(reps == o.cuts, || "minimum cuts differ from the oracle".into());
            }
            Err(e) => agreement.record(false, || e.to_string()),
        }
    }

    let mut thresholds = CheckOutcome::new("threshold_agreement");
    if let Some(config) = &a.config {
        let brute = match a.mode {
            Mode::Slim => brute_slimness(g, config.k, budget),
            _ => brute_thinness(g, config.k, budget),
        };
        match brute {
            Ok(b) => {
                thresholds.record(b.threshold == Some(config.threshold), || {
                    format!("threshold {} vs brute force {:?}", config.threshold, b.threshold)
                });
                let mine: Vec<Vec<usize>> =
                    config.partition.blocks.iter().map(|blk| blk.iter().map(|v| v.0).collect()).collect();
                thresholds.record(mine == b.blocks, || format!("blocks {mine:?} vs brute force {:?}", b.blocks));
            }
            Err(e) => thresholds.record(false, || e.to_string()),
        }
        if a.mode == Mode::Global {
            match brute_global_min_cuts(g, budget) {
                Ok((_, count)) => thresholds.record(count == a.classes.len(), || {
                    format!("{} classes vs {count} global minimum cuts", a.classes.len())
                }),
                Err(e) => thresholds.record(false, || e.to_string()),
            }
        }
    }

    let checks = vec![main, basic, axioms, bijection, validity, odd, agreement, thresholds];
    if let Some(failed) = checks.iter().find(|c| !c.passed()) {
        note(failed.name, Vec::new(), None);
    }
    VerificationReport {
        instance: Some(InstanceSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            terminals: t.names(g).map(str::to_owned).collect(),
            mode: a.mode,
            k: a.config.as_ref().filter(|_| a.mode.needs_k()).map(|c| c.k),
            threshold: a.config.as_ref().map(|c| c.threshold),
            cut_size: a.cut_size(),
            classes: a.classes.len(),
            crossing_pairs: a.crossing_pairs.len(),
            structures: a.structures.len(),
            cactus_vertices: c.vertex_count(),
            cactus_cuts: min_cuts.len(),
        }),
        checks,
        counterexample,
    }
}

/// Cross-checks the connectivity-based thresholds against the definition.
pub fn thresholds_agree(g: &Multigraph, k: usize, budget: &Budget) -> Result<bool> {
    let thin = brute_thinness(g, k, budget)?;
    let slim = brute_slimness(g, k, budget)?;
    let n = thinness_threshold(g, k);
    let thin_blocks_agree = match n {
        Some(n) => {
            let blocks: Vec<Vec<usize>> =
                inseparability_classes(g, n).blocks.iter().map(|b| b.iter().map(|v| v.0).collect()).collect();
            blocks == thin.blocks
        }
        None => thin.blocks.is_empty(),
    };
    let m = slimness_threshold(g, k, budget)?;
    let slim_blocks: Vec<Vec<usize>> = m
        .as_ref()
        .map(|p| p.blocks.iter().map(|b| b.iter().map(|v| v.0).collect()).collect())
        .unwrap_or_default();
    Ok(n == thin.threshold && thin_blocks_agree && m.map(|p| p.n) == slim.threshold && slim_blocks == slim.blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;

    #[test]
    fn oracle_counts() {
        let b = Budget::default();
        for (f, cuts, classes, crossing) in [(Fixture::F2, 6, 6, 1), (Fixture::F4, 8, 1, 0), (Fixture::F5, 10, 10, 5)] {
            let (g, t) = f.load();
            let o = brute_force_pipeline(&g, &t, &b).unwrap();
            assert_eq!((o.cuts.len(), o.classes.len(), o.crossing_pairs), (cuts, classes, crossing), "{}", f.name());
        }
    }

    #[test]
    fn fixtures_verify() {
        let b = Budget::default();
        for f in [Fixture::F1, Fixture::F2, Fixture::F3, Fixture::F4, Fixture::F5, Fixture::F2Pendant] {
            let (g, t) = f.load();
            let r = verify_instance(&g, &t, Mode::Ends, None, &b);
            assert!(r.passed(), "{}: {:?}", f.name(), r.checks);
            assert!(r.check("main_theorem").unwrap().executed > 0);
        }
        let f6 = Fixture::F6.graph();
        assert!(verify_instance(&f6, &TerminalSet::new(Vec::new()), Mode::Thin, Some(2), &b).passed());
        let f7 = Fixture::F7.graph();
        assert!(verify_instance(&f7, &TerminalSet::new(Vec::new()), Mode::Slim, Some(2), &b).passed());
    }

    #[test]
    fn swapped_images_are_caught() {
        let b = Budget::default();
        let (g, t) = Fixture::F2.load();
        let mut a = analyze(&g, &t, Mode::Ends, None, &b).unwrap();
        a.cactus.cut_map.swap(0, 5);
        let r = verify_analysis(&a, &b);
        assert!(!r.check("main_theorem").unwrap().passed());
        let ce = r.counterexample.unwrap();
        assert_eq!(ce.check, "main_theorem");
        assert!(ce.terminals.is_some());
    }

    #[test]
    fn brute_thresholds() {
        let b = Budget::default();
        let f6 = Fixture::F6.graph();
        assert_eq!(brute_thinness(&f6, 2, &b).unwrap().threshold, Some(1));
        assert!(thresholds_agree(&f6, 2, &b).unwrap());
        let f7 = Fixture::F7.graph();
        assert_eq!(brute_slimness(&f7, 2, &b).unwrap().threshold, Some(1));
        assert_eq!(brute_slimness(&Fixture::F2.graph(), 2, &b).unwrap().threshold, None);
        assert_eq!(brute_global_min_cuts(&Fixture::F2.graph(), &b).unwrap(), (2, 6));
        let slim = brute_system(&f7, Mode::Slim, 2, &b).unwrap();
        assert_eq!((slim.threshold, slim.cuts, slim.classes), (Some(1), 2, 1));
        assert_eq!(slim.block_sizes, [2, 1, 2]);
    }
}
