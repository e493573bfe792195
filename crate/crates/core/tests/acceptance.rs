//! Acceptance criteria, one test per criterion. Each prints a single
//! PASS/FAIL line with the measured counts.

mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::{corpus_budget, full_corpus, random_corpus, Instance};
use cutcactus::cactus::{cactus_isomorphic_where, cactus_min_cuts, cut_maps_compatible};
use cutcactus::cuts::{Budget, Side};
use cutcactus::fixtures::Fixture;
use cutcactus::generalized::{slimness_threshold, thinness_threshold, Mode};
use cutcactus::golden::{generate_golden, parse_golden};
use cutcactus::graph::{GraphDocument, TerminalSet};
use cutcactus::oracle::{brute_global_min_cuts, thresholds_agree, verify_analysis, VerificationReport};
use cutcactus::pipeline::{analyze, Analysis};
use cutcactus::random::random_instance;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Verified {
    name: String,
    analysis: Analysis,
    report: VerificationReport,
}

struct Corpus {
    runs: Vec<Verified>,
    elapsed: Duration,
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let budget = corpus_budget();
        let runs = full_corpus()
            .into_iter()
            .map(|Instance { name, graph, terminals, mode, k }| {
                let analysis = analyze(&graph, &terminals, mode, k, &budget)
                    .unwrap_or_else(|e| panic!("{name}: pipeline failed: {e}"));
                let report = verify_analysis(&analysis, &budget);
                Verified { name, analysis, report }
            })
            .collect();
        Corpus { runs, elapsed: start.elapsed() }
    })
}

fn verdict(criterion: &str, failures: &[String], detail: String) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("{criterion}: {status} ({detail})");
    for f in failures.iter().take(40) {
        println!("  {f}");
    }
    assert!(failures.is_empty(), "{criterion}: {} failures, first: {}", failures.len(), failures[0]);
}

fn check_failures(name: &str) -> (usize, Vec<String>) {
    let mut executed = 0;
    let mut failures = Vec::new();
    for run in &corpus().runs {
        let check = run.report.check(name).expect("every report lists every check");
        executed += check.executed;
        failures.extend(check.failures.iter().map(|f| format!("{}: {f}", run.name)));
    }
    (executed, failures)
}

#[test]
fn criterion_1_main_theorem() {
    let c = corpus();
    let (executed, mut failures) = check_failures("main_theorem");
    if c.elapsed >= Duration::from_secs(300) {
        failures.push(format!("corpus took {:?}", c.elapsed));
    }
    let random = c.runs.iter().filter(|r| r.name.starts_with("random")).count();
    if random < 500 {
        failures.push(format!("only {random} random instances"));
    }
    verdict(
        "criterion 1 main theorem",
        &failures,
        format!("{} instances, {executed} separation checks, {:.1?}", c.runs.len(), c.elapsed),
    );
}

#[test]
fn criterion_2_lemma_basic() {
    let (executed, mut failures) = check_failures("lemma_basic");
    if executed == 0 {
        failures.push("no crossing pair in the corpus".into());
    }
    verdict("criterion 2 crossing structure", &failures, format!("{executed} crossing representative pairs"));
}

#[test]
fn criterion_3_pretree_axioms() {
    let (executed, failures) = check_failures("pretree_axioms");
    verdict("criterion 3 pretree axioms", &failures, format!("{executed} triples and quadruples"));
}

#[test]
fn criterion_4_bijection_counts() {
    let (executed, mut failures) = check_failures("bijection");
    let golden = parse_golden(include_str!("../golden/fixtures.jsonl")).unwrap();
    let expected = [("f1", 1), ("f2", 6), ("f3", 5), ("f4", 1), ("f5", 10)];
    for (fixture, count) in expected {
        let entry = golden.iter().find(|e| e.fixture == fixture && e.mode == "ends").unwrap();
        if entry.oracle.classes != count {
            failures.push(format!("{fixture}: oracle finds {} classes, criterion says {count}", entry.oracle.classes));
        }
        let run = corpus().runs.iter().find(|r| r.name == fixture).unwrap();
        let cuts = cactus_min_cuts(&run.analysis.cactus).len();
        if run.analysis.classes.len() != entry.oracle.classes || cuts != entry.oracle.classes {
            failures.push(format!("{fixture}: {} classes, {cuts} cactus cuts", run.analysis.classes.len()));
        }
    }
    verdict("criterion 4 bijection counts", &failures, format!("{executed} count checks, fixtures {expected:?}"));
}

#[test]
fn criterion_5_odd_cardinality() {
    let mut failures = Vec::new();
    let mut odd = 0;
    for run in &corpus().runs {
        let a = &run.analysis;
        if a.mode == Mode::Slim || a.cut_size().is_none_or(|s| s % 2 == 0) {
            continue;
        }
        odd += 1;
        if !a.crossing_pairs.is_empty() || !a.cactus.cycles.is_empty() {
            failures.push(format!("{}: {} crossing pairs, {} cycles", run.name, a.crossing_pairs.len(), a.cactus.cycles.len()));
        }
    }
    if odd == 0 {
        failures.push("no odd instance in the corpus".into());
    }
    verdict("criterion 5 odd cardinality", &failures, format!("{odd} odd-cardinality instances"));
}

/// Recomputes an instance under a vertex renaming and looks for a cactus
/// isomorphism that carries f and g along.
fn equivariant(seed: u64, inst: &Instance, budget: &Budget) -> Result<(), String> {
    let g = &inst.graph;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut targets: Vec<usize> = (0..g.vertex_count()).collect();
    targets.shuffle(&mut rng);
    let rename: BTreeMap<String, String> =
        g.vertices().map(|v| (g.vertex_name(v).to_owned(), format!("u{}", targets[v.0]))).collect();
    let h = g.relabeled(|n| rename[n].clone()).map_err(|e| e.to_string())?;
    let ht = TerminalSet::new(inst.terminals.names(g).map(|n| h.vertex(&rename[n]).unwrap()).collect());
    let a = analyze(g, &inst.terminals, inst.mode, inst.k, budget).map_err(|e| e.to_string())?;
    let b = analyze(&h, &ht, inst.mode, inst.k, budget).map_err(|e| e.to_string())?;

    // terminal i of the first run is terminal perm[i] of the second
    let perm: Vec<usize> = (0..a.terminals.len())
        .map(|i| {
            let name = &rename[a.graph.vertex_name(a.terminals.vertex(i))];
            b.terminals.index_of(h.vertex(name).unwrap()).unwrap()
        })
        .collect();
    let side_names = |an: &Analysis, k: usize, map: &dyn Fn(usize) -> usize| {
        let bp = &an.classes[k].bipartition;
        let mut x: Vec<usize> = bp.side(Side::A).ones().map(map).collect();
        let mut y: Vec<usize> = bp.side(Side::B).ones().map(map).collect();
        x.sort();
        y.sort();
        if x < y { (x, y) } else { (y, x) }
    };
    let class_map: Vec<usize> = (0..a.classes.len())
        .map(|k| {
            let want = side_names(&a, k, &|i| perm[i]);
            (0..b.classes.len()).find(|&j| side_names(&b, j, &|i| i) == want).ok_or(format!("class c{k} has no image"))
        })
        .collect::<Result<_, _>>()?;
    if class_map.len() != b.classes.len() {
        return Err("class counts differ".into());
    }
    let fixed: Vec<(usize, usize)> = a
        .cactus
        .terminal_map
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, b.cactus.terminal_map[perm[i]]))
        .collect();
    let accept = |phi: &[usize]| cut_maps_compatible(&a.cactus, &b.cactus, phi, &class_map);
    cactus_isomorphic_where(&a.cactus, &b.cactus, &fixed, &accept)
        .map(|_| ())
        .ok_or_else(|| "no compatible isomorphism".into())
}

#[test]
fn criterion_6_automorphism_equivariance() {
    let budget = corpus_budget();
    let mut failures = Vec::new();
    let instances = random_corpus(50);
    for (i, inst) in instances.iter().enumerate() {
        if let Err(e) = equivariant(1000 + i as u64, inst, &budget) {
            failures.push(format!("{}: {e}", inst.name));
        }
    }
    for f in [Fixture::F2, Fixture::F3, Fixture::F5] {
        let (graph, terminals) = f.load();
        let inst = Instance { name: f.name().into(), graph, terminals, mode: Mode::Ends, k: None };
        if let Err(e) = equivariant(7, &inst, &budget) {
            failures.push(format!("{}: {e}", inst.name));
        }
    }
    verdict("criterion 6 automorphism equivariance", &failures, format!("{} relabelled instances", instances.len() + 3));
}

#[test]
fn criterion_7_thresholds() {
    let budget = corpus_budget();
    let mut failures = Vec::new();
    let f6 = Fixture::F6.graph();
    if thinness_threshold(&f6, 2) != Some(1) {
        failures.push("N(2) on f6 is not 1".into());
    }
    let f7 = Fixture::F7.graph();
    match slimness_threshold(&f7, 2, &budget) {
        Ok(Some(p)) if p.n == 1 => {}
        other => failures.push(format!("M(2) on f7: {other:?}")),
    }
    let slim = analyze(&f7, &TerminalSet::default(), Mode::Slim, Some(2), &budget).unwrap();
    if slim.classes.len() != 1 || slim.classes[0].representatives.len() != 2 {
        failures.push(format!("f7 slim: {} classes", slim.classes.len()));
    }
    let mut graphs: Vec<(String, cutcactus::graph::Multigraph)> =
        [Fixture::F2, Fixture::F6, Fixture::F7].iter().map(|f| (f.name().to_owned(), f.graph())).collect();
    graphs.extend(random_corpus(100).into_iter().map(|i| (i.name, i.graph)));
    let mut comparisons = 0;
    for (name, g) in &graphs {
        for k in 1..=3 {
            comparisons += 1;
            match thresholds_agree(g, k, &budget) {
                Ok(true) => {}
                Ok(false) => failures.push(format!("{name}, k={k}: thresholds disagree")),
                Err(e) => failures.push(format!("{name}, k={k}: {e}")),
            }
        }
        if g.vertex_count() >= 2 {
            comparisons += 1;
            let global = analyze(g, &TerminalSet::default(), Mode::Global, None, &budget);
            let (_, brute) = brute_global_min_cuts(g, &budget).unwrap();
            match global {
                Ok(a) if a.classes.len() == brute && a.classes.iter().all(|c| c.representatives.len() == 1) => {}
                Ok(a) => failures.push(format!("{name}: {} global classes vs {brute} cuts", a.classes.len())),
                Err(e) => failures.push(format!("{name}: global mode failed: {e}")),
            }
        }
    }
    verdict("criterion 7 thresholds", &failures, format!("{comparisons} comparisons on {} graphs", graphs.len()));
}

#[test]
fn criterion_8_determinism() {
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_cutcactus");
    let mut inputs: Vec<(String, Mode, Option<usize>)> = Vec::new();
    for f in Fixture::ALL {
        let path = dir.path().join(format!("{}.json", f.name()));
        std::fs::write(&path, f.json()).unwrap();
        let mode = match f {
            Fixture::F6 | Fixture::K4 => (Mode::Global, None),
            Fixture::F7 => (Mode::Slim, Some(2)),
            _ => (Mode::Ends, None),
        };
        inputs.push((path.to_string_lossy().into_owned(), mode.0, mode.1));
    }
    for seed in 0..5 {
        let (g, t) = random_instance(6, 10, 3, seed).unwrap();
        let path = dir.path().join(format!("random{seed}.json"));
        std::fs::write(&path, serde_json::to_string(&GraphDocument::from_graph(&g, &t)).unwrap()).unwrap();
        inputs.push((path.to_string_lossy().into_owned(), Mode::Ends, None));
    }
    for (input, mode, k) in &inputs {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("out{run}.json"));
            let dot = dir.path().join(format!("out{run}.dot"));
            let mut cmd = Command::new(bin);
            cmd.args(["build", "-i", input, "-m", mode.as_str(), "-o"]).arg(&out).arg("--dot").arg(&dot);
            if let Some(k) = k {
                cmd.args(["-k", &k.to_string()]);
            }
            let status = cmd.status().unwrap();
            if !status.success() {
                failures.push(format!("{input}: exit {status}"));
            }
            outputs.push((std::fs::read(&out).unwrap_or_default(), std::fs::read(&dot).unwrap_or_default()));
        }
        if outputs[0] != outputs[1] {
            failures.push(format!("{input}: outputs differ between runs"));
        }
    }
    let regenerated = generate_golden(&Budget::default()).unwrap();
    if regenerated != include_str!("../golden/fixtures.jsonl") {
        failures.push("golden file differs from a fresh oracle run".into());
    }
    verdict("criterion 8 determinism", &failures, format!("{} inputs built twice, golden file regenerated", inputs.len()));
}
