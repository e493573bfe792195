#![allow(dead_code)]

use cutcactus::cuts::Budget;
use cutcactus::fixtures::Fixture;
use cutcactus::generalized::Mode;
use cutcactus::graph::{Multigraph, TerminalSet};
use cutcactus::random::random_instance;

pub struct Instance {
    pub name: String,
    pub graph: Multigraph,
    pub terminals: TerminalSet,
    pub mode: Mode,
    pub k: Option<usize>,
}

/// Budget for the corpus: any cut size a 12-edge graph can have.
pub fn corpus_budget() -> Budget {
    Budget { max_vertices: 10, max_edges: 16, max_cut_size: 12 }
}

/// Parameters of random instance `i`: 2 to 7 vertices, up to 12 edges,
/// 2 to 5 terminals.
pub fn random_params(i: u64) -> (usize, usize, usize) {
    let n = 2 + (i % 6) as usize;
    let lo = n - 1;
    let m = lo + ((i / 6) as usize) % (12 - lo + 1);
    let t = 2 + ((i / 7) as usize) % (n.min(5) - 1);
    (n, m, t)
}

pub fn random_corpus(count: u64) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let (n, m, t) = random_params(i);
            let (graph, terminals) = random_instance(n, m, t, i).unwrap();
            Instance { name: format!("random#{i} ({n},{m},{t})"), graph, terminals, mode: Mode::Ends, k: None }
        })
        .collect()
}

/// F1 to F7 under their natural modes.
pub fn fixture_corpus() -> Vec<Instance> {
    let natural = [
        (Fixture::F1, Mode::Ends, None),
        (Fixture::F2, Mode::Ends, None),
        (Fixture::F3, Mode::Ends, None),
        (Fixture::F4, Mode::Ends, None),
        (Fixture::F5, Mode::Ends, None),
        (Fixture::F6, Mode::Thin, Some(2)),
        (Fixture::F7, Mode::Slim, Some(2)),
    ];
    natural
        .into_iter()
        .map(|(f, mode, k)| {
            let (graph, terminals) = f.load();
            Instance { name: f.name().to_owned(), graph, terminals, mode, k }
        })
        .collect()
}

pub fn full_corpus() -> Vec<Instance> {
    let mut all = fixture_corpus();
    all.extend(random_corpus(500));
    all
}
