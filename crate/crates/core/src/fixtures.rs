//! The canonical small instances shipped with the crate.
//!
//! * `F1` path a–x–b, terminals {a, b}
//! * `F2` 4-cycle v1..v4, all vertices terminal
//! * `F3` two triangles sharing c, terminals {a1, a2, b1, b2}
//! * `F4` theta graph between u and w, terminals {u, w}
//! * `F5` 5-cycle, all vertices terminal
//! * `F6` two K4 blocks joined by a bridge, no terminals
//! * `F7` path p1..p5, no terminals
//! * `F2Pendant` F2 plus terminal p joined to v1 by two parallel edges
//! * `K4` a single K4, no terminals

use crate::graph::{parse_graph, Multigraph, TerminalSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixture {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F2Pendant,
    K4,
}

impl Fixture {
    pub const ALL: [Fixture; 9] = [
        Fixture::F1,
        Fixture::F2,
        Fixture::F3,
        Fixture::F4,
        Fixture::F5,
        Fixture::F6,
        Fixture::F7,
        Fixture::F2Pendant,
        Fixture::K4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::F1 => "f1",
            Fixture::F2 => "f2",
            Fixture::F3 => "f3",
            Fixture::F4 => "f4",
            Fixture::F5 => "f5",
            Fixture::F6 => "f6",
            Fixture::F7 => "f7",
            Fixture::F2Pendant => "f2_pendant",
            Fixture::K4 => "k4",
        }
    }

    pub fn from_name(name: &str) -> Option<Fixture> {
        Fixture::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn json(self) -> &'static str {
        match self {
            Fixture::F1 => include_str!("../fixtures/f1.json"),
            Fixture::F2 => include_str!("../fixtures/f2.json"),
            Fixture::F3 => include_str!("../fixtures/f3.json"),
            Fixture::F4 => include_str!("../fixtures/f4.json"),
            Fixture::F5 => include_str!("../fixtures/f5.json"),
            Fixture::F6 => include_str!("../fixtures/f6.json"),
            Fixture::F7 => include_str!("../fixtures/f7.json"),
            Fixture::F2Pendant => include_str!("../fixtures/f2_pendant.json"),
            Fixture::K4 => include_str!("../fixtures/k4.json"),
        }
    }

    pub fn load(self) -> (Multigraph, TerminalSet) {
        parse_graph(self.json()).expect("shipped fixtures are valid")
    }

    pub fn graph(self) -> Multigraph {
        self.load().0
    }

    pub fn terminals(self) -> TerminalSet {
        self.load().1
    }
}
