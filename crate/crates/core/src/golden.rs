//! The golden file: oracle values and cactus shapes for the fixture corpus.

use serde::{Deserialize, Serialize};

use crate::cuts::Budget;
use crate::error::Result;
use crate::fixtures::Fixture;
use crate::generalized::Mode;
use crate::oracle::{brute_force_pipeline, brute_system, verify_analysis};
use crate::pipeline::analyze;
use crate::report::{canonical_form, CanonicalForm};

/// The (fixture, mode, k) runs recorded in the golden file.
pub const CASES: [(Fixture, Mode, Option<usize>); 14] = [
    (Fixture::F1, Mode::Ends, None),
    (Fixture::F2, Mode::Ends, None),
    (Fixture::F3, Mode::Ends, None),
    (Fixture::F4, Mode::Ends, None),
    (Fixture::F5, Mode::Ends, None),
    (Fixture::F2Pendant, Mode::Ends, None),
    (Fixture::F2, Mode::Global, None),
    (Fixture::F2, Mode::Slim, Some(2)),
    (Fixture::F6, Mode::Thin, Some(2)),
    (Fixture::F6, Mode::Global, None),
    (Fixture::F6, Mode::Slim, Some(4)),
    (Fixture::F7, Mode::Slim, Some(2)),
    (Fixture::F7, Mode::Global, None),
    (Fixture::K4, Mode::Thin, Some(2)),
];

/// Values computed by the brute-force oracle alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounts {
    pub threshold: Option<usize>,
    pub block_sizes: Option<Vec<usize>>,
    pub cut_size: Option<usize>,
    pub cuts: usize,
    pub classes: usize,
    pub crossing_pairs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub fixture: String,
    pub mode: String,
    pub k: Option<usize>,
    pub oracle: OracleCounts,
    /// Shape of the verified cactus; absent when the pipeline refuses the run.
    pub cactus: Option<CanonicalForm>,
    pub error: Option<String>,
}

pub fn oracle_counts(fixture: Fixture, mode: Mode, k: Option<usize>, budget: &Budget) -> Result<OracleCounts> {
    let (g, t) = fixture.load();
    if mode == Mode::Ends {
        let o = brute_force_pipeline(&g, &t, budget)?;
        return Ok(OracleCounts {
            threshold: None,
            block_sizes: None,
            cut_size: o.cut_size,
            cuts: o.cuts.len(),
            classes: o.classes.len(),
            crossing_pairs: Some(o.crossing_pairs),
        });
    }
    let s = brute_system(&g, mode, k.unwrap_or(1), budget)?;
    Ok(OracleCounts {
        threshold: s.threshold,
        block_sizes: Some(s.block_sizes),
        cut_size: s.threshold.filter(|_| s.cuts > 0),
        cuts: s.cuts,
        classes: s.classes,
        crossing_pairs: None,
    })
}

pub fn golden_entry(fixture: Fixture, mode: Mode, k: Option<usize>, budget: &Budget) -> Result<GoldenEntry> {
    let oracle = oracle_counts(fixture, mode, k, budget)?;
    let (g, t) = fixture.load();
    let (cactus, error) = match analyze(&g, &t, mode, k, budget) {
        Ok(a) => {
            let report = verify_analysis(&a, budget);
            if report.passed() {
                (Some(canonical_form(&a.cactus)), None)
            } else {
                (None, Some("verification failed".to_owned()))
            }
        }
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(GoldenEntry { fixture: fixture.name().to_owned(), mode: mode.as_str().to_owned(), k, oracle, cactus, error })
}

/// The golden file text: one JSON object per line.
pub fn generate_golden(budget: &Budget) -> Result<String> {
    let mut out = String::new();
    for (f, mode, k) in CASES {
        out.push_str(&serde_json::to_string(&golden_entry(f, mode, k, budget)?)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenEntry>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}
