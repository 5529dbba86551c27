//! Invariance checks along seeded random move walks.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::{vertex_cyclic_order, CyclicOrder, DiagramError, FrontDiagram};
use crate::invariants::{classify_r, invariant_vector_of, InvariantVector};
use crate::moves::{apply_move, random_walk, standardize, MoveSite};
use crate::ribbon::{
    components_of, expected_self_linking, push_off_of, vertex_type_of, VertexType,
};

/// Names of the checks, in report order.
pub const CHECKS: [&str; 7] = [
    "valid",
    "invariant_vector",
    "r_value",
    "table_row",
    "cyclic_order",
    "push_off_components",
    "self_linking",
];

/// Everything the checks compare against, read off one diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub vector: InvariantVector,
    /// Table row after rotating into standard form, when that is possible.
    pub row: Option<u8>,
    pub orders: (CyclicOrder, CyclicOrder),
    pub vertex_type: VertexType,
    pub components: usize,
    /// Per push-off component: (self-linking, expected value).
    pub self_linking: Vec<(i32, Option<i32>)>,
}

pub fn snapshot(d: &FrontDiagram) -> Result<Snapshot, DiagramError> {
    let g = d.validate()?;
    let vector = invariant_vector_of(d, &g)?;
    let row = standardize(d)
        .ok()
        .and_then(|s| classify_r(&s).ok())
        .map(|r| r.case);
    let orders = (
        vertex_cyclic_order(d, &g, "a")?,
        vertex_cyclic_order(d, &g, "b")?,
    );
    let vertex_type = vertex_type_of(d, &g)?;
    let l = push_off_of(d, &g);
    let a = l.analyze().expect("push-off is a closed oriented diagram");
    let self_linking = if a.components == 1 {
        vec![(a.self_writhe(0).expect("one component"), Some(1))]
    } else {
        components_of(&l, &a)
            .expect("push-off is a closed oriented diagram")
            .iter()
            .map(|c| (c.self_linking, expected_self_linking(d, &g, &c.edges)))
            .collect()
    };
    Ok(Snapshot {
        vector,
        row,
        orders,
        vertex_type,
        components: a.components,
        self_linking,
    })
}

/// Which checks fail for `now`, measured against the walk's start.
fn failures(start: &Snapshot, now: &Snapshot) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();
    if now.vector != start.vector {
        out.push((
            "invariant_vector",
            format!("{:?} became {:?}", start.vector, now.vector),
        ));
    }
    if !matches!(now.vector.r, 0 | -1) {
        out.push(("r_value", format!("R = {}", now.vector.r)));
    }
    match now.row {
        Some(1 | 2 | 4 | 5 | 7 | 8) => {}
        other => out.push(("table_row", format!("row {other:?}"))),
    }
    if !(now.orders.0.same_as(&start.orders.0) && now.orders.1.same_as(&start.orders.1)) {
        out.push((
            "cyclic_order",
            format!("{:?} became {:?}", start.orders, now.orders),
        ));
    }
    let want = match now.vertex_type {
        VertexType::Parallel => 1,
        VertexType::Antiparallel => 3,
    };
    if now.components != start.components || now.components != want {
        out.push((
            "push_off_components",
            format!(
                "{} components for a {:?} diagram",
                now.components, now.vertex_type
            ),
        ));
    }
    if now.self_linking.iter().any(|(sl, want)| Some(*sl) != *want) {
        out.push(("self_linking", format!("{:?}", now.self_linking)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub check: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkFailure {
    pub walk: usize,
    pub seed: u64,
    /// Number of moves applied when the check failed.
    pub step: usize,
    pub check: &'static str,
    pub detail: String,
    /// The moves up to and including the failing one.
    pub trace: Vec<MoveSite>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub walks: usize,
    pub steps: usize,
    pub seed: u64,
    pub tallies: Vec<Tally>,
    /// How often each table row was seen, over all checked diagrams.
    pub rows: BTreeMap<u8, usize>,
    /// First failure of each failing walk.
    pub failures: Vec<WalkFailure>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct WalkOutcome {
    checked: usize,
    failed: BTreeMap<&'static str, usize>,
    rows: BTreeMap<u8, usize>,
    first: Option<WalkFailure>,
}

/// Seed of walk `k` in a run seeded with `seed`.
pub fn walk_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add(k as u64)
}

fn run_walk(d: &FrontDiagram, start: &Snapshot, k: usize, steps: usize, seed: u64) -> WalkOutcome {
    let s = walk_seed(seed, k);
    let walk = random_walk(d, steps, s);
    let mut out = WalkOutcome {
        checked: 0,
        failed: BTreeMap::new(),
        rows: BTreeMap::new(),
        first: None,
    };
    let mut cur = d.clone();
    for (step, site) in walk.trace.iter().enumerate() {
        let fail = |check: &'static str, detail: String| WalkFailure {
            walk: k,
            seed: s,
            step: step + 1,
            check,
            detail,
            trace: walk.trace[..=step].to_vec(),
        };
        out.checked += 1;
        cur = match apply_move(&cur, site) {
            Ok(next) => next,
            Err(e) => {
                *out.failed.entry("valid").or_default() += 1;
                out.first
                    .get_or_insert_with(|| fail("valid", e.to_string()));
                break;
            }
        };
        let now = match snapshot(&cur) {
            Ok(now) => now,
            Err(e) => {
                *out.failed.entry("valid").or_default() += 1;
                out.first
                    .get_or_insert_with(|| fail("valid", e.to_string()));
                break;
            }
        };
        if let Some(r) = now.row {
            *out.rows.entry(r).or_default() += 1;
        }
        for (check, detail) in failures(start, &now) {
            *out.failed.entry(check).or_default() += 1;
            out.first.get_or_insert_with(|| fail(check, detail));
        }
    }
    out
}

/// Runs `walks` random walks of `steps` moves from `d`, checking every
/// diagram along the way. Walk `k` uses seed `seed + k`.
pub fn fuzz(
    d: &FrontDiagram,
    walks: usize,
    steps: usize,
    seed: u64,
) -> Result<FuzzReport, DiagramError> {
    let start = snapshot(d)?;
    let outcomes: Vec<WalkOutcome> = (0..walks)
        .into_par_iter()
        .map(|k| run_walk(d, &start, k, steps, seed))
        .collect();
    let checked: usize = outcomes.iter().map(|o| o.checked).sum();
    let tallies = CHECKS
        .iter()
        .map(|&check| {
            let failed: usize = outcomes
                .iter()
                .map(|o| o.failed.get(check).copied().unwrap_or(0))
                .sum();
            Tally {
                check,
                passed: checked - failed.min(checked),
                failed,
            }
        })
        .collect();
    let mut rows = BTreeMap::new();
    for o in &outcomes {
        for (r, n) in &o.rows {
            *rows.entry(*r).or_default() += n;
        }
    }
    Ok(FuzzReport {
        walks,
        steps,
        seed,
        tallies,
        rows,
        failures: outcomes.into_iter().filter_map(|o| o.first).collect(),
    })
}
