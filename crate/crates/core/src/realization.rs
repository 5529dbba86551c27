//! Deciding which invariant triples occur and building fronts that realize them.
//!
//! The theta construction starts with three parallel strands leaving `a`
//! (`e1` on top), applies plain zigzags to each edge, then a short skeleton of
//! gadgets that permute the strands before they enter `b`:
//!
//! * `Cross`: a single crossing between two neighbouring strands;
//! * `UpperLoop`: the upper strand makes a zigzag that threads under the lower one;
//! * `LowerLoop`: the mirror image, threaded by the lower strand.
//!
//! Each gadget swaps the two strands. Extra pairs of crossings between two
//! neighbouring strands lower the tb of the cycle through them by 2.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{vertex_cyclic_order, Event, FrontDiagram};
use crate::invariants::{invariant_vector, InvariantVector};

/// Whether a Legendrian unknot with these invariants exists.
pub fn acceptable(tb: i32, rot: i32) -> bool {
    tb + rot.abs() <= -1 && (tb - rot).rem_euclid(2) == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum Unrealizable {
    #[error("acceptable fails for cycle {cycle}: (tb, rot) = ({tb}, {rot})")]
    NotAcceptable { cycle: usize, tb: i32, rot: i32 },
    #[error("R = rot1 - rot2 + rot3 = {r} is not in {{0, -1}}")]
    BadR { r: i32 },
    #[error("no construction found within the search bounds")]
    SearchExhausted,
}

/// Checks realizability and returns the lowest-numbered of the six
/// conditions on `r_i = |rot_i|` that holds.
pub fn theta_realizable(tbv: [i32; 3], rotv: [i32; 3]) -> Result<u8, Unrealizable> {
    for i in 0..3 {
        if !acceptable(tbv[i], rotv[i]) {
            return Err(Unrealizable::NotAcceptable {
                cycle: i + 1,
                tb: tbv[i],
                rot: rotv[i],
            });
        }
    }
    let r = rotv[0] - rotv[1] + rotv[2];
    if r != 0 && r != -1 {
        return Err(Unrealizable::BadR { r });
    }
    Ok(condition(rotv.map(i32::abs))
        .expect("every realizable rot triple meets one of the six conditions"))
}

fn condition([r1, r2, r3]: [i32; 3]) -> Option<u8> {
    let checks = [
        r1 >= r2 + r3,
        r2 >= r1 + r3,
        r3 >= r1 + r2,
        r1 + 1 == r2 + r3,
        r2 + 1 == r1 + r3,
        r3 + 1 == r1 + r2,
    ];
    checks.iter().position(|&c| c).map(|p| p as u8 + 1)
}

/// A Legendrian unknot in the standard form for `(tb, rot)`, in knot mode.
pub fn standard_unknot(tb: i32, rot: i32) -> Result<FrontDiagram, Unrealizable> {
    if !acceptable(tb, rot) {
        return Err(Unrealizable::NotAcceptable { cycle: 1, tb, rot });
    }
    let left = || Event::LeftCusp {
        level: 0,
        edge: "K".into(),
    };
    let mut events = vec![left()];
    let crossings = if rot == 0 {
        -(tb + 1)
    } else {
        let s = rot.abs();
        let t = -(tb + s + 1) / 2;
        for _ in 1..s {
            events.push(left());
            events.push(Event::RightCusp { level: 1 });
        }
        2 * t + 1
    };
    events.extend((0..crossings).map(|_| Event::Crossing { level: 0 }));
    events.push(Event::RightCusp { level: 0 });
    Ok(FrontDiagram::knot(rot >= 0, events))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gadget {
    Cross,
    UpperLoop,
    LowerLoop,
}

/// A gadget applied to the strands at positions `pos` and `pos + 1`,
/// counted from the top (0 = top pair).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SkeletonOp {
    pub gadget: Gadget,
    pub pos: usize,
}

impl fmt::Display for SkeletonOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.gadget {
            Gadget::Cross => "cross",
            Gadget::UpperLoop => "upper-loop",
            Gadget::LowerLoop => "lower-loop",
        };
        write!(f, "{g}@{}", self.pos)
    }
}

/// Pairs of edges in cycle order: (e1,e2), (e1,e3), (e2,e3).
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    PAIRS
        .iter()
        .position(|&p| p == (i, j))
        .expect("distinct edges")
}

/// Everything needed to rebuild a realization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationPlan {
    /// Lowest satisfied condition among the six on `|rot_i|`.
    pub case: u8,
    /// Net plain zigzags per edge; positive values raise the rot of every
    /// cycle that runs along the edge from `a` to `b`.
    pub stabilizations: [i32; 3],
    pub skeleton: Vec<SkeletonOp>,
    /// Extra crossing pairs per edge pair, indexed like [`PAIRS`].
    pub bounces: [u32; 3],
    /// `|rot_i|`.
    pub r: [u32; 3],
}

/// Bookkeeping for one skeleton.
#[derive(Clone, Debug)]
struct SkeletonSummary {
    ops: Vec<SkeletonOp>,
    /// Top-to-bottom edge order at `b`.
    order: [usize; 3],
    /// Signed in-cycle crossings per pair.
    crossings: [i32; 3],
    /// Net rot contributed to each edge along its orientation.
    twist: [i32; 3],
    cusps: [i32; 3],
    /// Pairs that are neighbours at some point of the skeleton.
    adjacent: [bool; 3],
}

fn summarize(ops: &[SkeletonOp]) -> SkeletonSummary {
    let mut order = [0, 1, 2];
    let mut crossings = [0; 3];
    let mut twist = [0; 3];
    let mut cusps = [0; 3];
    let mut adjacent = [false; 3];
    let mark = |order: &[usize; 3], adjacent: &mut [bool; 3]| {
        adjacent[pair_index(order[0], order[1])] = true;
        adjacent[pair_index(order[1], order[2])] = true;
    };
    mark(&order, &mut adjacent);
    for op in ops {
        let (u, d) = (order[op.pos], order[op.pos + 1]);
        let p = pair_index(u, d);
        match op.gadget {
            Gadget::Cross => crossings[p] -= 1,
            Gadget::UpperLoop => {
                crossings[p] += 1;
                twist[u] += 1;
                cusps[u] += 2;
            }
            Gadget::LowerLoop => {
                crossings[p] += 1;
                twist[d] -= 1;
                cusps[d] += 2;
            }
        }
        order.swap(op.pos, op.pos + 1);
        mark(&order, &mut adjacent);
    }
    SkeletonSummary {
        ops: ops.to_vec(),
        order,
        crossings,
        twist,
        cusps,
        adjacent,
    }
}

/// Corner correction for each cycle: 0 when its first edge is above its
/// second at `b`, otherwise -1.
fn corner_offsets(order: &[usize; 3]) -> [i32; 3] {
    let pos = |e: usize| order.iter().position(|&x| x == e).expect("edge present");
    PAIRS.map(|(i, j)| if pos(i) < pos(j) { 0 } else { -1 })
}

fn skeletons() -> Vec<SkeletonSummary> {
    let gadgets = [Gadget::Cross, Gadget::UpperLoop, Gadget::LowerLoop];
    let alphabet: Vec<SkeletonOp> = gadgets
        .iter()
        .flat_map(|&gadget| (0..2).map(move |pos| SkeletonOp { gadget, pos }))
        .collect();
    let mut words: Vec<Vec<SkeletonOp>> = vec![vec![]];
    let mut frontier = words.clone();
    for _ in 0..3 {
        let next: Vec<Vec<SkeletonOp>> = frontier
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |op| {
                    let mut w = w.clone();
                    w.push(*op);
                    w
                })
            })
            .collect();
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words.iter().map(|w| summarize(w)).collect()
}

/// The shift that sets the preferred edge's zigzag count to zero.
fn preferred_shift(case: u8, rotv: [i32; 3], beta: [i32; 3], twist: [i32; 3]) -> i32 {
    match case {
        2 | 5 => -(rotv[2] - beta[2] - (twist[1] - twist[2])),
        3 | 6 => -(rotv[1] - beta[1] - (twist[0] - twist[2])),
        _ => 0,
    }
}

/// Finds a construction for the given triples.
pub fn plan_theta(tbv: [i32; 3], rotv: [i32; 3]) -> Result<RealizationPlan, Unrealizable> {
    let case = theta_realizable(tbv, rotv)?;
    let r = rotv[0] - rotv[1] + rotv[2];
    let bound = tbv.iter().chain(&rotv).map(|x| x.abs()).sum::<i32>() + 4;
    for sk in skeletons() {
        let beta = corner_offsets(&sk.order);
        if beta[0] - beta[1] + beta[2] != r {
            continue;
        }
        let pref = preferred_shift(case, rotv, beta, sk.twist);
        let mut shifts: Vec<i32> = (-bound..=bound).collect();
        shifts.sort_by_key(|t| ((t - pref).abs(), *t));
        'shift: for t in shifts {
            let s3 = t;
            let s2 = rotv[2] - beta[2] - (sk.twist[1] - sk.twist[2]) + s3;
            let s1 = rotv[1] - beta[1] - (sk.twist[0] - sk.twist[2]) + s3;
            let s = [s1, s2, s3];
            let mut bounces = [0u32; 3];
            for (p, &(i, j)) in PAIRS.iter().enumerate() {
                let twice = sk.crossings[p]
                    - 1
                    - (sk.cusps[i] + sk.cusps[j]) / 2
                    - s[i].abs()
                    - s[j].abs()
                    - tbv[p];
                if twice < 0 || twice % 2 != 0 || (twice > 0 && !sk.adjacent[p]) {
                    continue 'shift;
                }
                bounces[p] = (twice / 2) as u32;
            }
            return Ok(RealizationPlan {
                case,
                stabilizations: s,
                skeleton: sk.ops.clone(),
                bounces,
                r: rotv.map(|x| x.unsigned_abs()),
            });
        }
    }
    Err(Unrealizable::SearchExhausted)
}

const NAMES: [&str; 3] = ["e1", "e2", "e3"];

/// Event word for a plan.
pub fn build(plan: &RealizationPlan) -> FrontDiagram {
    let mut ev = vec![Event::Vertex {
        name: "a".into(),
        level: 0,
        left: 0,
        right: 3,
        labels: vec!["e3".into(), "e2".into(), "e1".into()],
    }];
    for (edge, &s) in plan.stabilizations.iter().enumerate() {
        let level = 2 - edge;
        for _ in 0..s.unsigned_abs() {
            if s > 0 {
                ev.push(Event::LeftCusp {
                    level,
                    edge: NAMES[edge].into(),
                });
                ev.push(Event::RightCusp { level: level + 1 });
            } else {
                ev.push(Event::LeftCusp {
                    level: level + 1,
                    edge: NAMES[edge].into(),
                });
                ev.push(Event::RightCusp { level });
            }
        }
    }
    let mut order = [0usize, 1, 2];
    let mut pending = plan.bounces;
    let flush = |order: &[usize; 3], pending: &mut [u32; 3], ev: &mut Vec<Event>| {
        for pos in 0..2 {
            let p = pair_index(order[pos], order[pos + 1]);
            for _ in 0..std::mem::take(&mut pending[p]) {
                ev.push(Event::Crossing { level: 1 - pos });
                ev.push(Event::Crossing { level: 1 - pos });
            }
        }
    };
    flush(&order, &mut pending, &mut ev);
    for op in &plan.skeleton {
        let k = 1 - op.pos;
        let (u, d) = (order[op.pos], order[op.pos + 1]);
        match op.gadget {
            Gadget::Cross => ev.push(Event::Crossing { level: k }),
            Gadget::UpperLoop => ev.extend([
                Event::LeftCusp {
                    level: k,
                    edge: NAMES[u].into(),
                },
                Event::Crossing { level: k + 1 },
                Event::RightCusp { level: k + 2 },
            ]),
            Gadget::LowerLoop => ev.extend([
                Event::LeftCusp {
                    level: k + 2,
                    edge: NAMES[d].into(),
                },
                Event::Crossing { level: k + 1 },
                Event::RightCusp { level: k },
            ]),
        }
        order.swap(op.pos, op.pos + 1);
        flush(&order, &mut pending, &mut ev);
    }
    debug_assert_eq!(pending, [0; 3]);
    ev.push(Event::Vertex {
        name: "b".into(),
        level: 0,
        left: 3,
        right: 0,
        labels: vec![],
    });
    FrontDiagram::theta(ev)
}

/// A theta front with the requested invariant vector. The result is checked
/// against the request before it is returned.
pub fn realize_theta(tbv: [i32; 3], rotv: [i32; 3]) -> Result<FrontDiagram, Unrealizable> {
    let (d, _) = realize_with_plan(tbv, rotv)?;
    Ok(d)
}

pub fn realize_with_plan(
    tbv: [i32; 3],
    rotv: [i32; 3],
) -> Result<(FrontDiagram, RealizationPlan), Unrealizable> {
    let plan = plan_theta(tbv, rotv)?;
    let d = build(&plan);
    let got = invariant_vector(&d).expect("constructed diagram is valid");
    assert_eq!(
        got,
        InvariantVector::new(tbv, rotv),
        "construction mismatch for plan {plan:?}"
    );
    Ok((d, plan))
}

/// Renames edges in a theta diagram by a permutation of `e1, e2, e3`.
pub fn relabel(d: &FrontDiagram, perm: [usize; 3]) -> FrontDiagram {
    let map = |l: &str| -> String {
        match NAMES.iter().position(|n| *n == l) {
            Some(i) => NAMES[perm[i]].to_string(),
            None => l.to_string(),
        }
    };
    let mut out = d.clone();
    for e in &mut out.events {
        match e {
            Event::LeftCusp { edge, .. } => *edge = map(edge),
            Event::Vertex { labels, .. } => {
                for l in labels.iter_mut() {
                    *l = map(l);
                }
            }
            _ => {}
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Not Legendrian isotopic.
    Distinguished,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distinction {
    pub verdict: Verdict,
    pub reason: String,
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Compares two theta fronts through the cyclic order of edges at each
/// vertex. Every edge relabelling that carries one invariant vector onto the
/// other (tb exactly, rot up to the sign fixed by cycle orientation) is
/// tried; the pair is distinguished when each such relabelling breaks the
/// cyclic order at some vertex.
pub fn distinguish_by_cyclic_order(d1: &FrontDiagram, d2: &FrontDiagram) -> Distinction {
    let inconclusive = |reason: String| Distinction {
        verdict: Verdict::Inconclusive,
        reason,
    };
    let (Ok(v1), Ok(v2)) = (invariant_vector(d1), invariant_vector(d2)) else {
        return inconclusive("a diagram is not a valid theta front".into());
    };
    let (g1, g2) = (
        d1.validate().expect("validated"),
        d2.validate().expect("validated"),
    );
    let mut tried = 0;
    for perm in PERMS {
        // Cycle (ei, ej) maps to the cycle on (perm i, perm j).
        let matches = PAIRS.iter().enumerate().all(|(p, &(i, j))| {
            let q = pair_index(perm[i], perm[j]);
            let flip = if perm[i] < perm[j] { 1 } else { -1 };
            v1.tb[p] == v2.tb[q] && v1.rot[p] * flip == v2.rot[q]
        });
        if !matches {
            continue;
        }
        tried += 1;
        let same = ["a", "b"].iter().all(|v| {
            let o1 = vertex_cyclic_order(d1, &g1, v).expect("theta vertex");
            let o2 = vertex_cyclic_order(d2, &g2, v).expect("theta vertex");
            let mapped = crate::diagram::CyclicOrder(
                o1.0.iter()
                    .map(|l| {
                        NAMES[perm[NAMES.iter().position(|n| n == l).expect("theta edge")]]
                            .to_string()
                    })
                    .collect(),
            );
            mapped.same_as(&o2)
        });
        if same {
            return inconclusive(format!(
                "edge correspondence {} preserves invariants and cyclic orders",
                perm.map(|i| NAMES[i]).join(",")
            ));
        }
    }
    if tried == 0 {
        return inconclusive("invariant vectors do not correspond".into());
    }
    Distinction {
        verdict: Verdict::Distinguished,
        reason: format!(
            "invariant vectors agree under {tried} edge correspondence(s), each of which breaks the cyclic edge order at a vertex"
        ),
    }
}

/// The pair of fronts from the cyclic-order obstruction: equal invariant
/// vectors `tb = (-1,-5,-3)`, `rot = 0`, opposite cyclic orders at `a`.
pub fn cyclic_order_pair() -> (FrontDiagram, FrontDiagram) {
    let g = realize_theta([-1, -5, -3], [0, 0, 0]).expect("realizable");
    let swapped = realize_theta([-5, -1, -3], [0, 0, 0]).expect("realizable");
    (g, relabel(&swapped, [0, 2, 1]))
}
