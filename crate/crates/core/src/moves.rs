//! Legendrian isotopy moves on graph fronts, as rewrites of the event word.
//!
//! Each move kind has one base pattern. The other reflections are obtained
//! by conjugating with the two front symmetries: the vertical flip
//! `z -> -z` and the horizontal flip `x -> -x`. A [`MoveSite`] records the
//! pattern position in the flipped word together with the flips, so
//! applying a site is `unflip(base(flip(d)))`. The catalog with pictures is
//! in `docs/moves.md`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{DiagramError, Event, FrontDiagram, Mode, Sweep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MoveKind {
    /// Two events with disjoint footprints trade places.
    Commute,
    /// A kink: cusp, crossing, cusp on a single strand.
    I,
    /// A cusp pokes through a neighbouring strand.
    II,
    /// Triple point.
    III,
    /// A vertex passes through a cusp.
    IV,
    /// A strand passes under (or over) a vertex.
    V,
    /// An edge at a vertex rotates to the other side of the vertex.
    VI,
}

impl MoveKind {
    pub const ALL: [MoveKind; 7] = [
        MoveKind::Commute,
        MoveKind::I,
        MoveKind::II,
        MoveKind::III,
        MoveKind::IV,
        MoveKind::V,
        MoveKind::VI,
    ];

    /// Kinds that keep cusps and vertex corners in place, so a diagram in
    /// standard form keeps its band-twist ledger exactly.
    pub fn keeps_vertex_corners(self) -> bool {
        matches!(self, MoveKind::II | MoveKind::III | MoveKind::V)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MoveSite {
    pub kind: MoveKind,
    /// Position of the pattern in the flipped word.
    pub index: usize,
    pub flip_v: bool,
    pub flip_h: bool,
    /// Reads the base pattern from its right-hand side to its left-hand side.
    pub inverse: bool,
    /// Kind-specific parameter: the strand level for an inserted kink, the
    /// below/above reading for a commutation, otherwise 0.
    pub param: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("stale move site: the pattern no longer matches at event {0}")]
    Stale(usize),
    #[error("moves act on graph fronts only")]
    KnotMode,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn widths(d: &FrontDiagram) -> Vec<usize> {
    let mut w = Vec::with_capacity(d.events.len() + 1);
    let mut cur = 0usize;
    for e in &d.events {
        w.push(cur);
        cur = cur + e.produced() - e.consumed();
    }
    w.push(cur);
    w
}

/// Mirror image under `z -> -z`.
pub fn flip_vertical(d: &FrontDiagram) -> FrontDiagram {
    let w = widths(d);
    let events = d
        .events
        .iter()
        .zip(&w)
        .map(|(e, &w)| match e {
            Event::LeftCusp { level, edge } => Event::LeftCusp {
                level: w - level,
                edge: edge.clone(),
            },
            Event::RightCusp { level } => Event::RightCusp {
                level: w - level - 2,
            },
            Event::Crossing { level } => Event::Crossing {
                level: w - level - 2,
            },
            Event::Vertex {
                name,
                level,
                left,
                right,
                labels,
            } => Event::Vertex {
                name: name.clone(),
                level: w - level - left,
                left: *left,
                right: *right,
                labels: labels.iter().rev().cloned().collect(),
            },
        })
        .collect();
    FrontDiagram {
        events,
        ..d.clone()
    }
}

/// Mirror image under `x -> -x`.
pub fn flip_horizontal(d: &FrontDiagram, sweep: &Sweep) -> FrontDiagram {
    let events = d
        .events
        .iter()
        .enumerate()
        .rev()
        .map(|(i, e)| match e {
            Event::LeftCusp { level, .. } => Event::RightCusp { level: *level },
            Event::RightCusp { level } => Event::LeftCusp {
                level: *level,
                edge: sweep.label_at(i, *level).to_string(),
            },
            Event::Crossing { level } => Event::Crossing { level: *level },
            Event::Vertex {
                name,
                level,
                left,
                right,
                ..
            } => Event::Vertex {
                name: name.clone(),
                level: *level,
                left: *right,
                right: *left,
                labels: (0..*left)
                    .map(|j| sweep.label_at(i, level + j).to_string())
                    .collect(),
            },
        })
        .collect();
    FrontDiagram {
        events,
        ..d.clone()
    }
}

fn flip(d: &FrontDiagram, flip_v: bool, flip_h: bool) -> Result<FrontDiagram, DiagramError> {
    let mut out = if flip_v { flip_vertical(d) } else { d.clone() };
    if flip_h {
        let s = out.sweep()?;
        out = flip_horizontal(&out, &s);
    }
    Ok(out)
}

fn unflip(d: &FrontDiagram, flip_v: bool, flip_h: bool) -> Result<FrontDiagram, DiagramError> {
    let mut out = d.clone();
    if flip_h {
        let s = out.sweep()?;
        out = flip_horizontal(&out, &s);
    }
    if flip_v {
        out = flip_vertical(&out);
    }
    Ok(out)
}

const VARIANTS: [(bool, bool); 4] = [(false, false), (true, false), (false, true), (true, true)];

/// Kinds whose base pattern is already closed under both flips.
fn symmetric(kind: MoveKind) -> bool {
    matches!(kind, MoveKind::Commute | MoveKind::III)
}

/// Every applicable move, over all reflections.
pub fn enumerate_moves(d: &FrontDiagram) -> Vec<MoveSite> {
    if d.mode == Mode::Knot {
        return vec![];
    }
    let mut out = Vec::new();
    for (fv, fh) in VARIANTS {
        let Ok(fd) = flip(d, fv, fh) else {
            return vec![];
        };
        let Ok(sweep) = fd.sweep() else { return vec![] };
        for (kind, index, inverse, param) in base_sites(&fd, &sweep) {
            if symmetric(kind) && (fv || fh) {
                continue;
            }
            out.push(MoveSite {
                kind,
                index,
                flip_v: fv,
                flip_h: fh,
                inverse,
                param,
            });
        }
    }
    out
}

/// Applies a site returned by [`enumerate_moves`].
pub fn apply_move(d: &FrontDiagram, site: &MoveSite) -> Result<FrontDiagram, MoveError> {
    if d.mode == Mode::Knot {
        return Err(MoveError::KnotMode);
    }
    let fd = flip(d, site.flip_v, site.flip_h)?;
    let sweep = fd.sweep()?;
    let events = apply_base(&fd, &sweep, site).ok_or(MoveError::Stale(site.index))?;
    let moved = FrontDiagram { events, ..fd };
    Ok(unflip(&moved, site.flip_v, site.flip_h)?)
}

fn footprint(e: &Event) -> (usize, usize, usize) {
    (e.level(), e.consumed(), e.produced())
}

fn x(level: usize) -> Event {
    Event::Crossing { level }
}

fn is_x(e: Option<&Event>, level: usize) -> bool {
    matches!(e, Some(Event::Crossing { level: l }) if *l == level)
}

/// Crossings `X from, X from+1, ..., X from+count-1` starting at `start`.
fn ladder(ev: &[Event], start: usize, from: usize, count: usize) -> bool {
    (0..count).all(|j| is_x(ev.get(start + j), from + j))
}

fn base_sites(d: &FrontDiagram, sweep: &Sweep) -> Vec<(MoveKind, usize, bool, usize)> {
    let ev = &d.events;
    let mut out = Vec::new();
    for i in 0..=ev.len() {
        // Kink insertion on any strand.
        for k in 0..sweep.width_before(i) {
            out.push((MoveKind::I, i, false, k));
        }
        let Some(e) = ev.get(i) else { continue };
        if let Some(f) = ev.get(i + 1) {
            let (l1, _, p1) = footprint(e);
            let (l2, c2, _) = footprint(f);
            if l2 + c2 <= l1 {
                out.push((MoveKind::Commute, i, false, 0));
            }
            if l2 >= l1 + p1 {
                out.push((MoveKind::Commute, i, false, 1));
            }
        }
        match e {
            Event::LeftCusp { level, .. } => {
                let k = *level;
                if k >= 1
                    && is_x(ev.get(i + 1), k - 1)
                    && matches!(ev.get(i + 2), Some(Event::RightCusp { level: l }) if *l == k)
                {
                    out.push((MoveKind::I, i, true, 0));
                }
                if k >= 1 {
                    out.push((MoveKind::II, i, false, 0));
                }
                if is_x(ev.get(i + 1), k + 1) && is_x(ev.get(i + 2), k) {
                    out.push((MoveKind::II, i, true, 0));
                }
            }
            Event::Crossing { level } => {
                let k = *level;
                if is_x(ev.get(i + 1), k + 1) && is_x(ev.get(i + 2), k) {
                    out.push((MoveKind::III, i, false, 0));
                }
                if k >= 1 && is_x(ev.get(i + 1), k - 1) && is_x(ev.get(i + 2), k) {
                    out.push((MoveKind::III, i, true, 0));
                }
            }
            Event::Vertex {
                level, left, right, ..
            } => {
                let (k, m, n) = (*level, *left, *right);
                // V, anchored at the start of the rising ladder before the vertex.
                if m <= i && ladder(ev, i - m, k, m) && k < sweep.width_before(i - m) {
                    out.push((MoveKind::V, i - m, false, 0));
                }
                if k >= 1 && ladder(ev, i + 1, k - 1, n) {
                    out.push((MoveKind::V, i, true, 0));
                }
                if n >= 1 {
                    out.push((MoveKind::VI, i, false, 0));
                }
                // VI inverse, anchored at the cusp: L k p; X k+1 .. X k+m-1; V k in=m.
                if m >= 1 && i >= m {
                    let start = i - m;
                    if matches!(&ev[start], Event::LeftCusp { level: l, .. } if *l == k)
                        && ladder(ev, start + 1, k + 1, m - 1)
                    {
                        out.push((MoveKind::VI, start, true, 0));
                    }
                }
                if k >= 1
                    && n >= 1
                    && ladder(ev, i + 1, k - 1, n - 1)
                    && matches!(ev.get(i + n), Some(Event::RightCusp { level: l }) if *l == k + n - 2)
                {
                    out.push((MoveKind::IV, i, false, 0));
                }
                if m >= 1 {
                    out.push((MoveKind::IV, i, true, 0));
                }
            }
            Event::RightCusp { .. } => {}
        }
    }
    out
}

fn apply_base(d: &FrontDiagram, sweep: &Sweep, site: &MoveSite) -> Option<Vec<Event>> {
    let ev = &d.events;
    let i = site.index;
    let mut out = ev.clone();
    match (site.kind, site.inverse) {
        (MoveKind::Commute, _) => {
            let (e, f) = (ev.get(i)?, ev.get(i + 1)?);
            let (l1, c1, p1) = footprint(e);
            let (l2, c2, p2) = footprint(f);
            let (ne, nf) = if site.param == 0 {
                if l2 + c2 > l1 {
                    return None;
                }
                (e.with_level(l1 + p2 - c2), f.clone())
            } else {
                if l2 < l1 + p1 {
                    return None;
                }
                (e.clone(), f.with_level(l2 + c1 - p1))
            };
            out[i] = nf;
            out[i + 1] = ne;
        }
        (MoveKind::I, false) => {
            let k = site.param;
            if i > ev.len() || k >= sweep.width_before(i) {
                return None;
            }
            let label = sweep.label_at(i, k).to_string();
            out.splice(
                i..i,
                [
                    Event::LeftCusp {
                        level: k + 1,
                        edge: label,
                    },
                    x(k),
                    Event::RightCusp { level: k + 1 },
                ],
            );
        }
        (MoveKind::I, true) => {
            let Event::LeftCusp { level, .. } = ev.get(i)? else {
                return None;
            };
            let k = level.checked_sub(1)?;
            if !is_x(ev.get(i + 1), k)
                || !matches!(ev.get(i + 2), Some(Event::RightCusp { level: l }) if *l == k + 1)
            {
                return None;
            }
            out.drain(i..i + 3);
        }
        (MoveKind::II, false) => {
            let Event::LeftCusp { level, edge } = ev.get(i)? else {
                return None;
            };
            let k = *level;
            if k == 0 {
                return None;
            }
            out.splice(
                i..=i,
                [
                    Event::LeftCusp {
                        level: k - 1,
                        edge: edge.clone(),
                    },
                    x(k),
                    x(k - 1),
                ],
            );
        }
        (MoveKind::II, true) => {
            let Event::LeftCusp { level, edge } = ev.get(i)? else {
                return None;
            };
            let k = *level + 1;
            if !is_x(ev.get(i + 1), k) || !is_x(ev.get(i + 2), k - 1) {
                return None;
            }
            out.splice(
                i..i + 3,
                [Event::LeftCusp {
                    level: k,
                    edge: edge.clone(),
                }],
            );
        }
        (MoveKind::III, inverse) => {
            let Event::Crossing { level } = ev.get(i)? else {
                return None;
            };
            let k = *level;
            if !inverse {
                if !is_x(ev.get(i + 1), k + 1) || !is_x(ev.get(i + 2), k) {
                    return None;
                }
                out.splice(i..i + 3, [x(k + 1), x(k), x(k + 1)]);
            } else {
                let k = k.checked_sub(1)?;
                if !is_x(ev.get(i + 1), k) || !is_x(ev.get(i + 2), k + 1) {
                    return None;
                }
                out.splice(i..i + 3, [x(k), x(k + 1), x(k)]);
            }
        }
        (MoveKind::V, false) => {
            // X k-1 .. X k+m-2; V v k-1 in=m  ->  V v k; X k-1 .. X k+n-2
            let (vi, vertex) = ev
                .iter()
                .enumerate()
                .skip(i)
                .find(|(_, e)| !matches!(e, Event::Crossing { .. }))?;
            let Event::Vertex {
                level, left, right, ..
            } = vertex
            else {
                return None;
            };
            let (k, m, n) = (level + 1, *left, *right);
            if vi != i + m || !ladder(ev, i, k - 1, m) {
                return None;
            }
            let mut repl = vec![vertex.with_level(k)];
            repl.extend((0..n).map(|j| x(k - 1 + j)));
            out.splice(i..=vi, repl);
        }
        (MoveKind::V, true) => {
            let vertex = ev.get(i)?;
            let Event::Vertex {
                level, left, right, ..
            } = vertex
            else {
                return None;
            };
            let (k, m, n) = (*level, *left, *right);
            if k == 0 || !ladder(ev, i + 1, k - 1, n) {
                return None;
            }
            let mut repl: Vec<Event> = (0..m).map(|j| x(k - 1 + j)).collect();
            repl.push(vertex.with_level(k - 1));
            out.splice(i..=i + n, repl);
        }
        (MoveKind::VI, false) => {
            let Event::Vertex {
                name,
                level,
                left,
                right,
                labels,
            } = ev.get(i)?
            else {
                return None;
            };
            let (k, m, n) = (*level, *left, *right);
            if n == 0 {
                return None;
            }
            let top = labels[n - 1].clone();
            let mut repl = vec![Event::LeftCusp {
                level: k,
                edge: top,
            }];
            repl.extend((0..m).map(|j| x(k + 1 + j)));
            repl.push(Event::Vertex {
                name: name.clone(),
                level: k,
                left: m + 1,
                right: n - 1,
                labels: labels[..n - 1].to_vec(),
            });
            out.splice(i..=i, repl);
        }
        (MoveKind::VI, true) => {
            let Event::LeftCusp { level, edge } = ev.get(i)? else {
                return None;
            };
            let k = *level;
            let (vi, vertex) = ev
                .iter()
                .enumerate()
                .skip(i + 1)
                .find(|(_, e)| !matches!(e, Event::Crossing { .. }))?;
            let Event::Vertex {
                name,
                level: vl,
                left,
                right,
                labels,
            } = vertex
            else {
                return None;
            };
            let m = left.checked_sub(1)?;
            if *vl != k || vi != i + 1 + m || !ladder(ev, i + 1, k + 1, m) {
                return None;
            }
            let mut labels = labels.clone();
            labels.push(edge.clone());
            out.splice(
                i..=vi,
                [Event::Vertex {
                    name: name.clone(),
                    level: k,
                    left: m,
                    right: right + 1,
                    labels,
                }],
            );
        }
        (MoveKind::IV, false) => {
            // V v k in=m out=n; X k-1 .. X k+n-3; R k+n-2  ->  V v k-1 in=m+1 out=n-1
            let Event::Vertex {
                name,
                level,
                left,
                right,
                labels,
            } = ev.get(i)?
            else {
                return None;
            };
            let (k, m, n) = (*level, *left, *right);
            if k == 0 || n == 0 || !ladder(ev, i + 1, k - 1, n - 1) {
                return None;
            }
            if !matches!(ev.get(i + n), Some(Event::RightCusp { level: l }) if *l == k + n - 2) {
                return None;
            }
            out.splice(
                i..=i + n,
                [Event::Vertex {
                    name: name.clone(),
                    level: k - 1,
                    left: m + 1,
                    right: n - 1,
                    labels: labels[..n - 1].to_vec(),
                }],
            );
        }
        (MoveKind::IV, true) => {
            let Event::Vertex {
                name,
                level,
                left,
                right,
                labels,
            } = ev.get(i)?
            else {
                return None;
            };
            let (k, m, n) = (*level, *left, *right);
            if m == 0 {
                return None;
            }
            let bottom = sweep.label_at(i, k).to_string();
            let mut labels = labels.clone();
            labels.push(bottom);
            let mut repl = vec![Event::Vertex {
                name: name.clone(),
                level: k + 1,
                left: m - 1,
                right: n + 1,
                labels,
            }];
            repl.extend((0..n).map(|j| x(k + j)));
            repl.push(Event::RightCusp { level: k + n });
            out.splice(i..=i, repl);
        }
    }
    Some(out)
}

/// Inserts a zigzag on the strand at `level` just before event `position`.
/// A positive zigzag turns down twice when followed left to right, so it
/// adds one to the rot of a cycle that runs along the strand rightward and
/// subtracts one otherwise. Either sign lowers tb by one.
pub fn stabilize(
    d: &FrontDiagram,
    position: usize,
    level: usize,
    positive: bool,
) -> Result<FrontDiagram, MoveError> {
    let sweep = d.sweep()?;
    if position > d.events.len() || level >= sweep.width_before(position) {
        return Err(MoveError::Stale(position));
    }
    let edge = sweep.label_at(position, level).to_string();
    let pair = if positive {
        [
            Event::LeftCusp { level, edge },
            Event::RightCusp { level: level + 1 },
        ]
    } else {
        [
            Event::LeftCusp {
                level: level + 1,
                edge,
            },
            Event::RightCusp { level },
        ]
    };
    let mut out = d.clone();
    out.events.splice(position..position, pair);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Walk {
    pub diagram: FrontDiagram,
    pub trace: Vec<MoveSite>,
    /// Set when a step found no applicable move; holds the step number.
    pub stopped_at: Option<usize>,
}

/// Applies `steps` random moves. Each step picks a move kind uniformly among
/// the kinds with at least one site, then a site of that kind uniformly.
pub fn random_walk(d: &FrontDiagram, steps: usize, seed: u64) -> Walk {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    let mut trace = Vec::with_capacity(steps);
    for step in 0..steps {
        let sites = enumerate_moves(&cur);
        let mut kinds: Vec<MoveKind> = sites.iter().map(|s| s.kind).collect();
        kinds.sort_unstable();
        kinds.dedup();
        let Some(&kind) = kinds.choose(&mut rng) else {
            return Walk {
                diagram: cur,
                trace,
                stopped_at: Some(step),
            };
        };
        let of_kind: Vec<&MoveSite> = sites.iter().filter(|s| s.kind == kind).collect();
        let site = **of_kind.choose(&mut rng).expect("kind has a site");
        cur = apply_move(&cur, &site).expect("enumerated sites apply");
        trace.push(site);
    }
    Walk {
        diagram: cur,
        trace,
        stopped_at: None,
    }
}

/// A site for one of the four vertex rotations at `vertex`. The edge at the
/// top (`from_top`) or bottom on the right (`from_right`) or left side moves
/// to the opposite corner.
pub fn rotation_site(
    d: &FrontDiagram,
    vertex: &str,
    from_right: bool,
    from_top: bool,
) -> Option<MoveSite> {
    // The base move takes the top right edge to the bottom left. The vertical
    // flip exchanges top and bottom, the horizontal flip left and right.
    let flip_v = !from_top;
    let flip_h = !from_right;
    let i = d.vertex_event(vertex)?;
    let index = if flip_h { d.events.len() - 1 - i } else { i };
    Some(MoveSite {
        kind: MoveKind::VI,
        index,
        flip_v,
        flip_h,
        inverse: false,
        param: 0,
    })
}

/// Brings a theta front into standard form near its vertices with vertex
/// rotations: `a` emits all edges with `e1` on top and `e3` at the bottom,
/// `b` absorbs all edges. Fails when the cyclic order at `a` is not
/// `(e1, e2, e3)`, since rotations cannot change it.
pub fn standardize(d: &FrontDiagram) -> Result<FrontDiagram, MoveError> {
    let mut cur = d.clone();
    let arity = |d: &FrontDiagram, v: &str| -> (usize, Vec<String>) {
        match &d.events[d.vertex_event(v).expect("theta vertex")] {
            Event::Vertex { left, labels, .. } => (*left, labels.clone()),
            _ => unreachable!(),
        }
    };
    let rotate = |d: &FrontDiagram,
                  v: &str,
                  from_right: bool,
                  from_top: bool|
     -> Result<FrontDiagram, MoveError> {
        let site = rotation_site(d, v, from_right, from_top).ok_or_else(|| {
            DiagramError::UnknownVertex {
                event: d.events.len(),
                vertex: v.into(),
            }
        })?;
        apply_move(d, &site)
    };
    cur.validate()?;
    while arity(&cur, "a").0 > 0 {
        cur = rotate(&cur, "a", false, true)?;
    }
    for _ in 0..3 {
        if arity(&cur, "a").1.last().map(String::as_str) == Some("e1") {
            break;
        }
        cur = rotate(&cur, "a", true, true)?;
        cur = rotate(&cur, "a", false, true)?;
    }
    if arity(&cur, "a").1 != ["e3", "e2", "e1"] {
        return Err(DiagramError::NotStandard("a".into()).into());
    }
    loop {
        let ev = &cur.events[cur.vertex_event("b").expect("theta vertex")];
        let Event::Vertex { right, .. } = ev else {
            unreachable!()
        };
        if *right == 0 {
            break;
        }
        cur = rotate(&cur, "b", true, true)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{serialize, vertex_cyclic_order};
    use crate::invariants::invariant_vector;
    use crate::realization::realize_theta;

    fn minimal() -> FrontDiagram {
        realize_theta([-1, -1, -1], [0, 0, 0]).unwrap()
    }

    #[test]
    fn flips_are_involutions() {
        let d = realize_theta([-3, -4, -5], [2, 1, -2]).unwrap();
        assert_eq!(flip_vertical(&flip_vertical(&d)), d);
        let h = flip(&d, false, true).unwrap();
        assert_eq!(unflip(&h, false, true).unwrap(), d);
        let both = flip(&d, true, true).unwrap();
        assert_eq!(unflip(&both, true, true).unwrap(), d);
        both.validate().unwrap();
    }

    #[test]
    fn minimal_has_rotation_sites() {
        let sites = enumerate_moves(&minimal());
        assert!(sites.iter().any(|s| s.kind == MoveKind::VI));
        for s in &sites {
            let d = apply_move(&minimal(), s).unwrap();
            d.validate()
                .unwrap_or_else(|e| panic!("{s:?}: {e}\n{}", serialize(&d)));
        }
    }

    #[test]
    fn every_site_applies_and_inverts() {
        let base = realize_theta([-2, -2, -2], [1, 1, -1]).unwrap();
        let d = random_walk(&base, 12, 7).diagram;
        let want = invariant_vector(&d).unwrap();
        for s in enumerate_moves(&d) {
            let moved = apply_move(&d, &s).unwrap();
            moved
                .validate()
                .unwrap_or_else(|e| panic!("{s:?}: {e}\n{}", serialize(&moved)));
            assert_eq!(invariant_vector(&moved).unwrap(), want, "{s:?}");
            let back = enumerate_moves(&moved)
                .into_iter()
                .any(|t| apply_move(&moved, &t).map(|r| r == d).unwrap_or(false));
            assert!(back, "no inverse for {s:?}");
        }
    }

    #[test]
    fn stale_site() {
        let s = MoveSite {
            kind: MoveKind::III,
            index: 0,
            flip_v: false,
            flip_h: false,
            inverse: false,
            param: 0,
        };
        assert_eq!(apply_move(&minimal(), &s), Err(MoveError::Stale(0)));
    }

    #[test]
    fn walk_is_deterministic() {
        let d = minimal();
        let a = random_walk(&d, 30, 11);
        let b = random_walk(&d, 30, 11);
        assert_eq!(a.diagram, b.diagram);
        assert_eq!(a.trace, b.trace);
        assert_eq!(random_walk(&d, 0, 3).diagram, d);
    }

    #[test]
    fn standardize_restores_form() {
        let d = minimal();
        let walked = random_walk(&d, 30, 5).diagram;
        let s = standardize(&walked).unwrap();
        crate::invariants::check_standard_form(&s, &s.validate().unwrap()).unwrap();
        assert_eq!(invariant_vector(&s).unwrap(), invariant_vector(&d).unwrap());
        let g = s.validate().unwrap();
        assert_eq!(
            vertex_cyclic_order(&s, &g, "a").unwrap().0,
            ["e1", "e2", "e3"]
        );
    }

    #[test]
    fn stabilization_changes_two_cycles() {
        let d = minimal();
        // e2 sits at level 1 right after a.
        for (positive, drot) in [(true, [1, 0, -1]), (false, [-1, 0, 1])] {
            let s = stabilize(&d, 1, 1, positive).unwrap();
            let v = invariant_vector(&s).unwrap();
            assert_eq!(v.tb, [-2, -1, -2]);
            // C1 runs e2 backwards, C3 forwards.
            assert_eq!(v.rot, [-drot[0], 0, -drot[2]]);
        }
    }
}
