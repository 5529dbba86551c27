//! Test-side oracles. Each one re-derives its answer from the raw event
//! words with its own sweep and shares no code with the library beyond the
//! public data types.
#![allow(dead_code)]

use std::collections::BTreeMap;

use thetafront::diagram::{EdgeEnds, Event, FrontDiagram};
use thetafront::link::{LinkDiagram, LinkEvent};
use thetafront::poly::LaurentPolynomial;
use thetafront::realization::{acceptable, realize_theta};

/// Polynomial in `A` as exponent -> coefficient, zero terms dropped.
pub type Poly = BTreeMap<i32, i64>;

fn mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (e1, c1) in p {
        for (e2, c2) in q {
            *out.entry(e1 + e2).or_insert(0) += c1 * c2;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn add_into(acc: &mut Poly, p: &Poly) {
    for (e, c) in p {
        *acc.entry(*e).or_insert(0) += c;
    }
    acc.retain(|_, c| *c != 0);
}

pub fn as_poly(p: &LaurentPolynomial) -> Poly {
    p.terms().collect()
}

/// One crossing of a planar-diagram code: the four arc ends in
/// counterclockwise order, starting from an end of the under-strand.
#[derive(Clone, Copy, Debug)]
struct Pd([usize; 4]);

struct PdCode {
    arcs: usize,
    /// Arc pairs joined at caps and cups.
    joins: Vec<(usize, usize)>,
    crossings: Vec<Pd>,
}

/// Sweeps the word with `level` as height: arcs run between crossings, and
/// each crossing is read off its four corners.
fn pd_code(l: &LinkDiagram) -> PdCode {
    let mut arcs = 0;
    let mut fresh = || {
        arcs += 1;
        arcs - 1
    };
    let mut col: Vec<usize> = Vec::new();
    let mut joins = Vec::new();
    let mut crossings = Vec::new();
    for e in &l.events {
        match *e {
            LinkEvent::Cap { level, .. } => {
                let a = fresh();
                col.insert(level, a);
                col.insert(level, a);
            }
            LinkEvent::Cup { level } => {
                joins.push((col[level], col[level + 1]));
                col.drain(level..level + 2);
            }
            LinkEvent::Cross {
                level,
                ascending_over,
                ..
            } => {
                let (sw, nw) = (col[level], col[level + 1]);
                let (se, ne) = (fresh(), fresh());
                col[level] = se;
                col[level + 1] = ne;
                // Counterclockwise around the crossing: SW, SE, NE, NW.
                crossings.push(if ascending_over {
                    // Under-strand runs NW to SE.
                    Pd([se, ne, nw, sw])
                } else {
                    Pd([sw, se, ne, nw])
                });
            }
        }
    }
    assert!(col.is_empty(), "oracle input must be closed");
    PdCode {
        arcs,
        joins,
        crossings,
    }
}

fn loops(arcs: usize, joins: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..arcs).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut n = arcs;
    for &(a, b) in joins {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            n -= 1;
        }
    }
    n
}

/// `<D>` by the skein relation `<X> = A <smooth_A> + A^-1 <smooth_B>`,
/// recursing crossing by crossing. With the under-strand entering at `a`
/// and corners `a, b, c, d` counterclockwise, the A smoothing joins `a-b`
/// and `c-d`: those arcs bound the regions swept when the over-strand turns
/// counterclockwise.
pub fn skein_bracket(l: &LinkDiagram) -> Poly {
    let pd = pd_code(l);
    let delta: Poly = [(2, -1), (-2, -1)].into_iter().collect();
    fn go(pd: &PdCode, i: usize, joins: &mut Vec<(usize, usize)>, delta: &Poly) -> Poly {
        if i == pd.crossings.len() {
            let n = loops(pd.arcs, joins);
            let mut out: Poly = [(0, 1)].into_iter().collect();
            for _ in 1..n {
                out = mul(&out, delta);
            }
            return out;
        }
        let [a, b, c, d] = pd.crossings[i].0;
        let mut total = Poly::new();
        for (shift, pair) in [(1, [(a, b), (c, d)]), (-1, [(a, d), (b, c)])] {
            joins.extend(pair);
            let sub = go(pd, i + 1, joins, delta);
            joins.truncate(joins.len() - 2);
            add_into(&mut total, &mul(&sub, &[(shift, 1)].into_iter().collect()));
        }
        total
    }
    let mut joins = pd.joins.clone();
    go(&pd, 0, &mut joins, &delta)
}

/// Signed crossing data of an oriented link word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkSigns {
    pub components: usize,
    /// Sum of signs of crossings of each component with itself.
    pub self_writhe: Vec<i32>,
    /// Half the signed count of crossings between two components.
    pub linking: Vec<Vec<i32>>,
}

/// Components are numbered by the first cap that opens them.
pub fn link_signs(l: &LinkDiagram) -> LinkSigns {
    // Each strand: (direction +1 right / -1 left, cap index).
    let mut strands: Vec<(i32, usize)> = Vec::new();
    let mut col: Vec<usize> = Vec::new();
    let mut caps = 0;
    let mut glue: Vec<(usize, usize)> = Vec::new();
    let mut xs: Vec<(usize, usize, bool)> = Vec::new();
    for e in &l.events {
        match *e {
            LinkEvent::Cap {
                level,
                lower_rightward,
                ..
            } => {
                let d = if lower_rightward { 1 } else { -1 };
                let s = strands.len();
                strands.push((d, caps));
                strands.push((-d, caps));
                caps += 1;
                col.splice(level..level, [s, s + 1]);
            }
            LinkEvent::Cup { level } => {
                let (p, q) = (col[level], col[level + 1]);
                assert_eq!(
                    strands[p].0, -strands[q].0,
                    "cup must join opposite directions"
                );
                glue.push((strands[p].1, strands[q].1));
                col.drain(level..level + 2);
            }
            LinkEvent::Cross {
                level,
                ascending_over,
                ..
            } => {
                xs.push((col[level], col[level + 1], ascending_over));
                col.swap(level, level + 1);
            }
        }
    }
    // Components as classes of caps.
    let mut class: Vec<usize> = (0..caps).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in &glue {
            let m = class[a].min(class[b]);
            if class[a] != m || class[b] != m {
                class[a] = m;
                class[b] = m;
                changed = true;
            }
        }
    }
    let mut index = BTreeMap::new();
    for c in &class {
        let next = index.len();
        index.entry(*c).or_insert(next);
    }
    let comp = |s: usize| index[&class[strands[s].1]];
    let n = index.len();
    let mut selfw = vec![0; n];
    let mut twice = vec![vec![0; n]; n];
    for &(climb, fall, ascending_over) in &xs {
        let (dc, df) = (strands[climb].0, strands[fall].0);
        let up = (dc, dc);
        let down = (df, -df);
        let (o, u) = if ascending_over {
            (up, down)
        } else {
            (down, up)
        };
        let sign = (o.0 * u.1 - o.1 * u.0).signum();
        let (p, q) = (comp(climb), comp(fall));
        if p == q {
            selfw[p] += sign;
        } else {
            twice[p][q] += sign;
            twice[q][p] += sign;
        }
    }
    LinkSigns {
        components: n,
        self_writhe: selfw,
        linking: twice
            .into_iter()
            .map(|r| r.into_iter().map(|v| v / 2).collect())
            .collect(),
    }
}

/// Where a sweep piece of a front begins or ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tip {
    /// Cusp event, and whether this piece is the upper one there.
    Cusp(usize, bool),
    /// Vertex event, whether the piece meets it from the vertex's left, and
    /// its height among the pieces on that side.
    Vertex(usize, bool, usize),
}

struct Piece {
    edge: String,
    left: Tip,
    right: Tip,
}

/// Pieces of a front: maximal strands between cusps and vertices, running
/// straight through crossings. Also returns crossings as (lower piece on the
/// left, upper piece on the left).
fn pieces(d: &FrontDiagram) -> (Vec<Piece>, Vec<(usize, usize)>) {
    let mut ps: Vec<Piece> = Vec::new();
    let mut col: Vec<usize> = Vec::new();
    let mut xs = Vec::new();
    let open = |ps: &mut Vec<Piece>, edge: &str, left: Tip| {
        ps.push(Piece {
            edge: edge.to_string(),
            left,
            right: left,
        });
        ps.len() - 1
    };
    for (i, e) in d.events.iter().enumerate() {
        match e {
            Event::LeftCusp { level, edge } => {
                let lo = open(&mut ps, edge, Tip::Cusp(i, false));
                let hi = open(&mut ps, edge, Tip::Cusp(i, true));
                col.splice(*level..*level, [lo, hi]);
            }
            Event::RightCusp { level } => {
                ps[col[*level]].right = Tip::Cusp(i, false);
                ps[col[*level + 1]].right = Tip::Cusp(i, true);
                col.drain(*level..*level + 2);
            }
            Event::Crossing { level } => {
                xs.push((col[*level], col[*level + 1]));
                col.swap(*level, *level + 1);
            }
            Event::Vertex {
                level,
                left,
                labels,
                ..
            } => {
                for (h, p) in col.drain(*level..*level + *left).enumerate() {
                    ps[p].right = Tip::Vertex(i, true, h);
                }
                let new: Vec<usize> = labels
                    .iter()
                    .enumerate()
                    .map(|(h, lab)| open(&mut ps, lab, Tip::Vertex(i, false, h)))
                    .collect();
                col.splice(*level..*level, new);
            }
        }
    }
    (ps, xs)
}

/// Walk of one edge from its first vertex: the pieces in order, with the
/// direction of travel along each (+1 rightward), and the cusps passed.
struct EdgeWalk {
    pieces: Vec<(usize, i32)>,
    /// Down cusps minus up cusps, and the number of cusps.
    down_minus_up: i32,
    cusps: i32,
    /// Tips at the start and the end vertex.
    start: Tip,
    end: Tip,
}

fn walk_edge(d: &FrontDiagram, ps: &[Piece], edge: &str, from: &str) -> EdgeWalk {
    let from_event = d
        .events
        .iter()
        .position(|e| matches!(e, Event::Vertex { name, .. } if name == from))
        .expect("vertex in word");
    let at_from = |t: Tip| matches!(t, Tip::Vertex(ev, ..) if ev == from_event);
    let (mut p, mut dir) = ps
        .iter()
        .enumerate()
        .find_map(|(k, pc)| {
            if pc.edge != edge {
                None
            } else if at_from(pc.left) {
                Some((k, 1))
            } else if at_from(pc.right) {
                Some((k, -1))
            } else {
                None
            }
        })
        .expect("edge meets its first vertex");
    let start = if dir == 1 { ps[p].left } else { ps[p].right };
    let mut w = EdgeWalk {
        pieces: vec![],
        down_minus_up: 0,
        cusps: 0,
        start,
        end: start,
    };
    loop {
        w.pieces.push((p, dir));
        let tip = if dir == 1 { ps[p].right } else { ps[p].left };
        match tip {
            Tip::Vertex(..) => {
                w.end = tip;
                return w;
            }
            Tip::Cusp(ev, upper) => {
                // Arriving on the upper piece means leaving on the lower: down.
                w.down_minus_up += if upper { 1 } else { -1 };
                w.cusps += 1;
                let side_match = |t: Tip| t == Tip::Cusp(ev, !upper);
                p = ps
                    .iter()
                    .enumerate()
                    .position(|(k, pc)| k != p && (side_match(pc.left) || side_match(pc.right)))
                    .expect("cusp partner");
                dir = -dir;
            }
        }
    }
}

/// Corner of a cycle at a vertex where it arrives at tip `inn` and leaves at
/// tip `out`: (cusp-like count, down minus up).
fn corner(inn: Tip, out: Tip) -> (i32, i32) {
    let (Tip::Vertex(_, l1, h1), Tip::Vertex(_, l2, h2)) = (inn, out) else {
        unreachable!("corners sit at vertices")
    };
    if l1 != l2 {
        return (0, 0);
    }
    (1, if h1 > h2 { 1 } else { -1 })
}

/// `(tb, rot)` of the cycles `C1 = e1 e2^-1`, `C2 = e1 e3^-1`,
/// `C3 = e2 e3^-1` of a theta front.
pub fn cycle_invariants(d: &FrontDiagram) -> [(i32, i32); 3] {
    let (ps, xs) = pieces(d);
    let walks: Vec<EdgeWalk> = ["e1", "e2", "e3"]
        .iter()
        .map(|name| {
            let decl = d
                .edges
                .iter()
                .find(|e| e.name == *name)
                .expect("theta edge");
            let EdgeEnds::Arc { from, .. } = &decl.ends else {
                panic!("theta edges are arcs")
            };
            walk_edge(d, &ps, name, from)
        })
        .collect();
    [(0, 1), (0, 2), (1, 2)].map(|(i, j)| {
        let (fwd, back) = (&walks[i], &walks[j]);
        let mut dir = BTreeMap::new();
        for &(p, s) in &fwd.pieces {
            dir.insert(p, s);
        }
        for &(p, s) in &back.pieces {
            dir.insert(p, -s);
        }
        let writhe: i32 = xs
            .iter()
            .filter_map(|(p, q)| Some(dir.get(p)? * dir.get(q)?))
            .sum();
        // At the far vertex: arrive along fwd, leave along back reversed.
        let (c_b, r_b) = corner(fwd.end, back.end);
        // At the first vertex: arrive along back reversed, leave along fwd.
        let (c_a, r_a) = corner(back.start, fwd.start);
        let cusps = fwd.cusps + back.cusps + c_a + c_b;
        let balance = fwd.down_minus_up - back.down_minus_up + r_a + r_b;
        assert!(
            cusps % 2 == 0 && balance % 2 == 0,
            "half counts must be integral"
        );
        (writhe - cusps / 2, balance / 2)
    })
}

/// Every admissible invariant pair with tb in `range`: acceptable cycles,
/// R in {0, -1}.
pub fn admissible(range: std::ops::RangeInclusive<i32>) -> Vec<([i32; 3], [i32; 3])> {
    let mut out = Vec::new();
    let rots = |tb: i32| (tb + 1..=-tb - 1).filter(move |&r| acceptable(tb, r));
    for t1 in range.clone() {
        for t2 in range.clone() {
            for t3 in range.clone() {
                for r1 in rots(t1) {
                    for r2 in rots(t2) {
                        for r3 in rots(t3) {
                            if matches!(r1 - r2 + r3, 0 | -1) {
                                out.push(([t1, t2, t3], [r1, r2, r3]));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// A small fixed corpus of realized theta fronts covering both vertex types.
pub fn corpus() -> Vec<FrontDiagram> {
    [
        ([-1, -1, -1], [0, 0, 0]),
        ([-2, -2, -2], [1, 1, -1]),
        ([-1, -2, -1], [0, 1, 0]),
        ([-2, -2, -3], [1, 1, 0]),
        ([-1, -3, -2], [0, 0, -1]),
        ([-3, -3, -3], [0, 0, 0]),
        ([-2, -4, -2], [1, 1, -1]),
        ([-3, -1, -3], [2, 0, -2]),
    ]
    .into_iter()
    .map(|(tb, rot)| realize_theta(tb, rot).expect("corpus triples are realizable"))
    .collect()
}
