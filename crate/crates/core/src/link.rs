//! Oriented link diagrams as Morse words (caps, cups and crossings), with
//! explicit over/under data at every crossing.

use serde::Serialize;
use thiserror::Error;

/// Where a crossing of a push-off or reference diagram comes from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// The half twist of an edge band. `rightward` records whether the edge
    /// leaves its first vertex moving to the right.
    EdgeBand {
        edge: String,
        rightward: bool,
    },
    /// The disk at a cusp, or the half twist of the edge portion it begins.
    CuspDisk {
        event: usize,
    },
    VertexDisk {
        vertex: String,
    },
    /// One of the four crossings doubling a crossing of the source front.
    Inherited {
        event: usize,
    },
    /// A half twist of band `band` in a pretzel diagram.
    Twist {
        band: usize,
    },
    Unspecified,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkEvent {
    /// Opens strands at `level` and `level + 1`.
    Cap { level: usize, lower_rightward: bool },
    /// Closes the strands at `level` and `level + 1`.
    Cup { level: usize },
    /// Swaps the strands at `level` and `level + 1`. When `ascending_over`
    /// is set the strand climbing from `level` to `level + 1` is on top.
    Cross {
        level: usize,
        ascending_over: bool,
        origin: Origin,
    },
}

impl LinkEvent {
    pub fn level(&self) -> usize {
        match self {
            LinkEvent::Cap { level, .. }
            | LinkEvent::Cup { level }
            | LinkEvent::Cross { level, .. } => *level,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LinkDiagram {
    pub events: Vec<LinkEvent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("event {event}: level {level} out of range for {width} strands")]
    Level {
        event: usize,
        level: usize,
        width: usize,
    },
    #[error("{0} strands left open")]
    Open(usize),
    #[error("event {0}: cup joins two strands running the same way")]
    Orientation(usize),
    #[error("unknown component {0}")]
    UnknownComponent(usize),
    #[error("linking numbers need at least two components")]
    SingleComponent,
}

/// A strand from its cap to its cup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkStrand {
    pub cap: usize,
    pub cup: usize,
    pub rightward: bool,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingInfo {
    pub event: usize,
    pub sign: i32,
    /// Components of the over and under strands.
    pub over: usize,
    pub under: usize,
    #[serde(skip)]
    pub over_strand: usize,
    #[serde(skip)]
    pub under_strand: usize,
}

#[derive(Clone, Debug)]
pub struct LinkAnalysis {
    pub strands: Vec<LinkStrand>,
    pub crossings: Vec<CrossingInfo>,
    pub components: usize,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Raw strand structure: for every strand its cap, cup and position in the
/// cap pair, plus the strands at every crossing.
struct Skeleton {
    cap: Vec<usize>,
    cup: Vec<usize>,
    upper: Vec<bool>,
    /// (event, strand from below, strand from above)
    crossings: Vec<(usize, usize, usize)>,
}

fn skeleton(events: &[LinkEvent]) -> Result<Skeleton, LinkError> {
    let mut cur: Vec<usize> = Vec::new();
    let mut sk = Skeleton {
        cap: vec![],
        cup: vec![],
        upper: vec![],
        crossings: vec![],
    };
    for (i, e) in events.iter().enumerate() {
        let width = cur.len();
        let need = if matches!(e, LinkEvent::Cap { .. }) {
            0
        } else {
            2
        };
        if e.level() + need > width {
            return Err(LinkError::Level {
                event: i,
                level: e.level(),
                width,
            });
        }
        match e {
            LinkEvent::Cap { level, .. } => {
                let s = sk.cap.len();
                sk.cap.extend([i, i]);
                sk.cup.extend([usize::MAX, usize::MAX]);
                sk.upper.extend([false, true]);
                cur.splice(*level..*level, [s, s + 1]);
            }
            LinkEvent::Cup { level } => {
                for s in cur.drain(*level..*level + 2) {
                    sk.cup[s] = i;
                }
            }
            LinkEvent::Cross { level, .. } => {
                sk.crossings.push((i, cur[*level], cur[*level + 1]));
                cur.swap(*level, *level + 1);
            }
        }
    }
    if !cur.is_empty() {
        return Err(LinkError::Open(cur.len()));
    }
    Ok(sk)
}

impl LinkDiagram {
    pub fn crossing_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, LinkEvent::Cross { .. }))
            .count()
    }

    /// Recomputes every cap's orientation from per-component seeds: the first
    /// cap of each component (in word order) takes its direction from
    /// `hint(cap_event_index)`, the rest follow.
    pub fn orient_with(&mut self, hint: impl Fn(usize) -> bool) -> Result<(), LinkError> {
        let sk = skeleton(&self.events)?;
        let n = sk.cap.len();
        // Strands joined by a cap or cup run in opposite directions.
        let mut partner = vec![[usize::MAX; 2]; n];
        for s in (0..n).step_by(2) {
            partner[s][0] = s + 1;
            partner[s + 1][0] = s;
        }
        let mut by_cup: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for s in 0..n {
            by_cup.entry(sk.cup[s]).or_default().push(s);
        }
        for pair in by_cup.values() {
            partner[pair[0]][1] = pair[1];
            partner[pair[1]][1] = pair[0];
        }
        let mut dir: Vec<Option<bool>> = vec![None; n];
        for s in (0..n).step_by(2) {
            if dir[s].is_some() {
                continue;
            }
            dir[s] = Some(hint(sk.cap[s]));
            let mut stack = vec![s];
            while let Some(t) = stack.pop() {
                let d = dir[t].expect("set before push");
                for &p in &partner[t] {
                    match dir[p] {
                        None => {
                            dir[p] = Some(!d);
                            stack.push(p);
                        }
                        Some(q) if q == d => return Err(LinkError::Orientation(sk.cup[p])),
                        Some(_) => {}
                    }
                }
            }
        }
        for s in (0..n).step_by(2) {
            if let LinkEvent::Cap {
                lower_rightward, ..
            } = &mut self.events[sk.cap[s]]
            {
                *lower_rightward = dir[s].expect("all strands oriented");
            }
        }
        Ok(())
    }

    pub fn analyze(&self) -> Result<LinkAnalysis, LinkError> {
        let sk = skeleton(&self.events)?;
        let n = sk.cap.len();
        let rightward: Vec<bool> = (0..n)
            .map(|s| {
                let LinkEvent::Cap {
                    lower_rightward, ..
                } = self.events[sk.cap[s]]
                else {
                    unreachable!("strands start at caps")
                };
                lower_rightward != sk.upper[s]
            })
            .collect();
        let mut dsu = Dsu((0..n).collect());
        for s in (0..n).step_by(2) {
            dsu.union(s, s + 1);
        }
        let mut cup_first: std::collections::BTreeMap<usize, usize> = Default::default();
        for (s, &right) in rightward.iter().enumerate() {
            if let Some(&t) = cup_first.get(&sk.cup[s]) {
                if right == rightward[t] {
                    return Err(LinkError::Orientation(sk.cup[s]));
                }
                dsu.union(s, t);
            } else {
                cup_first.insert(sk.cup[s], s);
            }
        }
        // Components numbered by first cap.
        let mut label = vec![usize::MAX; n];
        let mut components = 0;
        let mut strands = Vec::with_capacity(n);
        for (s, &right) in rightward.iter().enumerate() {
            let root = dsu.find(s);
            if label[root] == usize::MAX {
                label[root] = components;
                components += 1;
            }
            strands.push(LinkStrand {
                cap: sk.cap[s],
                cup: sk.cup[s],
                rightward: right,
                component: label[root],
            });
        }
        let crossings = sk
            .crossings
            .iter()
            .map(|&(event, lo, hi)| {
                let LinkEvent::Cross { ascending_over, .. } = self.events[event] else {
                    unreachable!()
                };
                // Direction vectors: the strand from below climbs, the one from above falls.
                let climb = if rightward[lo] { (1, 1) } else { (-1, -1) };
                let fall = if rightward[hi] { (1, -1) } else { (-1, 1) };
                let (o, u, os, us) = if ascending_over {
                    (climb, fall, lo, hi)
                } else {
                    (fall, climb, hi, lo)
                };
                let cross: i32 = o.0 * u.1 - o.1 * u.0;
                CrossingInfo {
                    event,
                    sign: cross.signum(),
                    over: label[dsu.find(os)],
                    under: label[dsu.find(us)],
                    over_strand: os,
                    under_strand: us,
                }
            })
            .collect();
        Ok(LinkAnalysis {
            strands,
            crossings,
            components,
        })
    }

    /// The mirror image: every crossing changes over/under.
    pub fn mirror(&self) -> LinkDiagram {
        LinkDiagram {
            events: self
                .events
                .iter()
                .map(|e| match e {
                    LinkEvent::Cross {
                        level,
                        ascending_over,
                        origin,
                    } => LinkEvent::Cross {
                        level: *level,
                        ascending_over: !ascending_over,
                        origin: origin.clone(),
                    },
                    other => other.clone(),
                })
                .collect(),
        }
    }
}

impl LinkAnalysis {
    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign).sum()
    }

    /// Signed self-crossings of one component.
    pub fn self_writhe(&self, component: usize) -> Result<i32, LinkError> {
        if component >= self.components {
            return Err(LinkError::UnknownComponent(component));
        }
        Ok(self
            .crossings
            .iter()
            .filter(|c| c.over == component && c.under == component)
            .map(|c| c.sign)
            .sum())
    }

    /// Pairwise linking numbers; the diagonal holds self-writhes.
    pub fn linking_matrix(&self) -> Result<Vec<Vec<i32>>, LinkError> {
        let n = self.components;
        if n < 2 {
            return Err(LinkError::SingleComponent);
        }
        let mut twice = vec![vec![0; n]; n];
        for c in &self.crossings {
            if c.over == c.under {
                twice[c.over][c.over] += 2 * c.sign;
            } else {
                twice[c.over][c.under] += c.sign;
                twice[c.under][c.over] += c.sign;
            }
        }
        Ok(twice
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        debug_assert!(v % 2 == 0, "odd crossing count between two closed curves");
                        v / 2
                    })
                    .collect()
            })
            .collect())
    }
}

/// Which components to report self-linking for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Component(usize),
    All,
}

/// The self-linking number of a transverse front: the writhe of one
/// component, or of the whole diagram.
pub fn self_linking(l: &LinkDiagram, which: Which) -> Result<i32, LinkError> {
    let a = l.analyze()?;
    match which {
        Which::Component(c) => a.self_writhe(c),
        Which::All => Ok(a.writhe()),
    }
}
