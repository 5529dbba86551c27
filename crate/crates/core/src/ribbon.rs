//! Transverse push-offs: the boundary of the Legendrian ribbon of a front,
//! drawn as an oriented link diagram.
//!
//! Every front strand at level `k` becomes two parallel copies at levels
//! `2k` and `2k + 1`. The copy in front of the ribbon runs rightward and the
//! one behind runs leftward. New strands (at a left cusp or a vertex output)
//! start with the front copy below; strands end (at a right cusp or a vertex
//! input) with the front copy on top, so each strand carries exactly one
//! half twist, a positive crossing placed just before its right end. Cusps
//! and vertices contribute one negative crossing each, and every front
//! crossing becomes four crossings of which two are positive.

use serde::Serialize;

use crate::diagram::{DiagramError, End, Event, FrontDiagram, GraphStructure};
use crate::invariants::invariant_vector_of;
use crate::link::{LinkAnalysis, LinkDiagram, LinkEvent, Origin};

fn swap(level: usize, origin: Origin) -> LinkEvent {
    LinkEvent::Cross {
        level,
        ascending_over: true,
        origin,
    }
}

fn falling(level: usize, origin: Origin) -> LinkEvent {
    LinkEvent::Cross {
        level,
        ascending_over: false,
        origin,
    }
}

fn cap(level: usize) -> LinkEvent {
    LinkEvent::Cap {
        level,
        lower_rightward: false,
    }
}

pub fn push_off(d: &FrontDiagram) -> Result<LinkDiagram, DiagramError> {
    let g = d.validate()?;
    Ok(push_off_of(d, &g))
}

/// Origin of the half twist on strand `s`: the edge band for the first
/// portion of an edge, otherwise the cusp at which the portion begins.
fn twist_origin(g: &GraphStructure, s: usize) -> Origin {
    let label = &g.sweep.strands[s].label;
    let path = &g.paths[label];
    let pos = path
        .iter()
        .position(|st| st.strand == s)
        .expect("strand on its edge");
    let step = path[pos];
    match step.entry(&g.sweep) {
        End::Vertex { .. } if pos == 0 => Origin::EdgeBand {
            edge: label.clone(),
            rightward: step.rightward,
        },
        End::Cusp { event } => Origin::CuspDisk { event },
        End::Vertex { .. } => unreachable!("only the first portion of an edge starts at a vertex"),
    }
}

pub fn push_off_of(d: &FrontDiagram, g: &GraphStructure) -> LinkDiagram {
    let sweep = &g.sweep;
    let mut out = Vec::new();
    for (i, e) in d.events.iter().enumerate() {
        // Half twists for the strands this event ends.
        let ending = e.level()..e.level() + e.consumed();
        if !matches!(e, Event::Crossing { .. }) {
            for lvl in ending {
                let s = sweep.before[i][lvl];
                out.push(swap(2 * lvl, twist_origin(g, s)));
            }
        }
        match e {
            Event::LeftCusp { level, .. } => {
                let k = *level;
                out.push(cap(2 * k));
                out.push(falling(2 * k, Origin::CuspDisk { event: i }));
                out.push(cap(2 * k + 1));
            }
            Event::RightCusp { level } => {
                let k = *level;
                out.push(LinkEvent::Cup { level: 2 * k + 1 });
                out.push(falling(2 * k, Origin::CuspDisk { event: i }));
                out.push(LinkEvent::Cup { level: 2 * k });
            }
            Event::Crossing { level } => {
                let k = *level;
                for l in [2 * k + 1, 2 * k, 2 * k + 2, 2 * k + 1] {
                    out.push(falling(l, Origin::Inherited { event: i }));
                }
            }
            Event::Vertex {
                name,
                level,
                left,
                right,
                ..
            } => {
                let (k, m, n) = (*level, *left, *right);
                if m == 0 {
                    out.push(cap(2 * k));
                }
                for j in (0..m.saturating_sub(1)).rev() {
                    out.push(LinkEvent::Cup {
                        level: 2 * k + 2 * j + 1,
                    });
                }
                out.push(falling(
                    2 * k,
                    Origin::VertexDisk {
                        vertex: name.clone(),
                    },
                ));
                for j in 0..n.saturating_sub(1) {
                    out.push(cap(2 * k + 2 * j + 1));
                }
                if n == 0 {
                    out.push(LinkEvent::Cup { level: 2 * k });
                }
            }
        }
    }
    let mut l = LinkDiagram { events: out };
    // Every cap opens with its lower strand behind the ribbon; propagating
    // from that also checks the word closes up consistently.
    l.orient_with(|_| false).expect("push-off is orientable");
    l
}

/// One component of a push-off with the oriented cycle it follows: the edges
/// it runs along, each with whether it runs along the edge's orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushOffComponent {
    pub index: usize,
    pub edges: Vec<(String, bool)>,
    pub self_linking: i32,
}

/// Components in sweep order, attributed through their edge-band twists.
pub fn components(l: &LinkDiagram) -> Result<Vec<PushOffComponent>, crate::link::LinkError> {
    let a = l.analyze()?;
    components_of(l, &a)
}

pub fn components_of(
    l: &LinkDiagram,
    a: &LinkAnalysis,
) -> Result<Vec<PushOffComponent>, crate::link::LinkError> {
    let mut out: Vec<PushOffComponent> = (0..a.components)
        .map(|c| {
            Ok(PushOffComponent {
                index: c,
                edges: vec![],
                self_linking: a.self_writhe(c)?,
            })
        })
        .collect::<Result<_, crate::link::LinkError>>()?;
    for c in &a.crossings {
        let LinkEvent::Cross {
            origin: Origin::EdgeBand { edge, rightward },
            ..
        } = &l.events[c.event]
        else {
            continue;
        };
        for s in [c.over_strand, c.under_strand] {
            let strand = a.strands[s];
            out[strand.component]
                .edges
                .push((edge.clone(), strand.rightward == *rightward));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexType {
    Parallel,
    Antiparallel,
}

/// Parallel when the cyclic edge order at `b` agrees with the one at `a`.
/// Both orders survive every move, so this needs no standard form.
pub fn vertex_type(d: &FrontDiagram) -> Result<VertexType, DiagramError> {
    let g = d.validate()?;
    vertex_type_of(d, &g)
}

pub fn vertex_type_of(d: &FrontDiagram, g: &GraphStructure) -> Result<VertexType, DiagramError> {
    if d.mode != crate::diagram::Mode::Theta {
        return Err(DiagramError::Shape {
            mode: d.mode.as_str(),
            message: "a theta diagram is required".into(),
        });
    }
    let a = crate::diagram::vertex_cyclic_order(d, g, "a")?;
    let b = crate::diagram::vertex_cyclic_order(d, g, "b")?;
    Ok(if a.same_as(&b) {
        VertexType::Parallel
    } else {
        VertexType::Antiparallel
    })
}

/// The cycle a push-off component follows, and whether it runs along the
/// cycle's orientation (`false` for the reversed cycle).
pub fn attributed_cycle(g: &GraphStructure, edges: &[(String, bool)]) -> Option<(usize, bool)> {
    let cycle = g.cycles.iter().find(|c| {
        c.edges.len() == edges.len()
            && c.edges
                .iter()
                .all(|(e, _)| edges.iter().any(|(f, _)| f == e))
    })?;
    let (e0, f0) = &cycle.edges[0];
    let along = edges.iter().find(|(e, _)| e == e0)?.1 == *f0;
    Some((cycle.id, along))
}

/// Expected self-linking of a push-off component that follows the given
/// oriented cycle: `tb - rot` of that cycle.
pub fn expected_self_linking(
    d: &FrontDiagram,
    g: &GraphStructure,
    edges: &[(String, bool)],
) -> Option<i32> {
    let v = invariant_vector_of(d, g).ok()?;
    let (id, along) = attributed_cycle(g, edges)?;
    let i = id - 1;
    let rot = if along { v.rot[i] } else { -v.rot[i] };
    Some(v.tb[i] - rot)
}
