//! Front diagrams of Legendrian graphs, encoded as a left-to-right sweep.
//!
//! A diagram is a word of events read from left to right. Between two events
//! the front meets a vertical line in a list of strands, indexed bottom to top
//! from 0. Left cusps open two strands, right cusps close two, crossings swap
//! two neighbours and vertices consume strands on their left and emit strands
//! on their right.
//!
//! ```text
//! mode theta
//! vertex a degree 3
//! vertex b degree 3
//! edge e1 a b
//! edge e2 a b
//! edge e3 a b
//! events:
//! V a 0 in=0 out=3 labels=e3,e2,e1
//! V b 0 in=3 out=0
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which kind of object the word describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Two vertices `a`, `b` and edges `e1`, `e2`, `e3`, each running from `a` to `b`.
    Theta,
    /// Any graph whose vertices all have degree 3.
    Trivalent,
    /// Closed components only (no vertices); each edge is a loop.
    Knot,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Theta => "theta",
            Mode::Trivalent => "trivalent",
            Mode::Knot => "knot",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    /// Opens strands at `level` and `level + 1`, both labelled `edge`.
    LeftCusp { level: usize, edge: String },
    /// Closes the strands at `level` and `level + 1`.
    RightCusp { level: usize },
    /// Swaps the strands at `level` and `level + 1`.
    Crossing { level: usize },
    /// Consumes `left` strands starting at `level`, emits `right` strands
    /// labelled `labels` (bottom to top) at the same level.
    Vertex {
        name: String,
        level: usize,
        left: usize,
        right: usize,
        labels: Vec<String>,
    },
}

impl Event {
    pub fn level(&self) -> usize {
        match self {
            Event::LeftCusp { level, .. }
            | Event::RightCusp { level }
            | Event::Crossing { level }
            | Event::Vertex { level, .. } => *level,
        }
    }

    /// Number of strands the event consumes from the list on its left.
    pub fn consumed(&self) -> usize {
        match self {
            Event::LeftCusp { .. } => 0,
            Event::RightCusp { .. } | Event::Crossing { .. } => 2,
            Event::Vertex { left, .. } => *left,
        }
    }

    /// Number of strands the event emits into the list on its right.
    pub fn produced(&self) -> usize {
        match self {
            Event::LeftCusp { .. } | Event::Crossing { .. } => 2,
            Event::RightCusp { .. } => 0,
            Event::Vertex { right, .. } => *right,
        }
    }

    pub fn with_level(&self, level: usize) -> Event {
        let mut e = self.clone();
        match &mut e {
            Event::LeftCusp { level: l, .. }
            | Event::RightCusp { level: l }
            | Event::Crossing { level: l }
            | Event::Vertex { level: l, .. } => *l = level,
        }
        e
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::LeftCusp { level, edge } => write!(f, "L {level} {edge}"),
            Event::RightCusp { level } => write!(f, "R {level}"),
            Event::Crossing { level } => write!(f, "X {level}"),
            Event::Vertex {
                name,
                level,
                left,
                right,
                labels,
            } => {
                write!(f, "V {name} {level} in={left} out={right}")?;
                if !labels.is_empty() {
                    write!(f, " labels={}", labels.join(","))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexDecl {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeEnds {
    /// An edge oriented from `from` to `to`.
    Arc { from: String, to: String },
    /// A closed component. The orientation is fixed by the direction of travel
    /// through the first left cusp carrying this label.
    Loop { first_cusp_down: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeDecl {
    pub name: String,
    pub ends: EdgeEnds,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrontDiagram {
    pub mode: Mode,
    pub vertices: Vec<VertexDecl>,
    pub edges: Vec<EdgeDecl>,
    pub events: Vec<Event>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum DiagramError {
    #[error("event {event} ({text}): level {level} out of range for {width} strands")]
    LevelOutOfRange {
        event: usize,
        text: String,
        level: usize,
        width: usize,
    },
    #[error("event {event}: unknown edge `{edge}`")]
    UnknownEdge { event: usize, edge: String },
    #[error("event {event}: unknown vertex `{vertex}`")]
    UnknownVertex { event: usize, vertex: String },
    #[error(
        "event {event}: vertex `{vertex}` has degree {degree} but the event has {got} strand ends"
    )]
    ArityMismatch {
        event: usize,
        vertex: String,
        degree: usize,
        got: usize,
    },
    #[error("event {event}: vertex `{vertex}` emits {right} strands but lists {labels} labels")]
    LabelCount {
        event: usize,
        vertex: String,
        right: usize,
        labels: usize,
    },
    #[error("event {event}: right cusp joins `{lower}` and `{upper}`")]
    CuspLabelMismatch {
        event: usize,
        lower: String,
        upper: String,
    },
    #[error("vertex `{vertex}` appears {count} times in the event word")]
    VertexCount { vertex: String, count: usize },
    #[error("{count} dangling strands at the end of the sweep")]
    Dangling { count: usize },
    #[error("edge `{edge}` is not a single arc")]
    NotSingleArc { edge: String },
    #[error("edge `{edge}` does not run between its declared endpoints")]
    WrongEndpoints { edge: String },
    #[error(
        "vertex `{vertex}` carries the wrong edge ends: expected {expected:?}, found {found:?}"
    )]
    WrongIncidence {
        vertex: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("{mode} mode: {message}")]
    Shape { mode: &'static str, message: String },
    #[error("unknown cycle {0}")]
    UnknownCycle(usize),
    #[error("edge index {0} is not one of 1, 2, 3")]
    EdgeIndex(usize),
    #[error("vertex `{0}` is not in standard position")]
    NotStandard(String),
}

/// Where a strand begins or ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum End {
    Cusp {
        event: usize,
    },
    Vertex {
        event: usize,
        side: Side,
        index: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

pub type StrandId = usize;

/// A maximal sweep strand: from the event that creates it to the event that
/// consumes it. Crossings do not end strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub label: String,
    pub start: End,
    pub end: Option<End>,
    /// Crossing events along the strand, left to right.
    pub crossings: Vec<usize>,
}

/// Strand bookkeeping for a whole event word.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub strands: Vec<Strand>,
    /// `before[i]` lists the strands (bottom to top) just left of event `i`;
    /// the final entry is the list after the last event.
    pub before: Vec<Vec<StrandId>>,
}

impl Sweep {
    pub fn width_before(&self, event: usize) -> usize {
        self.before[event].len()
    }

    pub fn after(&self, event: usize) -> &[StrandId] {
        &self.before[event + 1]
    }

    pub fn label_at(&self, event: usize, level: usize) -> &str {
        &self.strands[self.before[event][level]].label
    }
}

impl FrontDiagram {
    /// A theta-mode diagram with the standard declarations.
    pub fn theta(events: Vec<Event>) -> FrontDiagram {
        FrontDiagram {
            mode: Mode::Theta,
            vertices: vec![
                VertexDecl {
                    name: "a".into(),
                    degree: 3,
                },
                VertexDecl {
                    name: "b".into(),
                    degree: 3,
                },
            ],
            edges: ["e1", "e2", "e3"]
                .iter()
                .map(|e| EdgeDecl {
                    name: (*e).into(),
                    ends: EdgeEnds::Arc {
                        from: "a".into(),
                        to: "b".into(),
                    },
                })
                .collect(),
            events,
        }
    }

    /// A knot-mode diagram with one component named `K`.
    pub fn knot(first_cusp_down: bool, events: Vec<Event>) -> FrontDiagram {
        FrontDiagram {
            mode: Mode::Knot,
            vertices: vec![],
            edges: vec![EdgeDecl {
                name: "K".into(),
                ends: EdgeEnds::Loop { first_cusp_down },
            }],
            events,
        }
    }

    pub fn edge(&self, name: &str) -> Option<&EdgeDecl> {
        self.edges.iter().find(|e| e.name == name)
    }

    pub fn vertex(&self, name: &str) -> Option<&VertexDecl> {
        self.vertices.iter().find(|v| v.name == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// Index of the event of vertex `name`, if it occurs.
    pub fn vertex_event(&self, name: &str) -> Option<usize> {
        self.events
            .iter()
            .position(|e| matches!(e, Event::Vertex { name: n, .. } if n == name))
    }

    /// Runs the sweep, checking levels, labels and arities event by event.
    pub fn sweep(&self) -> Result<Sweep, DiagramError> {
        let mut strands: Vec<Strand> = Vec::new();
        let mut current: Vec<StrandId> = Vec::new();
        let mut before = Vec::with_capacity(self.events.len() + 1);
        for (i, ev) in self.events.iter().enumerate() {
            before.push(current.clone());
            let width = current.len();
            let range = |level: usize, need: usize| -> Result<(), DiagramError> {
                if level + need > width {
                    Err(DiagramError::LevelOutOfRange {
                        event: i,
                        text: ev.to_string(),
                        level,
                        width,
                    })
                } else {
                    Ok(())
                }
            };
            match ev {
                Event::LeftCusp { level, edge } => {
                    range(*level, 0)?;
                    if self.edge(edge).is_none() {
                        return Err(DiagramError::UnknownEdge {
                            event: i,
                            edge: edge.clone(),
                        });
                    }
                    let lo = strands.len();
                    for _ in 0..2 {
                        strands.push(Strand {
                            label: edge.clone(),
                            start: End::Cusp { event: i },
                            end: None,
                            crossings: vec![],
                        });
                    }
                    current.splice(*level..*level, [lo, lo + 1]);
                }
                Event::RightCusp { level } => {
                    range(*level, 2)?;
                    let (lo, hi) = (current[*level], current[*level + 1]);
                    if strands[lo].label != strands[hi].label {
                        return Err(DiagramError::CuspLabelMismatch {
                            event: i,
                            lower: strands[lo].label.clone(),
                            upper: strands[hi].label.clone(),
                        });
                    }
                    strands[lo].end = Some(End::Cusp { event: i });
                    strands[hi].end = Some(End::Cusp { event: i });
                    current.drain(*level..*level + 2);
                }
                Event::Crossing { level } => {
                    range(*level, 2)?;
                    strands[current[*level]].crossings.push(i);
                    strands[current[*level + 1]].crossings.push(i);
                    current.swap(*level, *level + 1);
                }
                Event::Vertex {
                    name,
                    level,
                    left,
                    right,
                    labels,
                } => {
                    let decl = self
                        .vertex(name)
                        .ok_or_else(|| DiagramError::UnknownVertex {
                            event: i,
                            vertex: name.clone(),
                        })?;
                    if left + right != decl.degree {
                        return Err(DiagramError::ArityMismatch {
                            event: i,
                            vertex: name.clone(),
                            degree: decl.degree,
                            got: left + right,
                        });
                    }
                    if labels.len() != *right {
                        return Err(DiagramError::LabelCount {
                            event: i,
                            vertex: name.clone(),
                            right: *right,
                            labels: labels.len(),
                        });
                    }
                    if let Some(bad) = labels.iter().find(|l| self.edge(l).is_none()) {
                        return Err(DiagramError::UnknownEdge {
                            event: i,
                            edge: bad.clone(),
                        });
                    }
                    range(*level, *left)?;
                    for (j, &s) in current[*level..*level + left].iter().enumerate() {
                        strands[s].end = Some(End::Vertex {
                            event: i,
                            side: Side::Left,
                            index: j,
                        });
                    }
                    let lo = strands.len();
                    for (j, label) in labels.iter().enumerate() {
                        strands.push(Strand {
                            label: label.clone(),
                            start: End::Vertex {
                                event: i,
                                side: Side::Right,
                                index: j,
                            },
                            end: None,
                            crossings: vec![],
                        });
                    }
                    current.splice(*level..*level + left, lo..lo + right);
                }
            }
        }
        before.push(current);
        Ok(Sweep { strands, before })
    }

    /// Checks every structural invariant and returns the graph structure.
    pub fn validate(&self) -> Result<GraphStructure, DiagramError> {
        self.check_shape()?;
        let sweep = self.sweep()?;
        let left = sweep.before.last().map_or(0, Vec::len);
        if left != 0 {
            return Err(DiagramError::Dangling { count: left });
        }
        let mut vertex_events = BTreeMap::new();
        for v in &self.vertices {
            let hits: Vec<usize> = self
                .events
                .iter()
                .enumerate()
                .filter(|(_, e)| matches!(e, Event::Vertex { name, .. } if *name == v.name))
                .map(|(i, _)| i)
                .collect();
            if hits.len() != 1 {
                return Err(DiagramError::VertexCount {
                    vertex: v.name.clone(),
                    count: hits.len(),
                });
            }
            vertex_events.insert(v.name.clone(), hits[0]);
        }
        self.check_incidence(&sweep, &vertex_events)?;

        let mut used = vec![false; sweep.strands.len()];
        let mut paths = BTreeMap::new();
        for e in &self.edges {
            let path = match &e.ends {
                EdgeEnds::Arc { from, to } => arc_path(
                    &sweep,
                    &e.name,
                    vertex_events[from],
                    vertex_events[to],
                    from == to,
                )?,
                EdgeEnds::Loop { first_cusp_down } => {
                    loop_path(self, &sweep, &e.name, *first_cusp_down)?
                }
            };
            for step in &path {
                if used[step.strand] {
                    return Err(DiagramError::NotSingleArc {
                        edge: e.name.clone(),
                    });
                }
                used[step.strand] = true;
            }
            paths.insert(e.name.clone(), path);
        }
        for (s, strand) in sweep.strands.iter().enumerate() {
            if !used[s] {
                return Err(DiagramError::NotSingleArc {
                    edge: strand.label.clone(),
                });
            }
        }
        let cycles = self.cycles();
        Ok(GraphStructure {
            vertices: self.vertices.iter().map(|v| v.name.clone()).collect(),
            edges: self.edges.iter().map(|e| e.name.clone()).collect(),
            vertex_events,
            cycles,
            paths,
            sweep,
        })
    }

    fn check_shape(&self) -> Result<(), DiagramError> {
        let shape = |message: String| DiagramError::Shape {
            mode: self.mode.as_str(),
            message,
        };
        let mut names = BTreeSet::new();
        for v in &self.vertices {
            if !names.insert(v.name.as_str()) {
                return Err(shape(format!("vertex `{}` declared twice", v.name)));
            }
        }
        let mut enames = BTreeSet::new();
        for e in &self.edges {
            if !enames.insert(e.name.as_str()) {
                return Err(shape(format!("edge `{}` declared twice", e.name)));
            }
            match (&e.ends, self.mode) {
                (EdgeEnds::Loop { .. }, Mode::Knot) => {}
                (EdgeEnds::Loop { .. }, _) => {
                    return Err(shape(format!("edge `{}` is a closed loop", e.name)))
                }
                (EdgeEnds::Arc { .. }, Mode::Knot) => {
                    return Err(shape(format!("edge `{}` has endpoints", e.name)))
                }
                (EdgeEnds::Arc { from, to }, _) => {
                    for end in [from, to] {
                        if self.vertex(end).is_none() {
                            return Err(shape(format!(
                                "edge `{}` uses unknown vertex `{end}`",
                                e.name
                            )));
                        }
                    }
                }
            }
        }
        match self.mode {
            Mode::Knot => {
                if !self.vertices.is_empty() {
                    return Err(shape("vertices are not allowed".into()));
                }
                if self.edges.is_empty() {
                    return Err(shape("at least one component is required".into()));
                }
            }
            Mode::Theta | Mode::Trivalent => {
                if let Some(v) = self.vertices.iter().find(|v| v.degree != 3) {
                    return Err(shape(format!(
                        "vertex `{}` has degree {}",
                        v.name, v.degree
                    )));
                }
                if self.vertices.is_empty() {
                    return Err(shape("no vertices".into()));
                }
            }
        }
        if self.mode == Mode::Theta {
            let vnames: Vec<&str> = self.vertices.iter().map(|v| v.name.as_str()).collect();
            if vnames.len() != 2 || !vnames.contains(&"a") || !vnames.contains(&"b") {
                return Err(shape(format!(
                    "expected vertices a and b, found {}",
                    vnames.join(",")
                )));
            }
            let mut found: Vec<&str> = self.edges.iter().map(|e| e.name.as_str()).collect();
            found.sort_unstable();
            if found != ["e1", "e2", "e3"] {
                return Err(shape(format!(
                    "expected edges e1,e2,e3, found {}",
                    found.join(",")
                )));
            }
            for e in &self.edges {
                if !matches!(&e.ends, EdgeEnds::Arc { from, to } if from == "a" && to == "b") {
                    return Err(shape(format!("edge `{}` must run from a to b", e.name)));
                }
            }
        }
        Ok(())
    }

    fn check_incidence(
        &self,
        sweep: &Sweep,
        vertex_events: &BTreeMap<String, usize>,
    ) -> Result<(), DiagramError> {
        for (name, &ev) in vertex_events {
            let mut expected = Vec::new();
            for e in &self.edges {
                if let EdgeEnds::Arc { from, to } = &e.ends {
                    if from == name {
                        expected.push(e.name.clone());
                    }
                    if to == name {
                        expected.push(e.name.clone());
                    }
                }
            }
            let mut found = vertex_port_labels(self, sweep, ev);
            expected.sort();
            found.sort();
            if expected != found {
                return Err(DiagramError::WrongIncidence {
                    vertex: name.clone(),
                    expected,
                    found,
                });
            }
        }
        Ok(())
    }

    /// Oriented cycles of the graph. In theta mode these are
    /// `C1 = (e1, -e2)`, `C2 = (e1, -e3)`, `C3 = (e2, -e3)`.
    pub fn cycles(&self) -> Vec<Cycle> {
        if self.mode == Mode::Knot {
            return self
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| Cycle {
                    id: i + 1,
                    edges: vec![(e.name.clone(), true)],
                })
                .collect();
        }
        let arcs: Vec<(&str, &str, &str)> = self
            .edges
            .iter()
            .filter_map(|e| match &e.ends {
                EdgeEnds::Arc { from, to } => Some((e.name.as_str(), from.as_str(), to.as_str())),
                EdgeEnds::Loop { .. } => None,
            })
            .collect();
        let mut out = Vec::new();
        for (first, &(name, from, to)) in arcs.iter().enumerate() {
            let mut path = vec![(name.to_string(), true)];
            let mut seen = BTreeSet::from([to]);
            simple_cycles(&arcs, first, from, to, &mut seen, &mut path, &mut out);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, edges)| Cycle { id: i + 1, edges })
            .collect()
    }
}

fn simple_cycles<'a>(
    arcs: &[(&'a str, &'a str, &'a str)],
    first: usize,
    home: &'a str,
    at: &'a str,
    seen: &mut BTreeSet<&'a str>,
    path: &mut Vec<(String, bool)>,
    out: &mut Vec<Vec<(String, bool)>>,
) {
    if at == home {
        out.push(path.clone());
        return;
    }
    for &(name, from, to) in arcs.iter().skip(first + 1) {
        for (forward, src, dst) in [(true, from, to), (false, to, from)] {
            if src != at || (dst != home && seen.contains(dst)) {
                continue;
            }
            if from == to && !forward {
                continue;
            }
            path.push((name.to_string(), forward));
            seen.insert(dst);
            simple_cycles(arcs, first, home, dst, seen, path, out);
            if dst != home {
                seen.remove(dst);
            }
            path.pop();
        }
    }
}

/// Labels of all strand ends at a vertex event (inputs then outputs).
fn vertex_port_labels(d: &FrontDiagram, sweep: &Sweep, ev: usize) -> Vec<String> {
    let Event::Vertex {
        level,
        left,
        labels,
        ..
    } = &d.events[ev]
    else {
        return vec![];
    };
    let mut out: Vec<String> = sweep.before[ev][*level..*level + left]
        .iter()
        .map(|&s| sweep.strands[s].label.clone())
        .collect();
    out.extend(labels.iter().cloned());
    out
}

/// One strand of an edge walk, with its direction of travel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub strand: StrandId,
    pub rightward: bool,
}

impl Step {
    /// The end at which the walk leaves this strand.
    pub fn exit(&self, sweep: &Sweep) -> End {
        let s = &sweep.strands[self.strand];
        if self.rightward {
            s.end.expect("validated strand has an end")
        } else {
            s.start
        }
    }

    pub fn entry(&self, sweep: &Sweep) -> End {
        let s = &sweep.strands[self.strand];
        if self.rightward {
            s.start
        } else {
            s.end.expect("validated strand has an end")
        }
    }

    pub fn reversed(self) -> Step {
        Step {
            strand: self.strand,
            rightward: !self.rightward,
        }
    }
}

/// The strand partner across a cusp event.
fn cusp_partner(sweep: &Sweep, event: usize, s: StrandId) -> StrandId {
    // Both strands of a cusp share the same start (left cusp) or end (right cusp).
    let me = &sweep.strands[s];
    let is_left = me.start == End::Cusp { event };
    sweep
        .strands
        .iter()
        .enumerate()
        .find(|(i, t)| {
            *i != s
                && if is_left {
                    t.start == End::Cusp { event }
                } else {
                    t.end == Some(End::Cusp { event })
                }
        })
        .map(|(i, _)| i)
        .expect("cusp has two strands")
}

fn follow(
    sweep: &Sweep,
    edge: &str,
    mut step: Step,
    stop_at: Option<Step>,
) -> Result<Vec<Step>, DiagramError> {
    let mut path = Vec::new();
    let limit = sweep.strands.len() + 1;
    loop {
        if sweep.strands[step.strand].label != edge || path.len() > limit {
            return Err(DiagramError::NotSingleArc { edge: edge.into() });
        }
        path.push(step);
        match step.exit(sweep) {
            End::Vertex { .. } => return Ok(path),
            End::Cusp { event } => {
                let next = cusp_partner(sweep, event, step.strand);
                let rightward = sweep.strands[next].start == End::Cusp { event };
                step = Step {
                    strand: next,
                    rightward,
                };
                if Some(step) == stop_at {
                    return Ok(path);
                }
            }
        }
    }
}

fn arc_path(
    sweep: &Sweep,
    edge: &str,
    from_ev: usize,
    to_ev: usize,
    is_loop: bool,
) -> Result<Vec<Step>, DiagramError> {
    let mut ports: Vec<Step> = Vec::new();
    for (i, s) in sweep.strands.iter().enumerate() {
        if s.label != edge {
            continue;
        }
        if let End::Vertex { event, .. } = s.start {
            if event == from_ev {
                ports.push(Step {
                    strand: i,
                    rightward: true,
                });
            }
        }
        if let Some(End::Vertex { event, .. }) = s.end {
            if event == from_ev {
                ports.push(Step {
                    strand: i,
                    rightward: false,
                });
            }
        }
    }
    let start = *ports
        .first()
        .ok_or_else(|| DiagramError::WrongEndpoints { edge: edge.into() })?;
    let path = follow(sweep, edge, start, None)?;
    let last = path.last().expect("non-empty path");
    match last.exit(sweep) {
        End::Vertex { event, .. } if event == to_ev => {
            if is_loop
                && last.strand == start.strand
                && path.len() == 1
                && last.exit(sweep) == start.entry(sweep)
            {
                return Err(DiagramError::WrongEndpoints { edge: edge.into() });
            }
            Ok(path)
        }
        _ => Err(DiagramError::WrongEndpoints { edge: edge.into() }),
    }
}

fn loop_path(
    d: &FrontDiagram,
    sweep: &Sweep,
    edge: &str,
    first_cusp_down: bool,
) -> Result<Vec<Step>, DiagramError> {
    let first = d
        .events
        .iter()
        .position(|e| matches!(e, Event::LeftCusp { edge: l, .. } if l == edge))
        .ok_or_else(|| DiagramError::NotSingleArc { edge: edge.into() })?;
    let level = d.events[first].level();
    let after = sweep.after(first);
    let (lower, upper) = (after[level], after[level + 1]);
    // Travelling down through a left cusp means arriving on the upper branch
    // and leaving on the lower one.
    let (start, arrive) = if first_cusp_down {
        (lower, upper)
    } else {
        (upper, lower)
    };
    let start = Step {
        strand: start,
        rightward: true,
    };
    let closing = Step {
        strand: arrive,
        rightward: false,
    };
    let mut path = follow(sweep, edge, start, Some(start))?;
    if path.last() != Some(&closing) {
        return Err(DiagramError::NotSingleArc { edge: edge.into() });
    }
    path.shrink_to_fit();
    Ok(path)
}

/// An oriented cycle: edges in traversal order, each with a flag telling
/// whether it is traversed along its declared orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub id: usize,
    pub edges: Vec<(String, bool)>,
}

impl Cycle {
    pub fn name(&self) -> String {
        format!("C{}", self.id)
    }

    pub fn contains(&self, edge: &str) -> bool {
        self.edges.iter().any(|(e, _)| e == edge)
    }
}

/// Result of validation: graph data plus the oriented strand walk of every edge.
#[derive(Clone, Debug)]
pub struct GraphStructure {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub vertex_events: BTreeMap<String, usize>,
    pub cycles: Vec<Cycle>,
    /// Strand walk of each edge along its declared orientation.
    pub paths: BTreeMap<String, Vec<Step>>,
    pub sweep: Sweep,
}

impl GraphStructure {
    pub fn cycle(&self, id: usize) -> Result<&Cycle, DiagramError> {
        self.cycles
            .iter()
            .find(|c| c.id == id)
            .ok_or(DiagramError::UnknownCycle(id))
    }

    /// Direction of each strand along its edge's declared orientation.
    pub fn declared_direction(&self, s: StrandId) -> bool {
        let label = &self.sweep.strands[s].label;
        self.paths[label]
            .iter()
            .find(|st| st.strand == s)
            .map(|st| st.rightward)
            .expect("every strand lies on an edge path")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    Up,
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Partner {
    SameEdge,
    OtherEdge,
    External { edge: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceItem {
    Cusp {
        event: usize,
        turn: Turn,
    },
    Crossing {
        event: usize,
        sign: i32,
        partner: Partner,
    },
    Corner {
        vertex: String,
        event: usize,
        turn: Option<Turn>,
    },
}

/// The oriented walk around one cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleTraversal {
    pub cycle: usize,
    pub edges: Vec<(String, bool)>,
    pub items: Vec<TraceItem>,
}

fn cusp_turn(d: &FrontDiagram, sweep: &Sweep, event: usize, leaving: StrandId) -> Turn {
    let level = d.events[event].level();
    let pair = match d.events[event] {
        Event::LeftCusp { .. } => sweep.after(event),
        _ => &sweep.before[event][..],
    };
    // Upper to lower is a downward cusp.
    if pair[level + 1] == leaving {
        Turn::Down
    } else {
        Turn::Up
    }
}

fn corner_turn(enter: End, exit: End) -> Option<Turn> {
    match (enter, exit) {
        (
            End::Vertex {
                side: s1,
                index: i1,
                ..
            },
            End::Vertex {
                side: s2,
                index: i2,
                ..
            },
        ) if s1 == s2 => Some(if i1 > i2 { Turn::Down } else { Turn::Up }),
        _ => None,
    }
}

/// Walks cycle `id` with its orientation, recording cusps, crossings and
/// vertex corners in order.
pub fn trace_cycle(
    d: &FrontDiagram,
    g: &GraphStructure,
    id: usize,
) -> Result<CycleTraversal, DiagramError> {
    let cycle = g.cycle(id)?;
    let sweep = &g.sweep;
    let mut segments: Vec<Vec<Step>> = Vec::new();
    for (edge, forward) in &cycle.edges {
        let mut path = g.paths[edge].clone();
        if !forward {
            path.reverse();
            for s in &mut path {
                *s = s.reversed();
            }
        }
        segments.push(path);
    }
    let mut direction = vec![None; sweep.strands.len()];
    for seg in &segments {
        for st in seg {
            direction[st.strand] = Some(st.rightward);
        }
    }
    let mut items = Vec::new();
    let mut recorded = BTreeSet::new();
    let n = segments.len();
    for (k, seg) in segments.iter().enumerate() {
        let first = seg[0];
        if let End::Vertex { event, .. } = first.entry(sweep) {
            let prev = segments[(k + n - 1) % n].last().expect("non-empty");
            let name = match &d.events[event] {
                Event::Vertex { name, .. } => name.clone(),
                _ => unreachable!("vertex end points at a vertex event"),
            };
            items.push(TraceItem::Corner {
                vertex: name,
                event,
                turn: corner_turn(prev.exit(sweep), first.entry(sweep)),
            });
        }
        for st in seg {
            let strand = &sweep.strands[st.strand];
            let xs: Vec<usize> = if st.rightward {
                strand.crossings.clone()
            } else {
                strand.crossings.iter().rev().copied().collect()
            };
            for x in xs {
                let level = d.events[x].level();
                let pair = &sweep.before[x];
                let other = if pair[level] == st.strand {
                    pair[level + 1]
                } else {
                    pair[level]
                };
                let my_dir = if st.rightward { 1 } else { -1 };
                match direction[other] {
                    Some(od) => {
                        if !recorded.insert(x) {
                            continue;
                        }
                        let partner = if sweep.strands[other].label == strand.label {
                            Partner::SameEdge
                        } else {
                            Partner::OtherEdge
                        };
                        let sign = my_dir * if od { 1 } else { -1 };
                        items.push(TraceItem::Crossing {
                            event: x,
                            sign,
                            partner,
                        });
                    }
                    None => {
                        let od = if g.declared_direction(other) { 1 } else { -1 };
                        items.push(TraceItem::Crossing {
                            event: x,
                            sign: my_dir * od,
                            partner: Partner::External {
                                edge: sweep.strands[other].label.clone(),
                            },
                        });
                    }
                }
            }
            if let End::Cusp { event } = st.exit(sweep) {
                items.push(TraceItem::Cusp {
                    event,
                    turn: cusp_turn(d, sweep, event, st.strand),
                });
            }
        }
    }
    // A knot component closes through its starting cusp; the last step's exit
    // is that cusp, already recorded above.
    Ok(CycleTraversal {
        cycle: id,
        edges: cycle.edges.clone(),
        items,
    })
}

/// Cyclic order of edge ends at a vertex: right side top to bottom, then left
/// side top to bottom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicOrder(pub Vec<String>);

impl CyclicOrder {
    /// Equality up to rotation (not reflection).
    pub fn same_as(&self, other: &CyclicOrder) -> bool {
        let (a, b) = (&self.0, &other.0);
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..a.len()).any(|r| (0..a.len()).all(|i| a[(i + r) % a.len()] == b[i]))
    }

    /// The rotation starting at `first`, if present.
    pub fn starting_at(&self, first: &str) -> CyclicOrder {
        match self.0.iter().position(|e| e == first) {
            Some(p) => CyclicOrder(self.0[p..].iter().chain(&self.0[..p]).cloned().collect()),
            None => self.clone(),
        }
    }
}

impl fmt::Display for CyclicOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.join(","))
    }
}

/// Labels on each side of a vertex, bottom to top.
pub fn vertex_sides(
    d: &FrontDiagram,
    sweep: &Sweep,
    vertex: &str,
) -> Result<(Vec<String>, Vec<String>), DiagramError> {
    let ev = d
        .vertex_event(vertex)
        .ok_or_else(|| DiagramError::UnknownVertex {
            event: d.events.len(),
            vertex: vertex.into(),
        })?;
    let Event::Vertex {
        level,
        left,
        labels,
        ..
    } = &d.events[ev]
    else {
        unreachable!()
    };
    let inputs = sweep.before[ev][*level..*level + left]
        .iter()
        .map(|&s| sweep.strands[s].label.clone())
        .collect();
    Ok((inputs, labels.clone()))
}

pub fn vertex_cyclic_order(
    d: &FrontDiagram,
    g: &GraphStructure,
    vertex: &str,
) -> Result<CyclicOrder, DiagramError> {
    let (left, right) = vertex_sides(d, &g.sweep, vertex)?;
    Ok(CyclicOrder(
        right
            .iter()
            .rev()
            .chain(left.iter().rev())
            .cloned()
            .collect(),
    ))
}

// ---------------------------------------------------------------------------
// Text format

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: &line[s..i],
                    col: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            text: &line[s..],
            col: s + 1,
        });
    }
    out
}

/// Parses the `.lfd` text format and checks the sweep event by event.
pub fn parse(text: &str) -> Result<FrontDiagram, ParseError> {
    let err = |line: usize, column: usize, message: String| ParseError {
        line,
        column,
        message,
    };
    let mut mode = None;
    let mut vertices: Vec<VertexDecl> = Vec::new();
    let mut edges: Vec<EdgeDecl> = Vec::new();
    let mut events = Vec::new();
    let mut event_lines = Vec::new();
    let mut in_events = false;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(head) = toks.first() else { continue };
        let arity = |n: usize| -> Result<(), ParseError> {
            if toks.len() != n {
                let col = toks.get(n).map_or(line.trim_end().len() + 1, |t| t.col);
                Err(err(
                    ln,
                    col,
                    format!("expected {} fields, found {}", n, toks.len()),
                ))
            } else {
                Ok(())
            }
        };
        let name = |t: &Tok| -> Result<String, ParseError> {
            if is_name(t.text) {
                Ok(t.text.to_string())
            } else {
                Err(err(ln, t.col, format!("invalid name `{}`", t.text)))
            }
        };
        let number = |t: &Tok, what: &str| -> Result<usize, ParseError> {
            t.text
                .parse::<usize>()
                .map_err(|_| err(ln, t.col, format!("expected {what}, found `{}`", t.text)))
        };
        if !in_events {
            match head.text {
                "mode" => {
                    arity(2)?;
                    if mode.is_some() {
                        return Err(err(ln, head.col, "mode declared twice".into()));
                    }
                    mode = Some(match toks[1].text {
                        "theta" => Mode::Theta,
                        "trivalent" => Mode::Trivalent,
                        "knot" => Mode::Knot,
                        other => {
                            return Err(err(ln, toks[1].col, format!("unknown mode `{other}`")))
                        }
                    });
                }
                "vertex" => {
                    arity(4)?;
                    if toks[2].text != "degree" {
                        return Err(err(ln, toks[2].col, "expected `degree`".into()));
                    }
                    let n = name(&toks[1])?;
                    if vertices.iter().any(|v| v.name == n) {
                        return Err(err(ln, toks[1].col, format!("vertex `{n}` declared twice")));
                    }
                    vertices.push(VertexDecl {
                        name: n,
                        degree: number(&toks[3], "a degree")?,
                    });
                }
                "edge" => {
                    arity(4)?;
                    let n = name(&toks[1])?;
                    if edges.iter().any(|e| e.name == n) {
                        return Err(err(ln, toks[1].col, format!("edge `{n}` declared twice")));
                    }
                    let ends = if toks[2].text == "loop" {
                        EdgeEnds::Loop {
                            first_cusp_down: match toks[3].text {
                                "down" => true,
                                "up" => false,
                                other => {
                                    return Err(err(
                                        ln,
                                        toks[3].col,
                                        format!("expected `down` or `up`, found `{other}`"),
                                    ))
                                }
                            },
                        }
                    } else {
                        for t in &toks[2..4] {
                            if !vertices.iter().any(|v| v.name == t.text) {
                                return Err(err(ln, t.col, format!("unknown vertex `{}`", t.text)));
                            }
                        }
                        EdgeEnds::Arc {
                            from: toks[2].text.into(),
                            to: toks[3].text.into(),
                        }
                    };
                    edges.push(EdgeDecl { name: n, ends });
                }
                "events:" => {
                    arity(1)?;
                    in_events = true;
                }
                other => return Err(err(ln, head.col, format!("unexpected `{other}` in header"))),
            }
            continue;
        }
        let edge_ref = |t: &Tok| -> Result<String, ParseError> {
            let n = name(t)?;
            if edges.iter().any(|e| e.name == n) {
                Ok(n)
            } else {
                Err(err(ln, t.col, format!("unknown edge `{n}`")))
            }
        };
        let ev = match head.text {
            "L" => {
                arity(3)?;
                Event::LeftCusp {
                    level: number(&toks[1], "a level")?,
                    edge: edge_ref(&toks[2])?,
                }
            }
            "R" => {
                arity(2)?;
                Event::RightCusp {
                    level: number(&toks[1], "a level")?,
                }
            }
            "X" => {
                arity(2)?;
                Event::Crossing {
                    level: number(&toks[1], "a level")?,
                }
            }
            "V" => {
                if toks.len() < 5 || toks.len() > 6 {
                    let col = toks.get(6).map_or(line.trim_end().len() + 1, |t| t.col);
                    return Err(err(
                        ln,
                        col,
                        format!("expected 5 or 6 fields, found {}", toks.len()),
                    ));
                }
                let vname = name(&toks[1])?;
                let Some(decl) = vertices.iter().find(|v| v.name == vname) else {
                    return Err(err(ln, toks[1].col, format!("unknown vertex `{vname}`")));
                };
                let level = number(&toks[2], "a level")?;
                let keyed = |t: &Tok, key: &str| -> Result<usize, ParseError> {
                    match t.text.strip_prefix(key) {
                        Some(v) => v.parse::<usize>().map_err(|_| {
                            err(
                                ln,
                                t.col + key.len(),
                                format!("expected a count after `{key}`"),
                            )
                        }),
                        None => Err(err(ln, t.col, format!("expected `{key}<count>`"))),
                    }
                };
                let left = keyed(&toks[3], "in=")?;
                let right = keyed(&toks[4], "out=")?;
                if left + right != decl.degree {
                    return Err(err(
                        ln,
                        toks[3].col,
                        format!(
                            "vertex `{vname}` has degree {} but in+out = {}",
                            decl.degree,
                            left + right
                        ),
                    ));
                }
                let labels = match toks.get(5) {
                    None => vec![],
                    Some(t) => {
                        let Some(list) = t.text.strip_prefix("labels=") else {
                            return Err(err(ln, t.col, "expected `labels=`".into()));
                        };
                        let mut out = Vec::new();
                        let mut col = t.col + "labels=".len();
                        for part in list.split(',') {
                            let tk = Tok { text: part, col };
                            out.push(edge_ref(&tk)?);
                            col += part.len() + 1;
                        }
                        out
                    }
                };
                if labels.len() != right {
                    let col = toks.get(5).map_or(toks[4].col, |t| t.col);
                    return Err(err(
                        ln,
                        col,
                        format!(
                            "vertex `{vname}` emits {right} strands but lists {} labels",
                            labels.len()
                        ),
                    ));
                }
                Event::Vertex {
                    name: vname,
                    level,
                    left,
                    right,
                    labels,
                }
            }
            other => return Err(err(ln, head.col, format!("unknown event `{other}`"))),
        };
        events.push(ev);
        event_lines.push((ln, head.col));
    }
    let Some(mode) = mode else {
        return Err(err(1, 1, "missing `mode` line".into()));
    };
    if !in_events {
        return Err(err(
            text.lines().count().max(1),
            1,
            "missing `events:` line".into(),
        ));
    }
    let d = FrontDiagram {
        mode,
        vertices,
        edges,
        events,
    };
    if let Err(e) = d.sweep() {
        let idx = match &e {
            DiagramError::LevelOutOfRange { event, .. }
            | DiagramError::UnknownEdge { event, .. }
            | DiagramError::UnknownVertex { event, .. }
            | DiagramError::ArityMismatch { event, .. }
            | DiagramError::LabelCount { event, .. }
            | DiagramError::CuspLabelMismatch { event, .. } => *event,
            _ => 0,
        };
        let (line, column) = event_lines.get(idx).copied().unwrap_or((1, 1));
        return Err(err(line, column, e.to_string()));
    }
    Ok(d)
}

/// Canonical text form; `parse(&serialize(d)) == d` for every parsed diagram.
pub fn serialize(d: &FrontDiagram) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "mode {}", d.mode.as_str());
    for v in &d.vertices {
        let _ = writeln!(s, "vertex {} degree {}", v.name, v.degree);
    }
    for e in &d.edges {
        match &e.ends {
            EdgeEnds::Arc { from, to } => {
                let _ = writeln!(s, "edge {} {from} {to}", e.name);
            }
            EdgeEnds::Loop { first_cusp_down } => {
                let dir = if *first_cusp_down { "down" } else { "up" };
                let _ = writeln!(s, "edge {} loop {dir}", e.name);
            }
        }
    }
    s.push_str("events:\n");
    for ev in &d.events {
        let _ = writeln!(s, "{ev}");
    }
    s
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}
