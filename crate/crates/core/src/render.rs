//! Deterministic SVG and ASCII pictures of fronts and link diagrams.
//!
//! Both formats share one layout: event `i` owns a column, strand positions
//! are rows with position 0 at the bottom. ASCII glyphs: `-` `/` `\` `|` for
//! strands, `<` and `>` for cusps, caps and cups, `*` for vertices, `X` for
//! a crossing whose falling strand is on top and `x` for the other kind.

use std::fmt::Write as _;

use crate::diagram::{DiagramError, Event, FrontDiagram};
use crate::link::{LinkDiagram, LinkError, LinkEvent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Ascii,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "svg" => Ok(Format::Svg),
            "ascii" => Ok(Format::Ascii),
            other => Err(format!("unknown format `{other}` (expected svg or ascii)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Open,
    Close,
    Cross { falling_over: bool },
    Vertex { name: String },
}

#[derive(Clone, Debug)]
struct Slice {
    kind: Kind,
    level: usize,
    consumed: usize,
    produced: usize,
}

struct Frame {
    slices: Vec<Slice>,
    /// Strand ids bottom to top before each slice, plus the final list.
    before: Vec<Vec<usize>>,
    /// Slices where each strand starts and ends.
    life: Vec<(usize, usize)>,
    width: usize,
}

const COL: i32 = 40;
const HALF: i32 = COL / 2;
const ROW: i32 = 30;
const MARGIN: i32 = 30;
const PALETTE: [&str; 6] = [
    "#1f4e9c", "#b8372f", "#2f8a4c", "#8a5a00", "#6b3fa0", "#00808a",
];

/// A polyline whose segment `k` (from point `k` to `k + 1`) may be a
/// quadratic curve with the given control point.
#[derive(Clone, Debug, Default)]
struct Polyline {
    points: Vec<(i32, i32)>,
    controls: Vec<Option<(i32, i32)>>,
}

struct Drawn {
    class: &'static str,
    attr: String,
    color: &'static str,
    line: Polyline,
}

impl Polyline {
    fn push(&mut self, p: (i32, i32), control: Option<(i32, i32)>) {
        if self.points.last() == Some(&p) {
            return;
        }
        if !self.points.is_empty() {
            self.controls.push(control);
        }
        self.points.push(p);
    }

    fn reversed(&self) -> Polyline {
        let mut points = self.points.clone();
        let mut controls = self.controls.clone();
        points.reverse();
        controls.reverse();
        Polyline { points, controls }
    }

    fn extend(&mut self, other: &Polyline) {
        for (k, &p) in other.points.iter().enumerate() {
            let control = if k == 0 { None } else { other.controls[k - 1] };
            self.push(p, control);
        }
    }

    fn data(&self) -> String {
        let mut d = String::new();
        for (k, &(x, y)) in self.points.iter().enumerate() {
            match (k, k.checked_sub(1).and_then(|j| self.controls[j])) {
                (0, _) => write!(d, "M{x},{y}"),
                (_, Some((cx, cy))) => write!(d, " Q{cx},{cy} {x},{y}"),
                (_, None) => write!(d, " L{x},{y}"),
            }
            .expect("writing to a String");
        }
        d
    }
}

impl Frame {
    fn new(slices: Vec<Slice>) -> Frame {
        let mut cur: Vec<usize> = Vec::new();
        let mut before = Vec::with_capacity(slices.len() + 1);
        let mut life: Vec<(usize, usize)> = Vec::new();
        let mut width = 0;
        for (i, s) in slices.iter().enumerate() {
            before.push(cur.clone());
            if let Kind::Cross { .. } = s.kind {
                cur.swap(s.level, s.level + 1);
            } else {
                for e in cur.drain(s.level..s.level + s.consumed) {
                    life[e].1 = i;
                }
                let fresh: Vec<usize> = (life.len()..life.len() + s.produced).collect();
                life.extend(fresh.iter().map(|_| (i, i)));
                cur.splice(s.level..s.level, fresh);
            }
            width = width.max(cur.len());
        }
        before.push(cur);
        Frame {
            slices,
            before,
            life,
            width,
        }
    }

    fn x(&self, i: usize) -> i32 {
        MARGIN + COL * i as i32 + HALF
    }

    /// Vertical coordinate of doubled level `level2`, so half levels stay integral.
    fn y2(&self, level2: i32) -> i32 {
        MARGIN + ROW * (2 * (self.width as i32 - 1) - level2) / 2
    }

    fn y(&self, level: usize) -> i32 {
        self.y2(2 * level as i32)
    }

    fn span(&self, i: usize) -> usize {
        let s = &self.slices[i];
        s.consumed.max(s.produced).max(1)
    }

    fn anchor(&self, i: usize) -> (i32, i32) {
        let s = &self.slices[i];
        (
            self.x(i),
            self.y2(2 * s.level as i32 + self.span(i) as i32 - 1),
        )
    }

    fn pos(&self, i: usize, strand: usize) -> usize {
        self.before[i]
            .iter()
            .position(|&t| t == strand)
            .expect("strand alive at this slice")
    }

    /// Left-to-right polyline of one strand, from its start anchor to its end anchor.
    fn strand(&self, s: usize) -> Polyline {
        let (start, end) = self.life[s];
        let cusp = |i: usize| matches!(self.slices[i].kind, Kind::Open | Kind::Close);
        let mut p = Polyline::default();
        let a = self.anchor(start);
        p.push(a, None);
        let first = (self.x(start) + HALF, self.y(self.pos(start + 1, s)));
        // Cusp branches leave the cusp point horizontally.
        p.push(first, cusp(start).then_some((a.0 + HALF * 3 / 5, a.1)));
        for i in start + 1..end {
            p.push((self.x(i) - HALF, self.y(self.pos(i, s))), None);
            p.push((self.x(i) + HALF, self.y(self.pos(i + 1, s))), None);
        }
        let b = self.anchor(end);
        p.push((self.x(end) - HALF, self.y(self.pos(end, s))), None);
        p.push(b, cusp(end).then_some((b.0 - HALF * 3 / 5, b.1)));
        p
    }

    fn svg(&self, paths: &[Drawn]) -> String {
        let n = self.slices.len() as i32;
        let w = 2 * MARGIN + COL * n;
        let h = 2 * MARGIN + ROW * (self.width as i32 - 1).max(0);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<g fill="none" stroke-width="2" stroke-linecap="round">"#
        );
        for p in paths {
            let _ = writeln!(
                out,
                r#"<path class="{}" {} stroke="{}" d="{}"/>"#,
                p.class,
                p.attr,
                p.color,
                p.line.data()
            );
        }
        // Under-strand gaps: repaint the middle of every over-strand on a white halo.
        for (i, s) in self.slices.iter().enumerate() {
            let Kind::Cross { falling_over } = s.kind else {
                continue;
            };
            let (lo, hi) = (self.y(s.level), self.y(s.level + 1));
            let (y0, y1) = if falling_over { (hi, lo) } else { (lo, hi) };
            let x = self.x(i);
            let q = HALF / 2;
            let (ya, yb) = ((3 * y0 + y1) / 4, (y0 + 3 * y1) / 4);
            let over = self.before[i][if falling_over { s.level + 1 } else { s.level }];
            let color = paths
                .iter()
                .find(|p| {
                    p.line.points.contains(&(x - HALF, y0))
                        && p.line.points.contains(&(x + HALF, y1))
                })
                .map_or("black", |p| p.color);
            let _ = writeln!(
                out,
                r#"<g class="crossing" data-event="{i}" data-over="{over}"><line x1="{}" y1="{ya}" x2="{}" y2="{yb}" stroke="white" stroke-width="8"/><line x1="{}" y1="{ya}" x2="{}" y2="{yb}" stroke="{color}"/></g>"#,
                x - q,
                x + q,
                x - q,
                x + q
            );
        }
        let _ = writeln!(out, "</g>");
        for (i, s) in self.slices.iter().enumerate() {
            let Kind::Vertex { name } = &s.kind else {
                continue;
            };
            let (x, y) = self.anchor(i);
            let _ = writeln!(
                out,
                r#"<circle class="vertex" data-vertex="{name}" cx="{x}" cy="{y}" r="4" fill="black"/>"#
            );
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{}" font-family="monospace" font-size="12" text-anchor="middle">{name}</text>"#,
                y - 8
            );
        }
        out.push_str("</svg>\n");
        out
    }

    fn ascii(&self) -> String {
        let rows = (2 * self.width).max(2) - 1;
        let cols = 3 * self.slices.len();
        let mut grid = vec![vec![' '; cols]; rows];
        let row = |l: usize| 2 * (self.width - 1 - l);
        let mut set = |r: usize, c: usize, ch: char| grid[r][c] = ch;
        for (i, s) in self.slices.iter().enumerate() {
            let c = 3 * i;
            // Strands that pass through (crossing strands included).
            for (b, &strand) in self.before[i].iter().enumerate() {
                let Some(a) = self.before[i + 1].iter().position(|&t| t == strand) else {
                    continue;
                };
                let (r0, r1) = (row(b), row(a));
                if r0 == r1 {
                    for k in 0..3 {
                        set(r0, c + k, '-');
                    }
                    continue;
                }
                let (ch, steep) = if r1 < r0 {
                    ('/', r0 - r1)
                } else {
                    ('\\', r1 - r0)
                };
                set(r0, c, ch);
                set(r1, c + 2, ch);
                for r in r0.min(r1) + 1..r0.max(r1) {
                    set(r, c + 1, if steep == 2 { ch } else { '|' });
                }
            }
            let k = s.level;
            match &s.kind {
                Kind::Cross { falling_over } => {
                    set(row(k) - 1, c + 1, if *falling_over { 'X' } else { 'x' })
                }
                Kind::Open => {
                    set(row(k) - 1, c + 1, '<');
                    set(row(k), c + 2, '\\');
                    set(row(k + 1), c + 2, '/');
                }
                Kind::Close => {
                    set(row(k) - 1, c + 1, '>');
                    set(row(k), c, '/');
                    set(row(k + 1), c, '\\');
                }
                Kind::Vertex { .. } => {
                    let span = self.span(i);
                    for j in 0..span {
                        set(row(k + j), c + 1, '|');
                    }
                    for r in row(k + span - 1)..row(k) {
                        set(r, c + 1, '|');
                    }
                    for j in 0..s.consumed {
                        set(row(k + j), c, '-');
                    }
                    for j in 0..s.produced {
                        set(row(k + j), c + 2, '-');
                    }
                    set(row(k) + 1 - span, c + 1, '*');
                }
            }
        }
        let mut out = String::new();
        for line in grid {
            let text: String = line.into_iter().collect();
            out.push_str(text.trim_end());
            out.push('\n');
        }
        out
    }
}

pub fn render_front(d: &FrontDiagram, format: Format) -> Result<String, DiagramError> {
    let g = d.validate()?;
    let slices = d
        .events
        .iter()
        .map(|e| Slice {
            kind: match e {
                Event::LeftCusp { .. } => Kind::Open,
                Event::RightCusp { .. } => Kind::Close,
                // In a front the strand of smaller slope is in front.
                Event::Crossing { .. } => Kind::Cross { falling_over: true },
                Event::Vertex { name, .. } => Kind::Vertex { name: name.clone() },
            },
            level: e.level(),
            consumed: e.consumed(),
            produced: e.produced(),
        })
        .collect();
    let f = Frame::new(slices);
    Ok(match format {
        Format::Ascii => f.ascii(),
        Format::Svg => {
            // Frame strand ids follow creation order, as do the sweep's.
            let paths: Vec<Drawn> = g
                .edges
                .iter()
                .enumerate()
                .map(|(k, edge)| {
                    let mut p = Polyline::default();
                    for step in &g.paths[edge] {
                        let s = f.strand(step.strand);
                        p.extend(&if step.rightward { s } else { s.reversed() });
                    }
                    Drawn {
                        class: "edge",
                        attr: format!(r#"data-edge="{edge}""#),
                        color: PALETTE[k % PALETTE.len()],
                        line: p,
                    }
                })
                .collect();
            f.svg(&paths)
        }
    })
}

pub fn render_link(l: &LinkDiagram, format: Format) -> Result<String, LinkError> {
    let a = l.analyze()?;
    let slices = l
        .events
        .iter()
        .map(|e| match e {
            LinkEvent::Cap { level, .. } => Slice {
                kind: Kind::Open,
                level: *level,
                consumed: 0,
                produced: 2,
            },
            LinkEvent::Cup { level } => Slice {
                kind: Kind::Close,
                level: *level,
                consumed: 2,
                produced: 0,
            },
            LinkEvent::Cross {
                level,
                ascending_over,
                ..
            } => Slice {
                kind: Kind::Cross {
                    falling_over: !ascending_over,
                },
                level: *level,
                consumed: 2,
                produced: 2,
            },
        })
        .collect();
    let f = Frame::new(slices);
    Ok(match format {
        Format::Ascii => f.ascii(),
        Format::Svg => {
            let paths: Vec<Drawn> = a
                .strands
                .iter()
                .enumerate()
                .map(|(s, st)| {
                    let p = f.strand(s);
                    Drawn {
                        class: "strand",
                        attr: format!(r#"data-component="{}""#, st.component),
                        color: PALETTE[st.component % PALETTE.len()],
                        line: if st.rightward { p } else { p.reversed() },
                    }
                })
                .collect();
            f.svg(&paths)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realization::realize_theta;
    use crate::ribbon::push_off;

    fn minimal() -> FrontDiagram {
        realize_theta([-1, -1, -1], [0, 0, 0]).unwrap()
    }

    #[test]
    fn minimal_svg_structure() {
        let svg = render_front(&minimal(), Format::Svg).unwrap();
        assert_eq!(svg.matches(r#"class="vertex""#).count(), 2);
        assert_eq!(svg.matches(r#"class="edge""#).count(), 3);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn deterministic() {
        let d = realize_theta([-2, -3, -2], [1, 0, -1]).unwrap();
        for format in [Format::Svg, Format::Ascii] {
            assert_eq!(
                render_front(&d, format).unwrap(),
                render_front(&d, format).unwrap()
            );
        }
    }

    #[test]
    fn push_off_crossings_are_drawn() {
        let l = push_off(&minimal()).unwrap();
        let svg = render_link(&l, Format::Svg).unwrap();
        assert_eq!(
            svg.matches(r#"class="crossing""#).count(),
            l.crossing_count()
        );
        let ascii = render_link(&l, Format::Ascii).unwrap();
        assert_eq!(ascii.matches(['X', 'x']).count(), l.crossing_count());
    }

    #[test]
    fn ascii_minimal() {
        let text = render_front(&minimal(), Format::Ascii).unwrap();
        assert_eq!(text, " |--|\n |  |\n *--*\n |  |\n |--|\n");
    }
}
