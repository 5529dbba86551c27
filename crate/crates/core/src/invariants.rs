//! Thurston–Bennequin and rotation numbers of theta-graph cycles.

use serde::Serialize;

use crate::diagram::{
    trace_cycle, vertex_sides, CycleTraversal, DiagramError, FrontDiagram, GraphStructure, Mode,
    Partner, TraceItem, Turn,
};

/// Writhe of the cycle minus half its cusps, turning corners counted as cusps.
/// Crossings with edges outside the cycle do not count.
pub fn tb(t: &CycleTraversal) -> i32 {
    let mut writhe = 0;
    let mut cusps = 0;
    for item in &t.items {
        match item {
            TraceItem::Crossing { sign, partner, .. }
                if !matches!(partner, Partner::External { .. }) =>
            {
                writhe += sign
            }
            TraceItem::Cusp { .. } | TraceItem::Corner { turn: Some(_), .. } => cusps += 1,
            _ => {}
        }
    }
    debug_assert!(cusps % 2 == 0, "odd cusp count on a closed cycle");
    writhe - cusps / 2
}

/// Half of (down cusps - up cusps), turning corners included.
pub fn rot(t: &CycleTraversal) -> i32 {
    let mut balance = 0;
    for item in &t.items {
        match item {
            TraceItem::Cusp { turn, .. }
            | TraceItem::Corner {
                turn: Some(turn), ..
            } => balance += if *turn == Turn::Down { 1 } else { -1 },
            _ => {}
        }
    }
    debug_assert!(balance % 2 == 0, "odd cusp imbalance on a closed cycle");
    balance / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantVector {
    pub tb: [i32; 3],
    pub rot: [i32; 3],
    /// `rot1 - rot2 + rot3`.
    #[serde(rename = "R")]
    pub r: i32,
}

impl InvariantVector {
    pub fn new(tb: [i32; 3], rot: [i32; 3]) -> InvariantVector {
        InvariantVector {
            tb,
            rot,
            r: rot[0] - rot[1] + rot[2],
        }
    }
}

fn require_theta(d: &FrontDiagram) -> Result<(), DiagramError> {
    if d.mode != Mode::Theta {
        return Err(DiagramError::Shape {
            mode: d.mode.as_str(),
            message: "a theta diagram is required".into(),
        });
    }
    Ok(())
}

pub fn invariant_vector(d: &FrontDiagram) -> Result<InvariantVector, DiagramError> {
    require_theta(d)?;
    let g = d.validate()?;
    invariant_vector_of(d, &g)
}

pub fn invariant_vector_of(
    d: &FrontDiagram,
    g: &GraphStructure,
) -> Result<InvariantVector, DiagramError> {
    let mut tbv = [0; 3];
    let mut rotv = [0; 3];
    for i in 0..3 {
        let t = trace_cycle(d, g, i + 1)?;
        tbv[i] = tb(&t);
        rotv[i] = rot(&t);
    }
    Ok(InvariantVector::new(tbv, rotv))
}

/// tb and rot of every component of a knot-mode diagram.
pub fn knot_invariants(d: &FrontDiagram) -> Result<Vec<(i32, i32)>, DiagramError> {
    let g = d.validate()?;
    g.cycles
        .iter()
        .map(|c| trace_cycle(d, &g, c.id).map(|t| (tb(&t), rot(&t))))
        .collect()
}

/// Standard form near the vertices: `a` emits all three edges with `e1` on
/// top and `e3` at the bottom, and `b` absorbs all three from its left.
pub fn check_standard_form(d: &FrontDiagram, g: &GraphStructure) -> Result<(), DiagramError> {
    require_theta(d)?;
    let (a_left, a_right) = vertex_sides(d, &g.sweep, "a")?;
    if !a_left.is_empty() || a_right != ["e3", "e2", "e1"] {
        return Err(DiagramError::NotStandard("a".into()));
    }
    let (b_left, b_right) = vertex_sides(d, &g.sweep, "b")?;
    if b_left.len() != 3 || !b_right.is_empty() {
        return Err(DiagramError::NotStandard("b".into()));
    }
    Ok(())
}

/// Top-to-bottom edge indices (1-based) at `b` in a standard-form diagram.
pub fn order_at_b(d: &FrontDiagram, g: &GraphStructure) -> Result<[u8; 3], DiagramError> {
    check_standard_form(d, g)?;
    let (left, _) = vertex_sides(d, &g.sweep, "b")?;
    let mut out = [0u8; 3];
    for (slot, label) in out.iter_mut().zip(left.iter().rev()) {
        *slot = label[1..]
            .parse()
            .map_err(|_| DiagramError::NotStandard("b".into()))?;
    }
    Ok(out)
}

/// One row of the table of corner types at `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TableRow {
    /// Row number 1..=8; each digit of the row's pattern reads down (+) or
    /// up (-) for the corner of C1, C2, C3 at `b`.
    pub case: u8,
    /// The value of R forced by the row.
    #[serde(rename = "R")]
    pub r: i32,
    pub corners_down: [bool; 3],
}

/// Row index (1..=8) for a pattern of corner types at `b`, listed
/// `+++, ++-, +-+, +--, -++, -+-, --+, ---` with `+` meaning down.
pub fn row_for(corners_down: [bool; 3]) -> u8 {
    let bits = corners_down.map(|d| u8::from(!d));
    1 + 4 * bits[0] + 2 * bits[1] + bits[2]
}

/// R forced by each row; `None` for the two rows no diagram can produce.
pub fn row_r(case: u8) -> Option<i32> {
    match case {
        1 | 4 | 7 => Some(0),
        2 | 5 | 8 => Some(-1),
        _ => None,
    }
}

/// Reads the corner type of each cycle at `b` and returns its table row.
pub fn classify_r(d: &FrontDiagram) -> Result<TableRow, DiagramError> {
    require_theta(d)?;
    let g = d.validate()?;
    check_standard_form(d, &g)?;
    let mut down = [false; 3];
    for (i, slot) in down.iter_mut().enumerate() {
        let t = trace_cycle(d, &g, i + 1)?;
        let turn = t.items.iter().find_map(|item| match item {
            TraceItem::Corner { vertex, turn, .. } if vertex == "b" => Some(*turn),
            _ => None,
        });
        *slot = match turn {
            Some(Some(Turn::Down)) => true,
            Some(Some(Turn::Up)) => false,
            _ => return Err(DiagramError::NotStandard("b".into())),
        };
    }
    let case = row_for(down);
    let r = row_r(case).ok_or_else(|| DiagramError::NotStandard("b".into()))?;
    Ok(TableRow {
        case,
        r,
        corners_down: down,
    })
}
