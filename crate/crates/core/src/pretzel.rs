//! Pretzel coefficients of a planar theta-graph, the reference pretzel
//! diagrams, the band-twist ledger, and the push-off certificate.

use serde::Serialize;

use crate::bracket::{jones, BracketError};
use crate::diagram::{
    trace_cycle, DiagramError, Event, FrontDiagram, GraphStructure, Mode, TraceItem,
};
use crate::invariants::invariant_vector_of;
use crate::link::{LinkAnalysis, LinkDiagram, LinkEvent, Origin};
use crate::poly::LaurentPolynomial;
use crate::ribbon::{components_of, expected_self_linking, push_off_of, vertex_type, VertexType};

/// Signed half-twist counts of the three bands; band `i` runs along edge `e{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PretzelCoefficients(pub [i32; 3]);

impl PretzelCoefficients {
    pub fn all_odd(&self) -> bool {
        self.0.iter().all(|a| a % 2 != 0)
    }

    pub fn all_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }
}

/// Band `i` collects the tb of the two cycles through edge `i` minus the third.
pub fn pretzel_coefficients(tb: [i32; 3]) -> PretzelCoefficients {
    PretzelCoefficients([
        tb[0] + tb[1] - tb[2],
        tb[0] + tb[2] - tb[1],
        tb[1] + tb[2] - tb[0],
    ])
}

/// Strand ids (in cap order) entering each band right after the three caps.
const BAND_STRANDS: [(usize, usize); 3] = [(0, 2), (3, 4), (5, 1)];

/// Two disks joined by three vertical bands, drawn sideways: three caps, the
/// twists of each band, three cups. Negative coefficients give crossings
/// that are positive once the two strands of a band run antiparallel.
pub fn pretzel_diagram(a: PretzelCoefficients) -> LinkDiagram {
    let cap = |level| LinkEvent::Cap {
        level,
        lower_rightward: false,
    };
    let mut events = vec![cap(0), cap(1), cap(3)];
    for (band, &n) in a.0.iter().enumerate() {
        for _ in 0..n.unsigned_abs() {
            events.push(LinkEvent::Cross {
                level: 2 * band,
                ascending_over: n < 0,
                origin: Origin::Twist { band },
            });
        }
    }
    events.extend([3, 1, 0].map(|level| LinkEvent::Cup { level }));
    let mut l = LinkDiagram { events };
    // Boundary orientation of the surface: the outer cap's lower strand runs
    // rightward, which makes every band antiparallel.
    l.orient_with(|cap_event| cap_event == 0)
        .expect("pretzel diagrams are orientable");
    l
}

/// Signed crossing counts between edges of a theta front. Self-crossings of
/// an edge do not depend on orientation; a crossing between two edges is
/// signed in the cycle containing both, which runs one of them backwards.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossingCounts {
    /// `cr[e_i]`.
    pub edge: [i32; 3],
    /// `cr[e1,e2]`, `cr[e1,e3]`, `cr[e2,e3]`.
    pub pair: [i32; 3],
}

impl CrossingCounts {
    pub fn pair(&self, i: usize, j: usize) -> i32 {
        match (i.min(j), i.max(j)) {
            (0, 1) => self.pair[0],
            (0, 2) => self.pair[1],
            (1, 2) => self.pair[2],
            _ => panic!("edges {i} and {j} do not form a pair"),
        }
    }
}

fn edge_index(label: &str) -> Option<usize> {
    match label {
        "e1" => Some(0),
        "e2" => Some(1),
        "e3" => Some(2),
        _ => None,
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

pub fn crossing_counts(d: &FrontDiagram, g: &GraphStructure) -> CrossingCounts {
    let sweep = &g.sweep;
    let mut c = CrossingCounts::default();
    for (x, e) in d.events.iter().enumerate() {
        let Event::Crossing { level } = e else {
            continue;
        };
        let (s, t) = (sweep.before[x][*level], sweep.before[x][*level + 1]);
        let i = edge_index(&sweep.strands[s].label).expect("theta edge");
        let j = edge_index(&sweep.strands[t].label).expect("theta edge");
        let dir = |s| if g.declared_direction(s) { 1 } else { -1 };
        let product = dir(s) * dir(t);
        if i == j {
            c.edge[i] += product;
        } else {
            let slot = match (i.min(j), i.max(j)) {
                (0, 1) => 0,
                (0, 2) => 1,
                _ => 2,
            };
            c.pair[slot] -= product;
        }
    }
    c
}

fn cusps_on_edges(d: &FrontDiagram, g: &GraphStructure) -> [i32; 3] {
    let mut out = [0; 3];
    for (i, e) in d.events.iter().enumerate() {
        let label = match e {
            Event::LeftCusp { edge, .. } => edge.as_str(),
            Event::RightCusp { level } => g.sweep.label_at(i, *level),
            _ => continue,
        };
        if let Some(k) = edge_index(label) {
            out[k] += 1;
        }
    }
    out
}

/// Band-twist bookkeeping for one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BandLedger {
    /// 1-based edge index.
    pub edge: usize,
    /// The coefficient from the tb formula.
    pub coefficient: i32,
    /// `2 cr[e_i] + cr[e_i,e_j] + cr[e_i,e_k] - cr[e_j,e_k]`.
    pub b: i32,
    pub cusps: i32,
    /// Half the turning corners of the two cycles through the edge, minus
    /// half those of the third cycle. Equals 1 in standard form.
    pub corner_term: i32,
}

impl BandLedger {
    /// The twist count read off the band: `b - cusps - corner_term`.
    pub fn band_twists(&self) -> i32 {
        self.b - self.cusps - self.corner_term
    }

    /// `b - cusps - 1`, the count for a diagram in standard form.
    pub fn standard_form_value(&self) -> i32 {
        self.b - self.cusps - 1
    }
}

fn turning_corners(d: &FrontDiagram, g: &GraphStructure, id: usize) -> Result<i32, DiagramError> {
    Ok(trace_cycle(d, g, id)?
        .items
        .iter()
        .filter(|it| matches!(it, TraceItem::Corner { turn: Some(_), .. }))
        .count() as i32)
}

/// Ledger for all three edges.
pub fn band_ledger(d: &FrontDiagram) -> Result<[BandLedger; 3], DiagramError> {
    require_theta(d)?;
    let g = d.validate()?;
    let v = invariant_vector_of(d, &g)?;
    let a = pretzel_coefficients(v.tb);
    let c = crossing_counts(d, &g);
    let cusps = cusps_on_edges(d, &g);
    // Cycles 1, 2, 3 pair the edges (1,2), (1,3), (2,3).
    let mut corners = [0; 3];
    for (k, slot) in corners.iter_mut().enumerate() {
        *slot = turning_corners(d, &g, k + 1)?;
    }
    let ledger = |i: usize| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let b = 2 * c.edge[i] + c.pair(i, j) + c.pair(i, k) - c.pair(j, k);
        // Cycle index for a pair of edges.
        let cyc = |p: usize, q: usize| match (p.min(q), p.max(q)) {
            (0, 1) => 0,
            (0, 2) => 1,
            _ => 2,
        };
        let twice = corners[cyc(i, j)] + corners[cyc(i, k)] - corners[cyc(j, k)];
        debug_assert!(twice % 2 == 0);
        BandLedger {
            edge: i + 1,
            coefficient: a.0[i],
            b,
            cusps: cusps[i],
            corner_term: twice / 2,
        }
    };
    Ok([ledger(0), ledger(1), ledger(2)])
}

/// `b_i` for the 1-based edge index `i`.
pub fn b1_quantity(d: &FrontDiagram, i: usize) -> Result<i32, DiagramError> {
    if !(1..=3).contains(&i) {
        return Err(DiagramError::EdgeIndex(i));
    }
    Ok(band_ledger(d)?[i - 1].b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    Check {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkSummary {
    pub crossings: usize,
    pub components: usize,
    pub self_linking: Vec<i32>,
    /// Linking number of the two components meeting in each band.
    pub band_linking: Option<[i32; 3]>,
    pub jones: Option<LaurentPolynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PretzelReport {
    pub coefficients: PretzelCoefficients,
    pub vertex_type: Option<VertexType>,
    pub push_off: LinkSummary,
    pub pretzel: LinkSummary,
    /// Set when the Jones polynomials agree only after mirroring.
    pub mirror: Option<bool>,
    pub checks: Vec<Check>,
}

impl PretzelReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn lk(a: &LinkAnalysis, p: usize, q: usize) -> i32 {
    let twice: i32 = a
        .crossings
        .iter()
        .filter(|c| (c.over, c.under) == (p, q) || (c.over, c.under) == (q, p))
        .map(|c| c.sign)
        .sum();
    twice / 2
}

fn summarize(
    l: &LinkDiagram,
    a: &LinkAnalysis,
    band_linking: Option<[i32; 3]>,
    cap: usize,
) -> LinkSummary {
    LinkSummary {
        crossings: l.crossing_count(),
        components: a.components,
        self_linking: (0..a.components)
            .map(|c| a.self_writhe(c).expect("component in range"))
            .collect(),
        band_linking,
        jones: jones(l, cap).ok(),
    }
}

/// Certifies that the push-off of `d` matches the pretzel link predicted
/// from its tb. The caller asserts that `d` is topologically planar.
pub fn verify_pretzel(d: &FrontDiagram, cap: usize) -> Result<PretzelReport, DiagramError> {
    require_theta(d)?;
    let g = d.validate()?;
    let v = invariant_vector_of(d, &g)?;
    let coefficients = pretzel_coefficients(v.tb);
    let push = push_off_of(d, &g);
    let pa = push
        .analyze()
        .expect("push-off is a closed oriented diagram");
    let comps = components_of(&push, &pa).expect("push-off is a closed oriented diagram");
    let pretzel = pretzel_diagram(coefficients);
    let qa = pretzel
        .analyze()
        .expect("pretzel diagram is closed and oriented");
    let mut checks = Vec::new();

    let expected_count = if coefficients.all_odd() {
        Some(1)
    } else if coefficients.all_even() {
        Some(3)
    } else {
        None
    };
    checks.push(check(
        "component_count",
        pa.components == qa.components && expected_count == Some(pa.components),
        format!(
            "push-off {}, pretzel {}, parity rule {:?}",
            pa.components, qa.components, expected_count
        ),
    ));

    let mut push_bands = None;
    let mut pretzel_bands = None;
    if pa.components == 3 && qa.components == 3 {
        let mut bands = [0; 3];
        for (i, slot) in bands.iter_mut().enumerate() {
            let label = format!("e{}", i + 1);
            let through: Vec<usize> = comps
                .iter()
                .filter(|c| c.edges.iter().any(|(e, _)| *e == label))
                .map(|c| c.index)
                .collect();
            if let [p, q] = through[..] {
                *slot = lk(&pa, p, q);
            }
        }
        push_bands = Some(bands);
        pretzel_bands = Some(
            BAND_STRANDS.map(|(x, y)| lk(&qa, qa.strands[x].component, qa.strands[y].component)),
        );
        checks.push(check(
            "linking",
            push_bands == pretzel_bands,
            format!("push-off {:?}, pretzel {:?}", bands, pretzel_bands.unwrap()),
        ));
        let half = coefficients.0.map(|a| a / 2);
        checks.push(check(
            "linking_half_twists",
            bands == half,
            format!("band linking {bands:?}, half twists {half:?}"),
        ));
    }

    let sl_ok;
    let sl_detail;
    if pa.components == 1 {
        let sl = pa.self_writhe(0).expect("one component");
        sl_ok = sl == 1;
        sl_detail = format!("sl {sl}, expected 1");
    } else {
        let pairs: Vec<(i32, Option<i32>)> = comps
            .iter()
            .map(|c| (c.self_linking, expected_self_linking(d, &g, &c.edges)))
            .collect();
        sl_ok = pairs.iter().all(|(sl, want)| Some(*sl) == *want);
        sl_detail = format!("(sl, tb - rot of the followed cycle): {pairs:?}");
    }
    checks.push(check("self_linking", sl_ok, sl_detail));

    let push_summary = summarize(&push, &pa, push_bands, cap);
    let pretzel_summary = summarize(&pretzel, &qa, pretzel_bands, cap);
    let mut mirror = None;
    match (&push_summary.jones, &pretzel_summary.jones) {
        (Some(p), Some(q)) => {
            let same = p == q;
            let mirrored = !same && *p == q.mirror();
            if same || mirrored {
                mirror = Some(mirrored);
            }
            checks.push(check(
                "jones",
                same || mirrored,
                if mirrored {
                    "equal to the pretzel's mirror image".into()
                } else {
                    format!(
                        "push-off {}, pretzel {}",
                        p.display_with("t", 2),
                        q.display_with("t", 2)
                    )
                },
            ));
        }
        _ => {
            let over = [(&push, "push-off"), (&pretzel, "pretzel")]
                .iter()
                .filter_map(|(l, name)| match jones(l, cap) {
                    Err(BracketError::CapExceeded { crossings, .. }) => {
                        Some(format!("{name} has {crossings}"))
                    }
                    _ => None,
                })
                .collect::<Vec<_>>()
                .join(", ");
            checks.push(Check {
                name: "jones",
                status: Status::Skipped,
                detail: format!("over the crossing cap of {cap}: {over}"),
            });
        }
    }

    Ok(PretzelReport {
        coefficients,
        vertex_type: vertex_type(d).ok(),
        push_off: push_summary,
        pretzel: pretzel_summary,
        mirror,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{apply_move, enumerate_moves};
    use crate::realization::realize_theta;

    #[test]
    fn coefficients() {
        assert_eq!(pretzel_coefficients([-1, -1, -1]).0, [-1, -1, -1]);
        assert_eq!(pretzel_coefficients([-1, -5, -3]).0, [-3, 1, -7]);
        let even = pretzel_coefficients([-2, -2, -2]);
        assert_eq!(even.0, [-2, -2, -2]);
        assert!(even.all_even());
    }

    #[test]
    fn pretzel_components() {
        let unlink = pretzel_diagram(PretzelCoefficients([0, 0, 0]))
            .analyze()
            .unwrap();
        assert_eq!(unlink.components, 3);
        assert_eq!(unlink.linking_matrix().unwrap(), vec![vec![0; 3]; 3]);
        assert_eq!(
            pretzel_diagram(PretzelCoefficients([-1, -1, -1]))
                .analyze()
                .unwrap()
                .components,
            1
        );
        // Mixed parity: one even band still gives a knot, two give a two-component link.
        assert_eq!(
            pretzel_diagram(PretzelCoefficients([1, -2, 3]))
                .analyze()
                .unwrap()
                .components,
            1
        );
        assert_eq!(
            pretzel_diagram(PretzelCoefficients([2, -2, 3]))
                .analyze()
                .unwrap()
                .components,
            2
        );
        let even = pretzel_diagram(PretzelCoefficients([-2, -2, -2]))
            .analyze()
            .unwrap();
        assert_eq!(even.components, 3);
        // Antiparallel bands: a negative full twist links its two components positively.
        for (x, y) in BAND_STRANDS {
            assert_eq!(
                lk(&even, even.strands[x].component, even.strands[y].component),
                1
            );
        }
    }

    #[test]
    fn minimal_theta_certificate() {
        let d = realize_theta([-1, -1, -1], [0, 0, 0]).unwrap();
        let r = verify_pretzel(&d, 24).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.mirror, Some(false));
        // The trefoil, with the chirality calibrated here.
        let trefoil = LaurentPolynomial::from_terms([(2, 1), (6, 1), (8, -1)]);
        assert_eq!(r.push_off.jones, Some(trefoil));
    }

    #[test]
    fn odd_example_has_one_component() {
        let d = realize_theta([-1, -5, -3], [0, 0, 0]).unwrap();
        let r = verify_pretzel(&d, 24).unwrap();
        assert_eq!(r.coefficients.0, [-3, 1, -7]);
        assert_eq!(r.push_off.components, 1);
        assert_eq!(r.push_off.self_linking, vec![1]);
        assert_eq!(r.check("component_count").unwrap().status, Status::Pass);
    }

    #[test]
    fn even_example_links_positively() {
        let d = realize_theta([-2, -2, -2], [1, 1, -1]).unwrap();
        let r = verify_pretzel(&d, 24).unwrap();
        assert_eq!(r.push_off.components, 3);
        assert_eq!(r.push_off.band_linking, Some([1, 1, 1]));
        assert_eq!(r.check("linking").unwrap().status, Status::Pass);
        assert_eq!(r.check("self_linking").unwrap().status, Status::Pass);
        // Half the (negative) twist count has the opposite sign.
        assert_eq!(r.check("linking_half_twists").unwrap().status, Status::Fail);
    }

    #[test]
    fn ledger_at_zero_crossings() {
        let d = realize_theta([-1, -1, -1], [0, 0, 0]).unwrap();
        for (i, row) in band_ledger(&d).unwrap().iter().enumerate() {
            assert_eq!(row.b, 0);
            assert_eq!(row.corner_term, 1);
            assert_eq!(row.coefficient, -row.cusps - 1);
            assert_eq!(b1_quantity(&d, i + 1).unwrap(), 0);
        }
        assert!(b1_quantity(&d, 4).is_err());
    }

    #[test]
    fn ledger_tracks_moves() {
        let d = realize_theta([-3, -4, -5], [2, 1, -2]).unwrap();
        for row in band_ledger(&d).unwrap() {
            assert_eq!(row.coefficient, row.standard_form_value(), "{row:?}");
        }
        for site in enumerate_moves(&d) {
            let e = apply_move(&d, &site).unwrap();
            for row in band_ledger(&e).unwrap() {
                assert_eq!(row.coefficient, row.band_twists(), "{site:?} {row:?}");
                if site.kind.keeps_vertex_corners() {
                    assert_eq!(
                        row.coefficient,
                        row.standard_form_value(),
                        "{site:?} {row:?}"
                    );
                }
            }
        }
    }
}
