mod common;

use common::{as_poly, corpus, cycle_invariants, link_signs, skein_bracket, Poly};
use thetafront::bracket::kauffman_bracket;
use thetafront::invariants::invariant_vector;
use thetafront::link::{LinkDiagram, LinkEvent, Origin};
use thetafront::moves::random_walk;
use thetafront::pretzel::{pretzel_diagram, PretzelCoefficients};
use thetafront::realization::realize_theta;
use thetafront::ribbon::push_off;

fn cross(level: usize, ascending_over: bool) -> LinkEvent {
    LinkEvent::Cross {
        level,
        ascending_over,
        origin: Origin::Unspecified,
    }
}

/// Closure of a two-strand twist whose twisted strands both run rightward.
fn twist(n: usize, ascending_over: bool) -> LinkDiagram {
    let mut events = vec![
        LinkEvent::Cap {
            level: 0,
            lower_rightward: false,
        },
        LinkEvent::Cap {
            level: 2,
            lower_rightward: true,
        },
    ];
    events.extend((0..n).map(|_| cross(1, ascending_over)));
    events.extend([LinkEvent::Cup { level: 2 }, LinkEvent::Cup { level: 0 }]);
    LinkDiagram { events }
}

fn poly(terms: &[(i32, i64)]) -> Poly {
    terms.iter().copied().collect()
}

#[test]
fn skein_oracle_knows_the_trefoil() {
    // Parallel strands with the falling one on top cross positively, as
    // at a crossing of a front.
    let l = twist(3, false);
    let s = link_signs(&l);
    assert_eq!(s.components, 1);
    assert_eq!(s.self_writhe, vec![3]);
    // Right-handed trefoil: <D> = -A^5 - A^-3 + A^-7.
    assert_eq!(skein_bracket(&l), poly(&[(5, -1), (-3, -1), (-7, 1)]));
}

#[test]
fn skein_oracle_knows_the_hopf_link() {
    let l = twist(2, false);
    let s = link_signs(&l);
    assert_eq!(s.components, 2);
    assert_eq!(s.linking, vec![vec![0, 1], vec![1, 0]]);
    assert_eq!(skein_bracket(&l), poly(&[(4, -1), (-4, -1)]));
    assert_eq!(link_signs(&twist(2, true)).linking[0][1], -1);
    assert_eq!(skein_bracket(&twist(2, true)), poly(&[(4, -1), (-4, -1)]));
}

#[test]
fn bracket_matches_skein_on_twists() {
    for n in 0..=8 {
        for asc in [true, false] {
            let l = twist(n, asc);
            assert_eq!(
                as_poly(&kauffman_bracket(&l, 24).unwrap()),
                skein_bracket(&l),
                "n = {n}"
            );
        }
    }
}

#[test]
fn bracket_matches_skein_on_pretzels() {
    let coeffs = [
        [-1, -1, -1],
        [1, 1, 1],
        [-2, -2, -2],
        [-3, 1, -1],
        [2, -2, 0],
        [-1, 3, -3],
    ];
    for a in coeffs {
        let l = pretzel_diagram(PretzelCoefficients(a));
        assert_eq!(
            as_poly(&kauffman_bracket(&l, 24).unwrap()),
            skein_bracket(&l),
            "{a:?}"
        );
    }
}

#[test]
fn bracket_matches_skein_on_small_push_offs() {
    let mut checked = 0;
    for d in corpus() {
        for k in 0..6 {
            let w = random_walk(&d, k as usize, 40 + k);
            let l = push_off(&w.diagram).unwrap();
            if l.crossing_count() > 10 {
                continue;
            }
            assert_eq!(
                as_poly(&kauffman_bracket(&l, 24).unwrap()),
                skein_bracket(&l)
            );
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn link_signs_match_the_library() {
    for d in corpus() {
        let l = push_off(&d).unwrap();
        let a = l.analyze().unwrap();
        let s = link_signs(&l);
        assert_eq!(a.components, s.components);
        let lib_self: Vec<i32> = (0..a.components)
            .map(|c| a.self_writhe(c).unwrap())
            .collect();
        assert_eq!(lib_self, s.self_writhe);
        if a.components > 1 {
            let m = a.linking_matrix().unwrap();
            for (i, row) in m.iter().enumerate() {
                for (j, &lk) in row.iter().enumerate() {
                    if i != j {
                        assert_eq!(lk, s.linking[i][j]);
                    }
                }
            }
        }
    }
}

#[test]
fn pretzel_band_linking_from_the_oracle() {
    // Each band of an all-even pretzel joins two components; its linking
    // number is fixed by the twist count and the antiparallel orientation.
    for a in [[-2, -2, -2], [2, 2, 2], [-4, 2, 0]] {
        let s = link_signs(&pretzel_diagram(PretzelCoefficients(a)));
        assert_eq!(s.components, 3);
        let total: i32 = s.linking.iter().flatten().sum::<i32>() / 2;
        assert_eq!(total, -a.iter().sum::<i32>() / 2, "{a:?}");
    }
}

#[test]
fn cycle_oracle_on_the_minimal_front() {
    let d = realize_theta([-1, -1, -1], [0, 0, 0]).unwrap();
    assert_eq!(cycle_invariants(&d), [(-1, 0); 3]);
}

#[test]
fn cycle_oracle_matches_invariant_vector() {
    for d in corpus() {
        for k in 0..4 {
            let w = random_walk(&d, 25, 7 * k);
            let v = invariant_vector(&w.diagram).unwrap();
            let o = cycle_invariants(&w.diagram);
            assert_eq!(o.map(|p| p.0), v.tb);
            assert_eq!(o.map(|p| p.1), v.rot);
        }
    }
}

#[test]
fn realization_closed_loop_small() {
    for (tb, rot) in common::admissible(-3..=-1) {
        let d = realize_theta(tb, rot).unwrap();
        let o = cycle_invariants(&d);
        assert_eq!((o.map(|p| p.0), o.map(|p| p.1)), (tb, rot));
    }
}
