//! Kauffman bracket by full state sum, and the Jones polynomial.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::link::{LinkDiagram, LinkError, LinkEvent};
use crate::poly::LaurentPolynomial;

pub const DEFAULT_CROSSING_CAP: usize = 24;
/// Environment variable overriding [`DEFAULT_CROSSING_CAP`].
pub const CAP_ENV: &str = "THETAFRONT_CROSSING_CAP";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("{crossings} crossings exceed the state-sum cap of {cap}")]
    CapExceeded { crossings: usize, cap: usize },
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// The cap from the environment, or the default when unset or unparsable.
pub fn default_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CROSSING_CAP)
}

struct Smoothings {
    segments: usize,
    /// Joins made by caps and cups, the same in every state.
    fixed: Vec<(usize, usize)>,
    /// Per crossing: the joins of its A smoothing, then of its B smoothing.
    crossings: Vec<[[(usize, usize); 2]; 2]>,
}

/// Cuts the diagram into segments at every crossing; a segment runs between
/// crossings, caps and cups.
fn smoothings(l: &LinkDiagram) -> Result<Smoothings, LinkError> {
    // Surfaces level and orientation errors before the sweep below.
    l.analyze()?;
    let mut cur: Vec<usize> = Vec::new();
    let mut s = Smoothings {
        segments: 0,
        fixed: vec![],
        crossings: vec![],
    };
    for e in &l.events {
        match e {
            LinkEvent::Cap { level, .. } => {
                let id = s.segments;
                s.segments += 1;
                cur.splice(*level..*level, [id, id]);
            }
            LinkEvent::Cup { level } => {
                s.fixed.push((cur[*level], cur[*level + 1]));
                cur.drain(*level..*level + 2);
            }
            LinkEvent::Cross {
                level,
                ascending_over,
                ..
            } => {
                let (l0, l1) = (cur[*level], cur[*level + 1]);
                let (r0, r1) = (s.segments, s.segments + 1);
                s.segments += 2;
                cur[*level] = r0;
                cur[*level + 1] = r1;
                let identity = [(l0, r0), (l1, r1)];
                let turn_back = [(l0, l1), (r0, r1)];
                // The A smoothing merges the two regions swept when the
                // over-strand turns counterclockwise onto the under-strand.
                s.crossings.push(if *ascending_over {
                    [turn_back, identity]
                } else {
                    [identity, turn_back]
                });
            }
        }
    }
    Ok(s)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn loops_in_state(s: &Smoothings, state: u64, parent: &mut Vec<usize>) -> usize {
    parent.clear();
    parent.extend(0..s.segments);
    let mut loops = s.segments;
    let choice = |i: usize| &s.crossings[i][((state >> i) & 1) as usize];
    let joins = s
        .fixed
        .iter()
        .chain((0..s.crossings.len()).flat_map(|i| choice(i).iter()));
    for &(a, b) in joins {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
            loops -= 1;
        }
    }
    loops
}

/// `<D>` in the variable `A`, normalised so the crossingless unknot is 1.
/// Fails when the crossing count exceeds `cap`.
pub fn kauffman_bracket(l: &LinkDiagram, cap: usize) -> Result<LaurentPolynomial, BracketError> {
    let n = l.crossing_count();
    if n > cap || n >= 64 {
        return Err(BracketError::CapExceeded { crossings: n, cap });
    }
    let s = smoothings(l)?;
    // Histogram of (A-count minus B-count, loop count) over all states.
    const CHUNK: u64 = 1 << 12;
    let states = 1u64 << n;
    let histogram = (0..states.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut h: BTreeMap<(i32, usize), i64> = BTreeMap::new();
            let mut parent = Vec::with_capacity(s.segments);
            for state in chunk * CHUNK..((chunk + 1) * CHUNK).min(states) {
                let b = state.count_ones() as i32;
                let loops = loops_in_state(&s, state, &mut parent);
                *h.entry((n as i32 - 2 * b, loops)).or_insert(0) += 1;
            }
            h
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let delta = LaurentPolynomial::from_terms([(2, -1), (-2, -1)]);
    Ok(histogram
        .into_iter()
        .map(|((shift, loops), count)| {
            &LaurentPolynomial::monomial(count, shift) * &delta.pow(loops.saturating_sub(1) as u32)
        })
        .sum())
}

/// `(-A^3)^(-w) <D>` in the variable `A`.
pub fn normalized_bracket(l: &LinkDiagram, cap: usize) -> Result<LaurentPolynomial, BracketError> {
    let w = l.analyze()?.writhe();
    let bracket = kauffman_bracket(l, cap)?;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    Ok(&LaurentPolynomial::monomial(sign, -3 * w) * &bracket)
}

/// Jones polynomial as a polynomial in `t^(1/2)` (so exponent `k` stands
/// for `t^(k/2)`), by substituting `A = t^(-1/4)` into the normalised bracket.
pub fn jones(l: &LinkDiagram, cap: usize) -> Result<LaurentPolynomial, BracketError> {
    let f = normalized_bracket(l, cap)?;
    Ok(f.divide_exponents(-2)
        .expect("normalised bracket exponents are even"))
}
