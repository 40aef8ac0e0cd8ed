use std::cmp::Reverse;

use num_traits::{Signed, Zero};

use super::lift_claims;
use crate::error::Result;
use crate::instance::{TwInstance, WalkSolution};
use crate::rational::Rational;

/// Exact optimum over positive-reward vertices with point windows; other
/// vertices are ignored. Visit times are fixed, so the vertices form a DAG
/// with an arc `v -> w` when `t_v + d(v, w) <= t_w`, and the answer is a
/// heaviest path. Vertices sharing a time are ordered so that a vertex
/// reachable at distance zero from another comes after it.
pub fn zero_window_dp(x: &TwInstance) -> Result<WalkSolution> {
    x.check_feasible()?;
    let m = &x.metric;
    let fits = |v: usize| {
        let t = x.windows[v].release;
        let from_start = match x.start {
            Some(s) => m.get(s, v).is_some_and(|d| *d <= t),
            None => !t.is_negative(),
        };
        let to_end = match x.end {
            Some(e) => m.get(v, e).is_some_and(|d| t + d <= x.budget),
            None => t <= x.budget,
        };
        from_start && to_end
    };
    let mut vs: Vec<usize> = x.active().into_iter().filter(|&v| x.windows[v].is_point() && fits(v)).collect();
    vs.sort_by_key(|&v| (x.windows[v].release, Reverse(zero_reach(x, v)), v));

    let k = vs.len();
    let mut best: Vec<Rational> = vec![Rational::zero(); k];
    let mut prev: Vec<Option<usize>> = vec![None; k];
    for j in 0..k {
        let w = vs[j];
        best[j] = x.rewards[w];
        for i in 0..j {
            let v = vs[i];
            let ok = m.get(v, w).is_some_and(|d| x.windows[v].release + d <= x.windows[w].release);
            if ok && best[i] + x.rewards[w] > best[j] {
                best[j] = best[i] + x.rewards[w];
                prev[j] = Some(i);
            }
        }
    }
    let mut end: Option<usize> = None;
    for j in 0..k {
        if end.is_none_or(|e| best[j] > best[e]) {
            end = Some(j);
        }
    }
    let mut claims = Vec::new();
    let mut cur = end;
    while let Some(j) = cur {
        claims.push(vs[j]);
        cur = prev[j];
    }
    claims.reverse();
    lift_claims(x, &claims)
}

/// Number of vertices at distance zero from `v`, itself included.
fn zero_reach(x: &TwInstance, v: usize) -> usize {
    (0..x.n()).filter(|&w| x.metric.get(v, w).is_some_and(|d| d.is_zero())).count()
}
