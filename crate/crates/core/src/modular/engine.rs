//! Label-setting composition shared by the reward-indexed, Pareto and
//! deadline-group solvers.
//!
//! A label is a walk prefix summarised by its last position, its completion
//! time and a reward key. For each `(position, key)` only the earliest label
//! survives. Groups are processed in time order; a walk may skip any group.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::Result;
use crate::instance::{assemble_order, evaluate_walk, TwInstance, WalkSolution};
use crate::rational::Rational;

/// A group of vertices visited contiguously, no earlier than `release` and
/// finishing by `close`.
#[derive(Debug, Clone)]
pub(crate) struct Group {
    pub members: Vec<usize>,
    pub release: Rational,
    pub close: Rational,
}

/// One way to traverse a group from a fixed entry vertex and entry time.
#[derive(Debug, Clone)]
pub(crate) struct Segment {
    pub exit: usize,
    pub duration: Rational,
    /// Amount added to the label key.
    pub key: Rational,
    /// Reward actually collected.
    pub reward: Rational,
    /// Vertices credited, in visiting order.
    pub claims: Vec<usize>,
}

pub(crate) trait SegmentSource {
    /// Traversals of `group` entered at `entry` at time `sigma`. Each must
    /// finish by the group's close.
    fn segments(&self, group: usize, entry: usize, sigma: &Rational) -> Vec<Segment>;
}

struct Label {
    pos: Option<usize>,
    time: Rational,
    key: Rational,
    actual: Rational,
    prev: Option<usize>,
    claims: Vec<usize>,
}

fn better(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> bool {
    // earlier time first, then more actual reward
    a.0 < b.0 || (a.0 == b.0 && a.1 > b.1)
}

/// Runs the composition on `x` and returns the best walk found, evaluated on
/// `x` with earliest-feasible scheduling.
pub(crate) fn compose(x: &TwInstance, groups: &[Group], source: &dyn SegmentSource) -> Result<WalkSolution> {
    x.check_feasible()?;
    let m = &x.metric;
    let mut arena: Vec<Label> = vec![Label {
        pos: x.start,
        time: Rational::zero(),
        key: Rational::zero(),
        actual: Rational::zero(),
        prev: None,
        claims: Vec::new(),
    }];
    let mut table: BTreeMap<(Option<usize>, Rational), usize> = BTreeMap::new();
    table.insert((x.start, Rational::zero()), 0);

    for (gi, g) in groups.iter().enumerate() {
        let mut cache: HashMap<(usize, Rational), Vec<Segment>> = HashMap::new();
        let mut pending: BTreeMap<(Option<usize>, Rational), usize> = BTreeMap::new();
        let sources: Vec<usize> = table.values().copied().collect();
        for li in sources {
            for &u in &g.members {
                let travel = match arena[li].pos {
                    None => Rational::zero(),
                    Some(p) => match m.get(p, u) {
                        Some(d) => *d,
                        None => continue,
                    },
                };
                let sigma = (arena[li].time + travel).max(g.release);
                if sigma > g.close {
                    continue;
                }
                let segs = cache.entry((u, sigma)).or_insert_with(|| source.segments(gi, u, &sigma));
                for s in segs.iter() {
                    let time = sigma + s.duration;
                    if time > g.close {
                        continue;
                    }
                    if let Some(t) = x.end {
                        match m.get(s.exit, t) {
                            Some(d) if time + d <= x.budget => {}
                            _ => continue,
                        }
                    }
                    let key = arena[li].key + s.key;
                    let actual = arena[li].actual + s.reward;
                    let slot = (Some(s.exit), key);
                    if let Some(&cur) = pending.get(&slot) {
                        if !better((&time, &actual), (&arena[cur].time, &arena[cur].actual)) {
                            continue;
                        }
                    }
                    arena.push(Label { pos: Some(s.exit), time, key, actual, prev: Some(li), claims: s.claims.clone() });
                    pending.insert(slot, arena.len() - 1);
                }
            }
        }
        for (slot, li) in pending {
            match table.get(&slot) {
                Some(&cur) if !better((&arena[li].time, &arena[li].actual), (&arena[cur].time, &arena[cur].actual)) => {}
                _ => {
                    table.insert(slot, li);
                }
            }
        }
    }

    let mut best: Option<usize> = None;
    for &li in table.values() {
        let l = &arena[li];
        if let (Some(t), Some(p)) = (x.end, l.pos) {
            match m.get(p, t) {
                Some(d) if l.time + d <= x.budget => {}
                _ => continue,
            }
        }
        if best.is_none_or(|b| l.actual > arena[b].actual) {
            best = Some(li);
        }
    }
    let mut chain = Vec::new();
    let mut cur = best;
    while let Some(li) = cur {
        chain.push(li);
        cur = arena[li].prev;
    }
    let claims: Vec<usize> = chain.iter().rev().flat_map(|&li| arena[li].claims.iter().copied()).collect();
    evaluate_walk(x, &assemble_order(x, &claims), None)
}
