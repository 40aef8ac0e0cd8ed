use std::collections::HashMap;
use std::sync::Mutex;


use super::engine::{compose, Group, Segment, SegmentSource};
use super::{check_partition, claims_of, ModularPartition};
use crate::error::Result;
use crate::instance::{TwInstance, WalkSolution};
use crate::metric::Metric;
use crate::oracles::{MonotoneOrienteering, OrienteeringOracle, OrienteeringQuery, WalkResult};
use crate::rational::{rational_gcd, Rational};

/// Sorted distinct lengths of shortest `u -> S -> v` walks over subsets `S`
/// of `members`, up to `limit`. These are the only durations at which an
/// exact answer can change.
pub fn subset_durations(metric: &Metric, members: &[usize], u: usize, v: usize, limit: &Rational) -> Vec<Rational> {
    let Some(direct) = metric.get(u, v) else { return Vec::new() };
    let cands: Vec<usize> = members.iter().copied().filter(|&w| w != u && w != v).collect();
    let k = cands.len();
    let mut out = Vec::new();
    if direct <= limit {
        out.push(*direct);
    }
    let mut len: HashMap<(u32, usize), Rational> = HashMap::new();
    for (i, &w) in cands.iter().enumerate() {
        if let Some(d) = metric.get(u, w) {
            len.insert((1 << i, i), *d);
        }
    }
    for mask in 1u32..(1 << k) {
        for last in 0..k {
            let Some(l) = len.get(&(mask, last)).copied() else { continue };
            if &l > limit {
                continue;
            }
            if let Some(d) = metric.get(cands[last], v) {
                if &(l + d) <= limit {
                    out.push(l + d);
                }
            }
            for j in 0..k {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let Some(d) = metric.get(cands[last], cands[j]) else { continue };
                let e = len.entry((mask | (1 << j), j)).or_insert(l + d);
                if l + d < *e {
                    *e = l + d;
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Shortest probed duration at which the oracle's `u -> v` walk over the
/// block collects at least `k / alpha`, with that walk. `None` when no
/// duration up to `limit` suffices.
pub fn block_min_time(
    oracle: &dyn OrienteeringOracle,
    metric: &Metric,
    block: &[(usize, Rational)],
    u: usize,
    v: usize,
    k: &Rational,
    limit: &Rational,
) -> Option<(Rational, WalkResult)> {
    let members: Vec<usize> = block.iter().map(|b| b.0).collect();
    let grid = subset_durations(metric, &members, u, v, limit);
    let threshold = k / oracle.spec().alpha();
    let probe = |t: &Rational| {
        let r = oracle.best_walk(&OrienteeringQuery::new(metric, block.to_vec(), u, v, *t));
        (r.is_feasible() && r.reward >= threshold).then_some(r)
    };
    let last = grid.last()?;
    let mut found = (*last, probe(last)?);
    let (mut lo, mut hi) = (0usize, grid.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match probe(&grid[mid]) {
            Some(r) => {
                found = (grid[mid], r);
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Some(found)
}

struct RewardBlocks<'a> {
    x: &'a TwInstance,
    groups: Vec<Group>,
    rewards: Vec<Vec<(usize, Rational)>>,
    steps: Vec<Vec<Rational>>,
    oracle: MonotoneOrienteering<'a>,
    memo: Mutex<HashMap<(usize, usize, usize, usize), Option<WalkResult>>>,
}

impl SegmentSource for RewardBlocks<'_> {
    fn segments(&self, gi: usize, u: usize, sigma: &Rational) -> Vec<Segment> {
        let g = &self.groups[gi];
        let room = g.close - sigma;
        let mut out = Vec::new();
        for &v in &g.members {
            for (ki, k) in self.steps[gi].iter().enumerate() {
                let key = (gi, u, v, ki);
                let cached = self.memo.lock().unwrap().get(&key).cloned();
                let walk = match cached {
                    Some(w) => w,
                    None => {
                        let limit = g.close - g.release;
                        let w = block_min_time(&self.oracle, &self.x.metric, &self.rewards[gi], u, v, k, &limit)
                            .map(|(_, w)| w);
                        self.memo.lock().unwrap().insert(key, w.clone());
                        w
                    }
                };
                // larger guesses need at least as long, so stop at the first miss
                let Some(w) = walk else { break };
                if w.duration > room {
                    continue;
                }
                out.push(Segment {
                    exit: v,
                    duration: w.duration,
                    key: *k,
                    reward: w.reward,
                    claims: claims_of(&w.order, &g.members),
                });
            }
        }
        out
    }
}

/// Reward-indexed composition: for every block, entry, exit and guessed
/// block reward `k`, the shortest oracle walk collecting `k / alpha` is found
/// by binary search; labels keep the earliest completion per cumulative
/// guess. With an exact oracle the result is optimal.
pub fn solve_reward_indexed(x: &TwInstance, p: &ModularPartition, oracle: &dyn OrienteeringOracle) -> Result<WalkSolution> {
    check_partition(x, p)?;
    let active: Vec<Rational> = x.active().iter().map(|&v| x.rewards[v]).collect();
    let step = rational_gcd(&active).unwrap_or_else(|| Rational::from_integer(1));
    let groups: Vec<Group> = p
        .blocks
        .iter()
        .map(|b| Group { members: b.members.clone(), release: b.window.release, close: b.window.deadline.min(x.budget) })
        .collect();
    let rewards: Vec<Vec<(usize, Rational)>> =
        p.blocks.iter().map(|b| b.members.iter().map(|&v| (v, x.rewards[v])).collect()).collect();
    let steps = rewards
        .iter()
        .map(|r| {
            let total: Rational = r.iter().map(|e| e.1).sum();
            let count = (total / step).to_integer();
            (0..=count).map(|i| step * Rational::from_integer(i)).collect()
        })
        .collect();
    let source = RewardBlocks {
        x,
        groups: groups.clone(),
        rewards,
        steps,
        oracle: MonotoneOrienteering::new(oracle),
        memo: Mutex::new(HashMap::new()),
    };
    compose(x, &groups, &source)
}
