use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{check_partition, claims_of, integral_scale, ModularPartition};
use crate::error::{Error, Result};
use crate::instance::{assemble_order, evaluate_walk, TwInstance, WalkSolution};
use crate::oracles::{MonotoneOrienteering, OrienteeringOracle, OrienteeringQuery, WalkResult};
use crate::rational::Rational;

struct Label {
    pos: Option<usize>,
    time: i128,
    reward: Rational,
    prev: Option<usize>,
    claims: Vec<usize>,
}

/// Drops labels that arrive later at the same position without more reward.
fn prune(arena: &[Label], labels: BTreeMap<(Option<usize>, i128), usize>) -> BTreeMap<(Option<usize>, i128), usize> {
    let mut out = BTreeMap::new();
    let mut best: HashMap<Option<usize>, Rational> = HashMap::new();
    for ((pos, t), li) in labels {
        let r = arena[li].reward;
        if best.get(&pos).is_none_or(|b| r > *b) {
            best.insert(pos, r);
            out.insert((pos, t), li);
        }
    }
    out
}

/// Time-indexed composition over integral data: for every block, state
/// `(exit vertex, completion time)` holds the best reward, extended by one
/// oracle call per entry, exit and integral budget.
pub fn solve_time_indexed(x: &TwInstance, p: &ModularPartition, oracle: &dyn OrienteeringOracle) -> Result<WalkSolution> {
    check_partition(x, p)?;
    if integral_scale(x) != Rational::one() {
        return Err(Error::Precondition(
            "time-indexed composition needs integral times and distances; use the reward-indexed solver".into(),
        ));
    }
    let oracle = MonotoneOrienteering::new(oracle);
    let m = &x.metric;
    let dist = |a: usize, b: usize| m.get(a, b).map(|d| d.to_integer());
    let horizon = x.budget.to_integer();
    let mut arena = vec![Label { pos: x.start, time: 0, reward: Rational::zero(), prev: None, claims: Vec::new() }];
    let mut table: BTreeMap<(Option<usize>, i128), usize> = BTreeMap::from([((x.start, 0), 0)]);
    let mut calls: HashMap<(usize, usize, usize, i128), WalkResult> = HashMap::new();

    for (bi, block) in p.blocks.iter().enumerate() {
        let release = block.window.release.to_integer();
        let close = block.window.deadline.to_integer().min(horizon);
        let eligible: Vec<(usize, Rational)> = block.members.iter().map(|&v| (v, x.rewards[v])).collect();
        let mut pending: BTreeMap<(Option<usize>, i128), usize> = BTreeMap::new();
        let sources: Vec<usize> = table.values().copied().collect();
        for li in sources {
            for &u in &block.members {
                let travel = match arena[li].pos {
                    None => 0,
                    Some(p) => match dist(p, u) {
                        Some(d) => d,
                        None => continue,
                    },
                };
                let sigma = (arena[li].time + travel).max(release);
                for &v in &block.members {
                    for budget in 0..=(close - sigma) {
                        let walk = calls
                            .entry((bi, u, v, budget))
                            .or_insert_with(|| {
                                let q = OrienteeringQuery::new(m, eligible.clone(), u, v, Rational::from_integer(budget));
                                oracle.best_walk(&q)
                            })
                            .clone();
                        if !walk.is_feasible() {
                            continue;
                        }
                        let time = sigma + walk.duration.to_integer();
                        if let Some(t) = x.end {
                            match dist(v, t) {
                                Some(d) if time + d <= horizon => {}
                                _ => continue,
                            }
                        }
                        let reward = arena[li].reward + walk.reward;
                        let slot = (Some(v), time);
                        if pending.get(&slot).is_some_and(|&cur| arena[cur].reward >= reward) {
                            continue;
                        }
                        let claims = claims_of(&walk.order, &block.members);
                        arena.push(Label { pos: Some(v), time, reward, prev: Some(li), claims });
                        pending.insert(slot, arena.len() - 1);
                    }
                }
            }
        }
        for (slot, li) in pending {
            if table.get(&slot).is_none_or(|&cur| arena[cur].reward < arena[li].reward) {
                table.insert(slot, li);
            }
        }
        table = prune(&arena, table);
    }

    let mut best: Option<usize> = None;
    for &li in table.values() {
        let l = &arena[li];
        if let (Some(t), Some(p)) = (x.end, l.pos) {
            match dist(p, t) {
                Some(d) if l.time + d <= horizon => {}
                _ => continue,
            }
        }
        if best.is_none_or(|b| l.reward > arena[b].reward) {
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
