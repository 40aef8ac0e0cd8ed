use std::collections::HashMap;
use std::sync::Mutex;

use super::engine::{compose, Group, Segment, SegmentSource};
use super::{check_partition, claims_of, ModularPartition};
use crate::error::Result;
use crate::instance::{TwInstance, WalkSolution};
use crate::oracles::{pareto_profiles, ParetoProfile};
use crate::rational::Rational;

struct ParetoBlocks<'a> {
    x: &'a TwInstance,
    groups: Vec<Group>,
    rewards: Vec<Vec<(usize, Rational)>>,
    profiles: Mutex<HashMap<(usize, usize, usize), ParetoProfile>>,
}

impl SegmentSource for ParetoBlocks<'_> {
    fn segments(&self, gi: usize, u: usize, sigma: &Rational) -> Vec<Segment> {
        let g = &self.groups[gi];
        let room = g.close - sigma;
        let mut out = Vec::new();
        for &v in &g.members {
            let profile = self
                .profiles
                .lock()
                .unwrap()
                .entry((gi, u, v))
                .or_insert_with(|| pareto_profiles(&self.x.metric, &self.rewards[gi], u, v, &(g.close - g.release)))
                .clone();
            for e in profile.entries.iter().filter(|e| e.duration <= room) {
                out.push(Segment {
                    exit: v,
                    duration: e.duration,
                    key: e.reward,
                    reward: e.reward,
                    claims: claims_of(&e.order, &g.members),
                });
            }
        }
        out
    }
}

/// Exact composition from per-block Pareto profiles; labels are keyed by the
/// reward actually collected. Exponential in the block size.
pub fn solve_exact_pareto(x: &TwInstance, p: &ModularPartition) -> Result<WalkSolution> {
    check_partition(x, p)?;
    let groups: Vec<Group> = p
        .blocks
        .iter()
        .map(|b| Group { members: b.members.clone(), release: b.window.release, close: b.window.deadline.min(x.budget) })
        .collect();
    let rewards = p.blocks.iter().map(|b| b.members.iter().map(|&v| (v, x.rewards[v])).collect()).collect();
    let source = ParetoBlocks { x, groups: groups.clone(), rewards, profiles: Mutex::new(HashMap::new()) };
    compose(x, &groups, &source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::brute_force_opt;
    use crate::instance::fixtures::*;
    use crate::modular::partition_by_windows;
    use crate::rational::int;

    #[test]
    fn line4_blocks() {
        let mut x = line4();
        x.rewards = vec![int(0), int(1), int(1), int(0)];
        let p = partition_by_windows(&x);
        assert_eq!(solve_exact_pareto(&x, &p).unwrap().reward, int(2));
    }

    #[test]
    fn trades_reward_for_time() {
        // block [0,4] holds vertices 1 and 2; vertex 3 must be reached by 4 as well
        let mut x = line4();
        x.windows = vec![w(0, 9), w(0, 2), w(0, 2), w(3, 4)];
        x.rewards = vec![int(0), int(1), int(1), int(1)];
        x.end = None;
        let p = partition_by_windows(&x);
        let sol = solve_exact_pareto(&x, &p).unwrap();
        assert_eq!(sol.reward, brute_force_opt(&x).unwrap().reward);
        assert_eq!(sol.reward, int(3));
    }
}
