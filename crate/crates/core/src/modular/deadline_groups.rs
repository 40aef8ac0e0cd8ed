use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use super::engine::{compose, Group, Segment, SegmentSource};
use super::reward_indexed::subset_durations;
use crate::error::{Error, Result};
use crate::instance::{TwInstance, WaitPolicy, WalkSolution};
use crate::oracles::{DeadlineOracle, DeadlineQuery, MonotoneDeadline};
use crate::rational::Rational;

/// Positive-reward vertices sharing a release time, with the latest deadline
/// among them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReleaseGroup {
    pub release: Rational,
    pub latest: Rational,
    pub members: Vec<usize>,
}

/// Groups active vertices by release time. Errors unless every group closes
/// before the next one opens.
pub fn release_groups(x: &TwInstance) -> Result<Vec<ReleaseGroup>> {
    let mut by_release: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for v in x.active() {
        by_release.entry(x.windows[v].release).or_default().push(v);
    }
    let groups: Vec<ReleaseGroup> = by_release
        .into_iter()
        .map(|(release, members)| {
            let latest = members.iter().map(|&v| x.windows[v].deadline).max().expect("groups are nonempty");
            ReleaseGroup { release, latest, members }
        })
        .collect();
    for pair in groups.windows(2) {
        if pair[0].latest > pair[1].release {
            return Err(Error::Precondition(format!(
                "vertices released at {} are due after the next release {}",
                pair[0].release, pair[1].release
            )));
        }
    }
    Ok(groups)
}

struct DeadlineBlocks<'a> {
    x: &'a TwInstance,
    groups: Vec<Group>,
    eligible: Vec<Vec<(usize, Rational, Rational)>>,
    oracle: MonotoneDeadline<'a>,
    grids: Mutex<HashMap<(usize, usize), Vec<Rational>>>,
}

impl SegmentSource for DeadlineBlocks<'_> {
    fn segments(&self, gi: usize, u: usize, sigma: &Rational) -> Vec<Segment> {
        let g = &self.groups[gi];
        let room = g.close - sigma;
        // every walk length the group can produce from `u`
        let grid = self
            .grids
            .lock()
            .unwrap()
            .entry((gi, u))
            .or_insert_with(|| {
                let limit = g.close - g.release;
                let mut all: Vec<Rational> = g
                    .members
                    .iter()
                    .flat_map(|&v| subset_durations(&self.x.metric, &g.members, u, v, &limit))
                    .collect();
                all.sort();
                all.dedup();
                all
            })
            .clone();
        let mut out: Vec<Segment> = Vec::new();
        for len in grid.iter().filter(|l| **l <= room) {
            let q = DeadlineQuery::new(&self.x.metric, self.eligible[gi].clone(), u, *sigma, None, sigma + len);
            let walk = self.oracle.best_walk(&q);
            if !walk.is_feasible() {
                continue;
            }
            let exit = *walk.order.last().expect("feasible walks are nonempty");
            let mut time = *sigma;
            let mut claims: Vec<usize> = Vec::new();
            for (i, &w) in walk.order.iter().enumerate() {
                if i > 0 {
                    time += self.x.metric.get(walk.order[i - 1], w).expect("oracle walks are finite");
                }
                if q.entry(w).is_some_and(|e| time <= e.2) && !claims.contains(&w) {
                    claims.push(w);
                }
            }
            if out.iter().any(|s| s.exit == exit && s.duration == walk.duration && s.reward == walk.reward) {
                continue;
            }
            out.push(Segment { exit, duration: walk.duration, key: walk.reward, reward: walk.reward, claims });
        }
        out
    }
}

/// Composition over release groups whose members share a release time and
/// are due before the next group opens. Each group is a deadline
/// orienteering query from the entry vertex and entry time, probed at every
/// walk length the group admits.
pub fn solve_deadline_groups(x: &TwInstance, oracle: &dyn DeadlineOracle) -> Result<WalkSolution> {
    if x.wait == WaitPolicy::NoWait {
        return Err(Error::Precondition("deadline composition needs waiting to be allowed".into()));
    }
    let rg = release_groups(x)?;
    let groups: Vec<Group> = rg
        .iter()
        .map(|g| Group { members: g.members.clone(), release: g.release, close: g.latest.min(x.budget) })
        .collect();
    let eligible = rg
        .iter()
        .map(|g| g.members.iter().map(|&v| (v, x.rewards[v], x.windows[v].deadline)).collect())
        .collect();
    let source = DeadlineBlocks {
        x,
        groups: groups.clone(),
        eligible,
        oracle: MonotoneDeadline::new(oracle),
        grids: Mutex::new(HashMap::new()),
    };
    compose(x, &groups, &source)
}
