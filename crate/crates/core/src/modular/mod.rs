//! Modular instances and the dynamic programs that compose per-block
//! orienteering answers into one walk.
//!
//! A modular instance splits its positive-reward vertices into blocks
//! `(V_i, R_i, D_i)`, ordered in time, such that every member of block `i`
//! is available throughout `[R_i, D_i]`. A walk then visits the blocks in
//! order and, inside a block, faces a plain orienteering problem.

mod deadline_groups;
mod engine;
mod pareto;
mod reward_indexed;
mod time_indexed;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::instance::{scale_times, TimeWindow, TwInstance, WaitPolicy};
use crate::metric::Dist;
use crate::rational::{denom_lcm, int, Rational};

pub use deadline_groups::{release_groups, solve_deadline_groups, ReleaseGroup};
pub use pareto::solve_exact_pareto;
pub use reward_indexed::{block_min_time, solve_reward_indexed, subset_durations};
pub use time_indexed::solve_time_indexed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularBlock {
    pub members: Vec<usize>,
    pub window: TimeWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModularPartition {
    pub blocks: Vec<ModularBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModularDiagnostic {
    /// A member's window does not contain its block window.
    Containment { block: usize, vertex: usize },
    /// Block `block` ends after the next block starts.
    Ordering { block: usize },
    /// A positive-reward vertex is missing, duplicated, or out of range.
    Assignment { vertex: usize },
}

impl fmt::Display for ModularDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModularDiagnostic::Containment { block, vertex } => {
                write!(f, "vertex {vertex} is not available throughout block {block}")
            }
            ModularDiagnostic::Ordering { block } => write!(f, "block {block} overlaps the next block"),
            ModularDiagnostic::Assignment { vertex } => write!(f, "vertex {vertex} is not in exactly one block"),
        }
    }
}

/// Groups positive-reward vertices with identical windows, ordered by window.
pub fn partition_by_windows(x: &TwInstance) -> ModularPartition {
    let mut groups: BTreeMap<TimeWindow, Vec<usize>> = BTreeMap::new();
    for v in x.active() {
        groups.entry(x.windows[v]).or_default().push(v);
    }
    ModularPartition { blocks: groups.into_iter().map(|(window, members)| ModularBlock { members, window }).collect() }
}

/// Returns the first violated modularity condition, if any. Consecutive
/// blocks may share an endpoint.
pub fn verify_modular(x: &TwInstance, p: &ModularPartition) -> Option<ModularDiagnostic> {
    let n = x.n();
    let mut count = vec![0usize; n];
    for (i, b) in p.blocks.iter().enumerate() {
        for &v in &b.members {
            if v >= n {
                return Some(ModularDiagnostic::Assignment { vertex: v });
            }
            count[v] += 1;
            let w = &x.windows[v];
            if w.release > b.window.release || w.deadline < b.window.deadline {
                return Some(ModularDiagnostic::Containment { block: i, vertex: v });
            }
        }
    }
    for (i, pair) in p.blocks.windows(2).enumerate() {
        if pair[0].window.deadline > pair[1].window.release {
            return Some(ModularDiagnostic::Ordering { block: i });
        }
    }
    (0..n)
        .find(|&v| (x.is_active(v) && count[v] != 1) || count[v] > 1)
        .map(|v| ModularDiagnostic::Assignment { vertex: v })
}

pub fn is_modular(x: &TwInstance, p: &ModularPartition) -> bool {
    verify_modular(x, p).is_none()
}

fn check_partition(x: &TwInstance, p: &ModularPartition) -> Result<()> {
    if x.wait == WaitPolicy::NoWait {
        return Err(Error::Precondition("modular composition needs waiting to be allowed".into()));
    }
    if let Some(d) = verify_modular(x, p) {
        return Err(Error::Precondition(format!("partition is not modular: {d}")));
    }
    x.check_feasible()
}

/// Members of `order` in first-visit order.
pub(crate) fn claims_of(order: &[usize], members: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &w in order {
        if members.contains(&w) && !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// Factor that makes every window, finite distance and the budget integral.
pub fn integral_scale(x: &TwInstance) -> Rational {
    let n = x.n();
    let mut values: Vec<Rational> = Vec::with_capacity(n * n + 2 * n + 1);
    values.push(x.budget);
    for w in &x.windows {
        values.push(w.release);
        values.push(w.deadline);
    }
    for u in 0..n {
        for v in 0..n {
            if let Dist::Finite(d) = x.metric.dist(u, v) {
                values.push(*d);
            }
        }
    }
    int(denom_lcm(&values))
}

/// Rescales `x` (and `p`) so that all time data is integral.
pub fn integerize(x: &TwInstance, p: &ModularPartition) -> Result<(TwInstance, ModularPartition, Rational)> {
    let c = integral_scale(x);
    if c == Rational::one() {
        return Ok((x.clone(), p.clone(), c));
    }
    let y = scale_times(x, &c)?;
    let q = ModularPartition {
        blocks: p.blocks.iter().map(|b| ModularBlock { members: b.members.clone(), window: b.window.scaled(&c) }).collect(),
    };
    Ok((y, q, c))
}

/// Which composition the modular solver runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DpMode {
    /// Pseudo-polynomial table over integral times; data is integerized first.
    TimeIndexed,
    /// Minimal completion time per guessed reward; handles rationals.
    #[default]
    RewardIndexed,
    /// Exact Pareto composition, ignoring the oracle.
    ExactPareto,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::*;
    use crate::rational::int;

    fn b(members: Vec<usize>, r: i128, d: i128) -> ModularBlock {
        ModularBlock { members, window: w(r, d) }
    }

    fn line4_middle() -> TwInstance {
        let mut x = line4();
        x.rewards = vec![int(0), int(1), int(1), int(0)];
        x
    }

    #[test]
    fn verification() {
        let x = line4_middle();
        let p = partition_by_windows(&x);
        assert_eq!(p.blocks, vec![b(vec![1], 1, 2), b(vec![2], 2, 3)]);
        assert!(is_modular(&x, &p));

        let bad = ModularPartition { blocks: vec![b(vec![2], 2, 3), b(vec![1], 1, 2)] };
        assert_eq!(verify_modular(&x, &bad), Some(ModularDiagnostic::Ordering { block: 0 }));

        let dup = ModularPartition { blocks: vec![b(vec![1, 2], 2, 2), b(vec![2], 2, 3)] };
        assert_eq!(verify_modular(&x, &dup), Some(ModularDiagnostic::Assignment { vertex: 2 }));

        let wide = ModularPartition { blocks: vec![b(vec![1], 0, 2), b(vec![2], 2, 3)] };
        assert_eq!(verify_modular(&x, &wide), Some(ModularDiagnostic::Containment { block: 0, vertex: 1 }));
    }

    #[test]
    fn integerizing() {
        let mut x = line4_middle();
        x.windows[1] = TimeWindow::of(crate::rational::frac(1, 2), int(2));
        let p = partition_by_windows(&x);
        let (y, q, c) = integerize(&x, &p).unwrap();
        assert_eq!(c, int(2));
        assert_eq!(y.budget, int(10));
        assert_eq!(q.blocks[0].window, w(1, 4));
    }
}
