//! Exhaustive optimum for small instances.
//!
//! The search enumerates sequences of claimed vertices in lexicographic order
//! and schedules each one as early as possible. Two pruning rules keep it
//! exact: a reward bound (remaining reachable reward cannot beat the best so
//! far) and a dominance memo on `(claimed set, last vertex)`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{assemble_order, evaluate_walk, TwInstance, WaitPolicy, WalkSolution};
use crate::rational::Rational;

/// Largest number of positive-reward vertices the search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

struct Search<'a> {
    x: &'a TwInstance,
    active: Vec<usize>,
    memo: HashMap<(u32, usize), Rational>,
    seq: Vec<usize>,
    best: Rational,
    best_seq: Vec<usize>,
}

impl<'a> Search<'a> {
    fn time_at(&self, pos: Option<(usize, Rational)>, v: usize) -> Option<Rational> {
        let x = self.x;
        let arrival = match pos {
            None => Rational::zero(),
            Some((p, t)) => t + x.metric.get(p, v)?,
        };
        let w = &x.windows[v];
        let time = match x.wait {
            WaitPolicy::Wait => arrival.max(w.release),
            WaitPolicy::NoWait => arrival,
        };
        if !w.contains(&time) || time > x.budget {
            return None;
        }
        if let Some(t) = x.end {
            if time + x.metric.get(v, t)? > x.budget {
                return None;
            }
        }
        Some(time)
    }

    fn dfs(&mut self, pos: Option<(usize, Rational)>, mask: u32, reward: Rational) {
        if reward > self.best {
            self.best = reward;
            self.best_seq = self.seq.clone();
        }
        let waiting = self.x.wait == WaitPolicy::Wait;
        let mut options = Vec::new();
        let mut bound = Rational::zero();
        for (i, &v) in self.active.iter().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let time = self.time_at(pos, v);
            // With waiting, a vertex unreachable now stays unreachable, so
            // only the currently reachable reward bounds the remaining gain.
            if time.is_some() || !waiting {
                bound += self.x.rewards[v];
            }
            if let Some(time) = time {
                options.push((i, v, time));
            }
        }
        if reward + bound <= self.best {
            return;
        }
        for (i, v, time) in options {
            let next = mask | (1 << i);
            if waiting {
                match self.memo.get(&(next, v)) {
                    Some(t) if *t <= time => continue,
                    _ => {
                        self.memo.insert((next, v), time);
                    }
                }
            }
            self.seq.push(v);
            self.dfs(Some((v, time)), next, reward + self.x.rewards[v]);
            self.seq.pop();
        }
    }
}

/// Exact optimum over all walks, ties broken towards the lexicographically
/// smallest claim sequence.
///
/// Under no-wait, travel between consecutive claims follows shortest paths;
/// walks that waste time through detours are not searched.
pub fn brute_force_opt(x: &TwInstance) -> Result<WalkSolution> {
    x.validate()?;
    x.check_feasible()?;
    let active = x.active();
    if active.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::Argument(format!(
            "{} positive-reward vertices exceed the brute-force limit of {BRUTE_FORCE_LIMIT}",
            active.len()
        )));
    }
    let mut search = Search {
        x,
        active,
        memo: HashMap::new(),
        seq: Vec::new(),
        best: Rational::zero(),
        best_seq: Vec::new(),
    };
    let start = x.start.map(|s| (s, Rational::zero()));
    search.dfs(start, 0, Rational::zero());
    let order = assemble_order(x, &search.best_seq);
    let sol = evaluate_walk(x, &order, None)?;
    debug_assert_eq!(sol.reward, search.best);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::*;
    use crate::rational::int;

    #[test]
    fn line4_optimum() {
        let sol = brute_force_opt(&line4()).unwrap();
        assert_eq!(sol.reward, int(4));
        assert_eq!(sol.order(), vec![(0, true), (1, true), (2, true), (3, true)]);
    }

    #[test]
    fn line4_short_budget_is_infeasible() {
        let mut x = line4();
        x.budget = int(2);
        assert!(brute_force_opt(&x).unwrap_err().is_infeasible());
    }

    #[test]
    fn line4_late_window_needs_revisit() {
        let mut x = line4();
        x.windows[1] = w(3, 4);
        let sol = brute_force_opt(&x).unwrap();
        assert_eq!(sol.reward, int(4));
        assert_eq!(sol.order(), vec![(0, true), (2, true), (1, true), (3, true)]);
    }

    #[test]
    fn free_mode_starts_anywhere() {
        let mut x = line4();
        x.start = None;
        x.end = None;
        x.windows = vec![w(9, 9), w(0, 1), w(1, 2), w(9, 9)];
        x.budget = int(5);
        let sol = brute_force_opt(&x).unwrap();
        assert_eq!(sol.reward, int(2));
        assert_eq!(sol.order(), vec![(1, true), (2, true)]);
    }

    #[test]
    fn no_wait_skips_early_arrivals() {
        let mut x = line4();
        x.wait = WaitPolicy::NoWait;
        x.windows[1] = w(2, 2);
        assert_eq!(brute_force_opt(&x).unwrap().reward, int(3));
    }

    #[test]
    fn zero_rewards_are_ignored() {
        let mut x = line4();
        x.rewards = vec![int(0); 4];
        let sol = brute_force_opt(&x).unwrap();
        assert_eq!(sol.reward, int(0));
        assert_eq!(sol.order(), vec![(0, false), (3, false)]);
    }
}
