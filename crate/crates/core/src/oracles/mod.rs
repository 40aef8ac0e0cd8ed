//! Black-box solvers the composition framework calls: point-to-point
//! orienteering without windows, deadline orienteering from a start time,
//! and exact Pareto profiles.

mod deadline;
mod monotone;
mod orienteering;
mod pareto;

use std::fmt;

use num_traits::Zero;

use crate::metric::Metric;
use crate::rational::{format_rational, Rational};

pub use deadline::{ExactDeadline, LayeredDeadline};
pub use monotone::{MonotoneDeadline, MonotoneOrienteering};
pub use orienteering::{ExactOrienteering, GreedyOrienteering};
pub use pareto::{pareto_profiles, ParetoEntry, ParetoProfile};

/// Declared approximation guarantee of an oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclaredRatio {
    Proven(Rational),
    /// Heuristic with no guarantee; treated as targeting ratio 1 when the
    /// framework needs a number, and never used for correctness claims.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSpec {
    pub name: String,
    pub ratio: DeclaredRatio,
}

impl OracleSpec {
    pub fn exact(name: &str) -> Self {
        OracleSpec { name: name.to_string(), ratio: DeclaredRatio::Proven(Rational::from_integer(1)) }
    }

    pub fn heuristic(name: &str) -> Self {
        OracleSpec { name: name.to_string(), ratio: DeclaredRatio::Empirical }
    }

    /// Ratio used when thresholding rewards.
    pub fn alpha(&self) -> Rational {
        match self.ratio {
            DeclaredRatio::Proven(a) => a,
            DeclaredRatio::Empirical => Rational::from_integer(1),
        }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self.ratio, DeclaredRatio::Proven(_))
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ratio {
            DeclaredRatio::Proven(a) => write!(f, "{} (alpha {})", self.name, format_rational(a)),
            DeclaredRatio::Empirical => write!(f, "{} (empirical)", self.name),
        }
    }
}

/// A walk returned by an oracle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalkResult {
    /// Visited vertices from the start to the end; empty when the query has
    /// no feasible walk.
    pub order: Vec<usize>,
    pub reward: Rational,
    /// Travel time from the first to the last vertex.
    pub duration: Rational,
}

impl WalkResult {
    pub fn infeasible() -> Self {
        WalkResult { order: Vec::new(), reward: Rational::zero(), duration: Rational::zero() }
    }

    pub fn is_feasible(&self) -> bool {
        !self.order.is_empty()
    }
}

/// Best walk from `u` to `v` of length at most `budget`, collecting the
/// rewards of distinct eligible vertices.
#[derive(Debug, Clone)]
pub struct OrienteeringQuery<'a> {
    pub metric: &'a Metric,
    /// Eligible vertices with their rewards, ascending by vertex.
    pub eligible: Vec<(usize, Rational)>,
    pub u: usize,
    pub v: usize,
    pub budget: Rational,
}

impl<'a> OrienteeringQuery<'a> {
    pub fn new(metric: &'a Metric, mut eligible: Vec<(usize, Rational)>, u: usize, v: usize, budget: Rational) -> Self {
        eligible.sort();
        eligible.dedup_by_key(|e| e.0);
        OrienteeringQuery { metric, eligible, u, v, budget }
    }

    pub fn reward_of(&self, w: usize) -> Rational {
        self.eligible.iter().find(|e| e.0 == w).map(|e| e.1).unwrap_or_default()
    }

    /// Recomputes duration and reward of `order`; `None` when the order does
    /// not run from `u` to `v` within the budget.
    pub fn evaluate(&self, order: &[usize]) -> Option<WalkResult> {
        if order.first() != Some(&self.u) || order.last() != Some(&self.v) {
            return None;
        }
        let mut duration = Rational::zero();
        for p in order.windows(2) {
            duration += self.metric.get(p[0], p[1])?;
        }
        if duration > self.budget {
            return None;
        }
        let mut seen: Vec<usize> = order.to_vec();
        seen.sort_unstable();
        seen.dedup();
        let reward = seen.iter().map(|&w| self.reward_of(w)).sum();
        Some(WalkResult { order: order.to_vec(), reward, duration })
    }
}

pub trait OrienteeringOracle: Send + Sync {
    fn spec(&self) -> OracleSpec;
    fn best_walk(&self, q: &OrienteeringQuery) -> WalkResult;
}

/// Walk from `start` at time `t0` crediting eligible vertices reached by
/// their deadlines; it ends at `end` when given, always by `horizon`.
#[derive(Debug, Clone)]
pub struct DeadlineQuery<'a> {
    pub metric: &'a Metric,
    /// `(vertex, reward, deadline)`, ascending by vertex.
    pub eligible: Vec<(usize, Rational, Rational)>,
    pub start: usize,
    pub t0: Rational,
    pub end: Option<usize>,
    pub horizon: Rational,
}

impl<'a> DeadlineQuery<'a> {
    pub fn new(
        metric: &'a Metric,
        eligible: Vec<(usize, Rational, Rational)>,
        start: usize,
        t0: Rational,
        end: Option<usize>,
        horizon: Rational,
    ) -> Self {
        let mut eligible: Vec<_> = eligible.into_iter().filter(|e| e.2 >= t0).collect();
        eligible.sort();
        eligible.dedup_by_key(|e| e.0);
        DeadlineQuery { metric, eligible, start, t0, end, horizon }
    }

    pub fn entry(&self, w: usize) -> Option<&(usize, Rational, Rational)> {
        self.eligible.iter().find(|e| e.0 == w)
    }

    /// Recomputes the walk's duration and credited reward.
    pub fn evaluate(&self, order: &[usize]) -> Option<WalkResult> {
        if order.first() != Some(&self.start) {
            return None;
        }
        if let Some(e) = self.end {
            if order.last() != Some(&e) {
                return None;
            }
        }
        let mut time = self.t0;
        let mut credited: Vec<usize> = Vec::new();
        for (i, &w) in order.iter().enumerate() {
            if i > 0 {
                time += self.metric.get(order[i - 1], w)?;
            }
            if let Some((_, _, d)) = self.entry(w) {
                if time <= *d && !credited.contains(&w) {
                    credited.push(w);
                }
            }
        }
        if time > self.horizon {
            return None;
        }
        let reward = credited.iter().map(|&w| self.entry(w).unwrap().1).sum();
        Some(WalkResult { order: order.to_vec(), reward, duration: time - self.t0 })
    }
}

pub trait DeadlineOracle: Send + Sync {
    fn spec(&self) -> OracleSpec;
    fn best_walk(&self, q: &DeadlineQuery) -> WalkResult;
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Exact oracle declared with ratio 2 that returns a walk worth at least
    /// half of the optimum, but no more than needed.
    pub struct Halving;

    impl OrienteeringOracle for Halving {
        fn spec(&self) -> OracleSpec {
            OracleSpec { name: "halving".into(), ratio: DeclaredRatio::Proven(Rational::from_integer(2)) }
        }

        fn best_walk(&self, q: &OrienteeringQuery) -> WalkResult {
            let best = ExactOrienteering.best_walk(q);
            if !best.is_feasible() {
                return best;
            }
            // drop interior vertices from the back while at least half remains
            let target = best.reward / Rational::from_integer(2);
            let mut order = best.order.clone();
            while order.len() > 2 {
                let mut shorter = order.clone();
                shorter.remove(order.len() - 2);
                match q.evaluate(&shorter) {
                    Some(r) if r.reward >= target => order = shorter,
                    _ => break,
                }
            }
            q.evaluate(&order).unwrap()
        }
    }
}
