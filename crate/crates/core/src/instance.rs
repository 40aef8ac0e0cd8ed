//! The time-window orienteering instance, window statistics, restriction and
//! walk evaluation.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::rational::{format_rational, Rational};

/// Closed interval `[release, deadline]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeWindow {
    pub release: Rational,
    pub deadline: Rational,
}

impl TimeWindow {
    pub fn new(release: Rational, deadline: Rational) -> Result<Self> {
        if release > deadline {
            return Err(Error::Argument(format!(
                "window release {} exceeds deadline {}",
                format_rational(&release),
                format_rational(&deadline)
            )));
        }
        Ok(TimeWindow { release, deadline })
    }

    /// Panics when `release > deadline`; for literals in tests and generators.
    pub fn of(release: Rational, deadline: Rational) -> Self {
        Self::new(release, deadline).expect("malformed window")
    }

    pub fn length(&self) -> Rational {
        self.deadline - self.release
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.release <= t && t <= &self.deadline
    }

    pub fn within(&self, outer: &TimeWindow) -> bool {
        outer.release <= self.release && self.deadline <= outer.deadline
    }

    pub fn is_point(&self) -> bool {
        self.release == self.deadline
    }

    pub fn has_integer_endpoints(&self) -> bool {
        self.release.is_integer() && self.deadline.is_integer()
    }

    pub fn scaled(&self, c: &Rational) -> TimeWindow {
        TimeWindow { release: self.release * c, deadline: self.deadline * c }
    }
}

impl fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.release), format_rational(&self.deadline))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WaitPolicy {
    #[default]
    Wait,
    NoWait,
}

/// An orienteering instance with per-vertex time windows.
///
/// `start` and `end` are independent anchors. With both set the walk runs
/// from `start` at time 0 to `end` by `budget`; with neither set the walk may
/// begin and end anywhere (free-endpoint mode). In every mode the walk's
/// final time is at most `budget`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwInstance {
    pub metric: Metric,
    pub windows: Vec<TimeWindow>,
    pub rewards: Vec<Rational>,
    pub start: Option<usize>,
    pub end: Option<usize>,
    pub budget: Rational,
    pub wait: WaitPolicy,
}

impl TwInstance {
    pub fn new(
        metric: Metric,
        windows: Vec<TimeWindow>,
        rewards: Vec<Rational>,
        start: Option<usize>,
        end: Option<usize>,
        budget: Rational,
        wait: WaitPolicy,
    ) -> Result<Self> {
        let x = TwInstance { metric, windows, rewards, start, end, budget, wait };
        x.validate()?;
        Ok(x)
    }

    /// Anchored instance with unit rewards.
    pub fn anchored(metric: Metric, windows: Vec<TimeWindow>, s: usize, t: usize, budget: Rational) -> Result<Self> {
        let n = metric.n();
        Self::new(metric, windows, vec![Rational::from_integer(1); n], Some(s), Some(t), budget, WaitPolicy::Wait)
    }

    /// Free-endpoint instance with unit rewards.
    pub fn free(metric: Metric, windows: Vec<TimeWindow>, budget: Rational) -> Result<Self> {
        let n = metric.n();
        Self::new(metric, windows, vec![Rational::from_integer(1); n], None, None, budget, WaitPolicy::Wait)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.metric.n();
        if self.windows.len() != n || self.rewards.len() != n {
            return Err(Error::Structural(format!(
                "{} windows and {} rewards for {n} vertices",
                self.windows.len(),
                self.rewards.len()
            )));
        }
        for (v, w) in self.windows.iter().enumerate() {
            if w.release > w.deadline {
                return Err(Error::Argument(format!("vertex {v}: release exceeds deadline")));
            }
        }
        if let Some(v) = self.rewards.iter().position(|r| r.is_negative()) {
            return Err(Error::Argument(format!("vertex {v}: negative reward")));
        }
        if self.budget.is_negative() {
            return Err(Error::Argument("negative budget".into()));
        }
        for a in [self.start, self.end].into_iter().flatten() {
            if a >= n {
                return Err(Error::Structural(format!("anchor {a} outside 0..{n}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.metric.n()
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.rewards[v].is_positive()
    }

    /// Vertices with positive reward, ascending.
    pub fn active(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.is_active(v)).collect()
    }

    pub fn is_free(&self) -> bool {
        self.start.is_none() && self.end.is_none()
    }

    pub fn total_reward(&self) -> Rational {
        self.rewards.iter().sum()
    }

    /// Positive-reward windows all have integer endpoints.
    pub fn has_integer_windows(&self) -> bool {
        self.active().iter().all(|&v| self.windows[v].has_integer_endpoints())
    }

    /// Errors when an anchored walk cannot possibly exist.
    pub fn check_feasible(&self) -> Result<()> {
        if let (Some(s), Some(t)) = (self.start, self.end) {
            match self.metric.get(s, t) {
                Some(d) if d <= &self.budget => {}
                _ => {
                    return Err(Error::Infeasible(format!(
                        "no walk from {s} to {t} fits the budget {}",
                        format_rational(&self.budget)
                    )))
                }
            }
        }
        Ok(())
    }

    /// Same instance with `v` dropped (reward forced to zero).
    pub fn with_dropped(&self, dropped: impl IntoIterator<Item = usize>) -> TwInstance {
        let mut x = self.clone();
        for v in dropped {
            x.rewards[v] = Rational::zero();
        }
        x
    }

    /// Splits into (positive-length part, zero-length part): each keeps only
    /// the positive-reward vertices of its kind.
    pub fn split_zero_windows(&self) -> (TwInstance, TwInstance) {
        let zero: Vec<usize> = self.active().into_iter().filter(|&v| self.windows[v].is_point()).collect();
        let positive: Vec<usize> = self.active().into_iter().filter(|&v| !self.windows[v].is_point()).collect();
        (self.with_dropped(zero), self.with_dropped(positive))
    }

    /// Time reversal `t -> budget - t`: the metric is transposed, anchors are
    /// swapped, and windows are mirrored after clipping to `[0, budget]`.
    /// Vertices whose window misses `[0, budget]` are dropped.
    pub fn reversed(&self) -> TwInstance {
        let h = self.budget;
        let mut x = self.clone();
        x.metric = self.metric.transposed();
        x.start = self.end;
        x.end = self.start;
        for v in 0..self.n() {
            let w = &self.windows[v];
            let lo = w.release.max(Rational::zero());
            let hi = w.deadline.min(h);
            if lo > hi {
                x.rewards[v] = Rational::zero();
                x.windows[v] = TimeWindow { release: Rational::zero(), deadline: h };
            } else {
                x.windows[v] = TimeWindow { release: h - hi, deadline: h - lo };
            }
        }
        x
    }
}

/// Window-length statistics over positive-reward vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowStats {
    /// Shortest positive window length; `None` when every window is a point.
    pub l_min: Option<Rational>,
    pub l_max: Option<Rational>,
    /// `l_max / l_min`; `None` (undefined) when every window is a point.
    pub l_ratio: Option<Rational>,
    /// Latest deadline, zero-length windows included.
    pub d_max: Option<Rational>,
}

pub fn window_stats(x: &TwInstance) -> WindowStats {
    let active = x.active();
    let lengths: Vec<Rational> =
        active.iter().map(|&v| x.windows[v].length()).filter(|l| l.is_positive()).collect();
    let l_min = lengths.iter().min().copied();
    let l_max = lengths.iter().max().copied();
    let l_ratio = match (&l_min, &l_max) {
        (Some(a), Some(b)) => Some(b / a),
        _ => None,
    };
    let d_max = active.iter().map(|&v| x.windows[v].deadline).max();
    WindowStats { l_min, l_max, l_ratio, d_max }
}

/// Multiplies windows, budget and distances by `c > 0`.
pub fn scale_times(x: &TwInstance, c: &Rational) -> Result<TwInstance> {
    if !c.is_positive() {
        return Err(Error::Argument(format!("scale factor {} must be positive", format_rational(c))));
    }
    let mut y = x.clone();
    y.metric = x.metric.scaled(c);
    y.windows = x.windows.iter().map(|w| w.scaled(c)).collect();
    y.budget = x.budget * c;
    Ok(y)
}

/// Restricted version of `x`: each `Some(w)` must lie inside the original
/// window; `None` drops the vertex (its reward becomes zero).
pub fn restrict(x: &TwInstance, new_windows: &[Option<TimeWindow>]) -> Result<TwInstance> {
    if new_windows.len() != x.n() {
        return Err(Error::Structural(format!("{} windows for {} vertices", new_windows.len(), x.n())));
    }
    let mut y = x.clone();
    for (v, w) in new_windows.iter().enumerate() {
        match w {
            Some(w) => {
                if !w.within(&x.windows[v]) {
                    return Err(Error::Containment { vertex: v });
                }
                y.windows[v] = *w;
            }
            None => y.rewards[v] = Rational::zero(),
        }
    }
    Ok(y)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Visit {
    pub vertex: usize,
    pub time: Rational,
    pub collect: bool,
}

/// A timed walk with the vertices it is credited for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkSolution {
    pub schedule: Vec<Visit>,
    pub collected: BTreeSet<usize>,
    pub reward: Rational,
}

impl WalkSolution {
    /// The visit order with collect flags, ready for re-evaluation.
    pub fn order(&self) -> Vec<(usize, bool)> {
        self.schedule.iter().map(|v| (v.vertex, v.collect)).collect()
    }

    pub fn end_time(&self) -> Option<Rational> {
        self.schedule.last().map(|v| v.time)
    }
}

impl fmt::Display for WalkSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.schedule.iter().enumerate() {
            if i > 0 {
                write!(f, " -> ")?;
            }
            let mark = if self.collected.contains(&v.vertex) && v.collect { "*" } else { "" };
            write!(f, "{}{}@{}", v.vertex, mark, format_rational(&v.time))?;
        }
        Ok(())
    }
}

/// Visit order for a walk that claims `claims` in sequence between the
/// instance's anchors. Anchors are passed through unflagged unless they
/// coincide with the adjacent claim.
pub fn assemble_order(x: &TwInstance, claims: &[usize]) -> Vec<(usize, bool)> {
    let mut order: Vec<(usize, bool)> = Vec::with_capacity(claims.len() + 2);
    if let Some(s) = x.start {
        if claims.first() != Some(&s) {
            order.push((s, false));
        }
    }
    order.extend(claims.iter().map(|&c| (c, true)));
    if let Some(t) = x.end {
        if order.last().map(|e| e.0) != Some(t) {
            order.push((t, false));
        }
    }
    order
}

/// Evaluates a visit order.
///
/// Without explicit `times`, wait-allowed instances use the earliest-feasible
/// schedule: a flagged vertex is visited at `max(arrival, release)`, any
/// other vertex on arrival, and a flagged vertex scheduled past its deadline
/// makes the walk infeasible. Under no-wait every vertex is visited on
/// arrival and a flagged visit outside its window is simply not credited.
/// Explicit times are checked for travel feasibility; flagged visits are
/// credited when they fall inside the window.
pub fn evaluate_walk(x: &TwInstance, order: &[(usize, bool)], times: Option<&[Rational]>) -> Result<WalkSolution> {
    let n = x.n();
    if let Some(&(v, _)) = order.iter().find(|(v, _)| *v >= n) {
        return Err(Error::Structural(format!("vertex {v} outside 0..{n}")));
    }
    if order.is_empty() {
        if x.start.is_some() || x.end.is_some() {
            return Err(Error::Infeasible("anchored walk cannot be empty".into()));
        }
        return Ok(WalkSolution { schedule: Vec::new(), collected: BTreeSet::new(), reward: Rational::zero() });
    }
    if let Some(s) = x.start {
        if order[0].0 != s {
            return Err(Error::Infeasible(format!("walk must start at {s}")));
        }
    }
    if let Some(t) = x.end {
        if order[order.len() - 1].0 != t {
            return Err(Error::Infeasible(format!("walk must end at {t}")));
        }
    }
    if let Some(ts) = times {
        if ts.len() != order.len() {
            return Err(Error::Argument(format!("{} times for {} visits", ts.len(), order.len())));
        }
    }

    let mut schedule = Vec::with_capacity(order.len());
    let mut collected = BTreeSet::new();
    let mut prev: Option<(usize, Rational)> = None;
    for (i, &(v, flag)) in order.iter().enumerate() {
        let window = &x.windows[v];
        let arrival = match &prev {
            None => Rational::zero(),
            Some((p, tp)) => match x.metric.get(*p, v) {
                Some(d) => tp + d,
                None => return Err(Error::Infeasible(format!("vertex {v} unreachable from {p}"))),
            },
        };
        let time = match times {
            Some(ts) => {
                let t = ts[i];
                if t < arrival {
                    return Err(Error::Infeasible(format!("visit {i} at vertex {v} precedes its earliest arrival")));
                }
                if x.wait == WaitPolicy::NoWait && t != arrival && !(prev.is_none() && x.start.is_none()) {
                    return Err(Error::Infeasible(format!("visit {i} at vertex {v} waits under no-wait")));
                }
                t
            }
            None => match x.wait {
                WaitPolicy::Wait if flag => arrival.max(window.release),
                _ => arrival,
            },
        };
        let credited = flag && window.contains(&time);
        if flag && !credited && times.is_none() && x.wait == WaitPolicy::Wait {
            return Err(Error::Infeasible(format!(
                "vertex {v} cannot be reached by its deadline {}",
                format_rational(&window.deadline)
            )));
        }
        if credited {
            collected.insert(v);
        }
        schedule.push(Visit { vertex: v, time, collect: flag });
        prev = Some((v, time));
    }
    let last = schedule.last().map(|v| v.time).unwrap_or_default();
    if last > x.budget {
        return Err(Error::Infeasible(format!(
            "walk ends at {} after the budget {}",
            format_rational(&last),
            format_rational(&x.budget)
        )));
    }
    let reward = collected.iter().map(|&v| x.rewards[v]).sum();
    Ok(WalkSolution { schedule, collected, reward })
}
