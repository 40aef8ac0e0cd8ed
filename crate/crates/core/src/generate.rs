//! Seeded random instances.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{TimeWindow, TwInstance, WaitPolicy};
use crate::metric::{metric_closure, Graph};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Points on a square grid with Manhattan distances.
    EuclideanGrid,
    /// Complete graph with random integer lengths, closed.
    RandomMetric,
    /// Complete digraph with random integer lengths, closed.
    DirectedRandom,
    /// Points on a line.
    Line,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::EuclideanGrid, Family::RandomMetric, Family::DirectedRandom, Family::Line];

    pub fn name(self) -> &'static str {
        match self {
            Family::EuclideanGrid => "euclidean-grid",
            Family::RandomMetric => "random-metric",
            Family::DirectedRandom => "directed-random",
            Family::Line => "line",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    /// Window lengths are drawn from `[l_lo, l_hi]`.
    pub l_lo: Rational,
    pub l_hi: Rational,
    /// Windows lie inside `[0, horizon]`.
    pub horizon: Rational,
    /// Window lengths and releases are multiples of `1 / grain`.
    pub grain: i128,
    /// Rewards are drawn from `1..=max_reward`.
    pub max_reward: i128,
    /// Anchored instances start at vertex 0 and end at vertex `n - 1`, both
    /// with reward zero; free instances have no anchors.
    pub anchored: bool,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GenSpec {
            family,
            n,
            l_lo: int(1),
            l_hi: int(4),
            horizon: int(8),
            grain: 1,
            max_reward: 1,
            anchored: true,
            seed,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || (self.anchored && self.n < 2) {
            return Err(Error::Argument(format!("{} vertices are too few", self.n)));
        }
        if self.l_lo.is_negative() || self.l_lo > self.l_hi {
            return Err(Error::Argument("window lengths need 0 <= l_lo <= l_hi".into()));
        }
        if self.l_hi > self.horizon {
            return Err(Error::Argument("l_hi exceeds the horizon".into()));
        }
        if self.grain < 1 || self.max_reward < 1 {
            return Err(Error::Argument("grain and max_reward must be positive".into()));
        }
        Ok(())
    }
}

fn grid_value(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, grain: i128) -> Rational {
    // multiples of 1/grain inside [lo, hi]
    let a = (lo * int(grain)).ceil().to_integer();
    let b = (hi * int(grain)).floor().to_integer();
    if a > b {
        return *lo;
    }
    Rational::new(rng.gen_range(a..=b), grain)
}

fn graph(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Graph {
    let n = spec.n;
    match spec.family {
        Family::Line => {
            let mut pos: Vec<(i128, usize)> = (0..n).map(|v| (rng.gen_range(0..=2 * n as i128), v)).collect();
            pos.sort();
            let mut g = Graph::new(false, n);
            for p in pos.windows(2) {
                g.add_edge(p[0].1, p[1].1, int(p[1].0 - p[0].0));
            }
            g
        }
        Family::EuclideanGrid => {
            let side = (n as f64).sqrt().ceil() as i128 + 1;
            let pts: Vec<(i128, i128)> = (0..n).map(|_| (rng.gen_range(0..side), rng.gen_range(0..side))).collect();
            let mut g = Graph::new(false, n);
            for u in 0..n {
                for v in u + 1..n {
                    let d = (pts[u].0 - pts[v].0).abs() + (pts[u].1 - pts[v].1).abs();
                    g.add_edge(u, v, int(d));
                }
            }
            g
        }
        Family::RandomMetric | Family::DirectedRandom => {
            let directed = spec.family == Family::DirectedRandom;
            let mut g = Graph::new(directed, n);
            for u in 0..n {
                for v in 0..n {
                    if u == v || (!directed && v < u) {
                        continue;
                    }
                    g.add_edge(u, v, int(rng.gen_range(1..=5)));
                }
            }
            g
        }
    }
}

/// Deterministic instance for `spec`.
pub fn generate_instance(spec: &GenSpec) -> Result<TwInstance> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let metric = metric_closure(&graph(spec, &mut rng))?;
    let n = spec.n;
    let mut windows = Vec::with_capacity(n);
    let mut rewards = Vec::with_capacity(n);
    for _ in 0..n {
        let len = grid_value(&mut rng, &spec.l_lo, &spec.l_hi, spec.grain);
        let release = grid_value(&mut rng, &int(0), &(spec.horizon - len), spec.grain);
        windows.push(TimeWindow::of(release, release + len));
        rewards.push(int(rng.gen_range(1..=spec.max_reward)));
    }
    // slack of one longest window past the horizon
    let mut budget = spec.horizon + spec.l_hi;
    let (start, end) = if spec.anchored { (Some(0), Some(n - 1)) } else { (None, None) };
    if let (Some(s), Some(t)) = (start, end) {
        rewards[s] = int(0);
        rewards[t] = int(0);
        if let Some(d) = metric.get(s, t) {
            budget = budget.max(*d);
        }
        windows[s] = TimeWindow::of(int(0), budget);
        windows[t] = TimeWindow::of(int(0), budget);
    }
    TwInstance::new(metric, windows, rewards, start, end, budget, WaitPolicy::Wait)
}
