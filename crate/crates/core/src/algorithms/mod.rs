//! End-to-end approximation algorithms built from restricted-version
//! families and modular compositions, plus the deadline reduction, the
//! point-window solver and a dispatcher.
//!
//! Every algorithm returns a walk evaluated on the instance it was given,
//! whatever version or rescaling produced it.

mod bounded;
mod free;
mod reduction;
mod zero;

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::brute::brute_force_opt;
use crate::decomposition::RestrictedFamily;
use crate::error::{Error, Result};
use crate::instance::{assemble_order, evaluate_walk, window_stats, TwInstance, WaitPolicy, WalkSolution};
use crate::modular::{
    integerize, partition_by_windows, solve_exact_pareto, solve_reward_indexed, solve_time_indexed, DpMode,
};
use crate::oracles::{DeadlineOracle, ExactDeadline, ExactOrienteering, OrienteeringOracle};
use crate::rational::{format_rational, int, Rational};

pub use bounded::{solve_general, solve_integer_endpoints, solve_l_le_2};
pub use free::{solve_free_general, solve_free_l_le_2};
pub use reduction::reduce_deadline_to_tw;
pub use zero::zero_window_dp;

/// Oracles and composition mode shared by every algorithm.
#[derive(Clone)]
pub struct SolverContext {
    pub oracle: Arc<dyn OrienteeringOracle>,
    pub deadline: Arc<dyn DeadlineOracle>,
    pub mode: DpMode,
}

impl Default for SolverContext {
    fn default() -> Self {
        SolverContext { oracle: Arc::new(ExactOrienteering), deadline: Arc::new(ExactDeadline), mode: DpMode::default() }
    }
}

impl SolverContext {
    /// Largest declared ratio among the oracles, and whether both are proven.
    pub fn alpha(&self) -> (Rational, bool) {
        let (a, b) = (self.oracle.spec(), self.deadline.spec());
        (a.alpha().max(b.alpha()), a.is_proven() && b.is_proven())
    }
}

/// Guarantee an algorithm claims for its answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    /// Number of restricted versions actually built.
    pub beta: usize,
    pub alpha: Rational,
    /// Claimed `OPT / reward` ceiling; meaningful only when `proven`.
    pub ratio: Rational,
    pub proven: bool,
    pub asymptotic: String,
}

/// Reward of one restricted version, labelled `family:version`, nested
/// solves joined by `/`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionOutcome {
    pub label: String,
    pub reward: Rational,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub algorithm: String,
    pub walk: WalkSolution,
    pub versions: Vec<VersionOutcome>,
    pub bound: Bound,
    pub elapsed: Duration,
}

impl SolveReport {
    /// Text rendering without the elapsed time, identical for identical
    /// inputs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("algorithm: {}\n", self.algorithm));
        out.push_str(&format!("reward: {}\n", format_rational(&self.walk.reward)));
        out.push_str("walk:\n");
        for v in &self.walk.schedule {
            let state = match (v.collect, self.walk.collected.contains(&v.vertex)) {
                (true, true) => "collected",
                (true, false) => "missed",
                _ => "pass",
            };
            out.push_str(&format!("  {} @ {} {}\n", v.vertex, format_rational(&v.time), state));
        }
        out.push_str("versions:\n");
        for v in &self.versions {
            out.push_str(&format!("  {} {}\n", v.label, format_rational(&v.reward)));
        }
        let b = &self.bound;
        out.push_str(&format!(
            "bound: beta {} alpha {} ratio {}{} asymptotic {}\n",
            b.beta,
            format_rational(&b.alpha),
            format_rational(&b.ratio),
            if b.proven { "" } else { " (not proven for these oracles)" },
            b.asymptotic
        ));
        out
    }
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Rejects what no algorithm handles: no-wait semantics and anchored
/// instances without any feasible walk.
pub(crate) fn precheck(x: &TwInstance) -> Result<()> {
    x.validate()?;
    if x.wait == WaitPolicy::NoWait {
        return Err(Error::Precondition("the approximation algorithms need waiting to be allowed".into()));
    }
    x.check_feasible()
}

/// Re-evaluates the vertices `sol` collected, in order, on `x`.
pub(crate) fn lift(x: &TwInstance, sol: &WalkSolution) -> Result<WalkSolution> {
    let claims: Vec<usize> =
        sol.schedule.iter().filter(|v| v.collect && sol.collected.contains(&v.vertex)).map(|v| v.vertex).collect();
    lift_claims(x, &claims)
}

pub(crate) fn lift_claims(x: &TwInstance, claims: &[usize]) -> Result<WalkSolution> {
    let mut seen = Vec::with_capacity(claims.len());
    for &c in claims {
        if !seen.contains(&c) {
            seen.push(c);
        }
    }
    evaluate_walk(x, &assemble_order(x, &seen), None)
}

/// Solves a modular version: blocks are the groups of identical windows.
pub(crate) fn solve_modular(x: &TwInstance, ctx: &SolverContext) -> Result<WalkSolution> {
    let p = partition_by_windows(x);
    match ctx.mode {
        DpMode::RewardIndexed => solve_reward_indexed(x, &p, ctx.oracle.as_ref()),
        DpMode::ExactPareto => solve_exact_pareto(x, &p),
        DpMode::TimeIndexed => {
            let (y, q, _) = integerize(x, &p)?;
            let sol = solve_time_indexed(&y, &q, ctx.oracle.as_ref())?;
            lift(x, &sol)
        }
    }
}

/// A candidate answer: its label, the walk on the original instance and any
/// nested version outcomes.
pub(crate) struct Candidate {
    pub label: String,
    pub walk: WalkSolution,
    pub nested: Vec<VersionOutcome>,
}

/// Solves every version of `family` in parallel and lifts each answer to `x`.
pub(crate) fn solve_family<F>(x: &TwInstance, family: &RestrictedFamily, solve: F) -> Result<Vec<Candidate>>
where
    F: Fn(&str, &TwInstance) -> Result<(WalkSolution, Vec<VersionOutcome>)> + Sync,
{
    let results: Vec<Result<Candidate>> = family
        .versions
        .par_iter()
        .map(|(label, v)| {
            let (sol, nested) = solve(label, v)?;
            Ok(Candidate { label: label.clone(), walk: lift(x, &sol)?, nested })
        })
        .collect();
    results.into_iter().collect()
}

/// Adds the point-window answer when `x` has positive-reward point windows.
pub(crate) fn with_zero_branch(x: &TwInstance, mut cands: Vec<Candidate>) -> Result<Vec<Candidate>> {
    if x.active().iter().any(|&v| x.windows[v].is_point()) {
        cands.push(Candidate { label: "zero-window".into(), walk: zero_window_dp(x)?, nested: Vec::new() });
    }
    if cands.is_empty() {
        cands.push(Candidate { label: "direct".into(), walk: lift_claims(x, &[])?, nested: Vec::new() });
    }
    Ok(cands)
}

/// Best-of-two with the exact point-window answer adds one to the ratio.
pub(crate) fn point_window_share(x: &TwInstance, mut bound: Bound) -> Bound {
    if x.active().iter().any(|&v| x.windows[v].is_point()) {
        bound.ratio += Rational::one();
    }
    bound
}

/// Picks the best candidate, the earliest on ties.
pub(crate) fn finish(algorithm: &str, cands: Vec<Candidate>, bound: Bound, started: Instant) -> SolveReport {
    let mut versions = Vec::new();
    for c in &cands {
        versions.push(VersionOutcome { label: c.label.clone(), reward: c.walk.reward });
        for n in &c.nested {
            versions.push(VersionOutcome { label: format!("{}/{}", c.label, n.label), reward: n.reward });
        }
    }
    let mut best: Option<Candidate> = None;
    for c in cands {
        if best.as_ref().is_none_or(|b| c.walk.reward > b.walk.reward) {
            best = Some(c);
        }
    }
    SolveReport {
        algorithm: algorithm.to_string(),
        walk: best.expect("at least one candidate").walk,
        versions,
        bound,
        elapsed: started.elapsed(),
    }
}

/// Ratio of longest to shortest positive window, 1 when there is none.
pub(crate) fn length_ratio(x: &TwInstance) -> Rational {
    window_stats(x).l_ratio.unwrap_or_else(Rational::one)
}

/// Which algorithm `solve_auto` and the command line run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    IntegerEndpoints,
    LLe2,
    General,
    FreeLLe2,
    FreeGeneral,
    Auto,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::IntegerEndpoints => "integer-endpoints",
            Algorithm::LLe2 => "l2",
            Algorithm::General => "general",
            Algorithm::FreeLLe2 => "free-l2",
            Algorithm::FreeGeneral => "free-general",
            Algorithm::Auto => "auto",
        }
    }

    pub fn parse(name: &str) -> Option<Algorithm> {
        [
            Algorithm::IntegerEndpoints,
            Algorithm::LLe2,
            Algorithm::General,
            Algorithm::FreeLLe2,
            Algorithm::FreeGeneral,
            Algorithm::Auto,
        ]
        .into_iter()
        .find(|a| a.name() == name)
    }

    pub fn run(self, x: &TwInstance, ctx: &SolverContext) -> Result<SolveReport> {
        match self {
            Algorithm::IntegerEndpoints => solve_integer_endpoints(x, ctx),
            Algorithm::LLe2 => solve_l_le_2(x, ctx),
            Algorithm::General => solve_general(x, ctx),
            Algorithm::FreeLLe2 => solve_free_l_le_2(x, ctx),
            Algorithm::FreeGeneral => solve_free_general(x, ctx),
            Algorithm::Auto => solve_auto(x, ctx),
        }
    }
}

/// Instances up to this size are also solved exactly by [`solve_auto`].
pub const AUTO_EXACT_LIMIT: usize = 10;

/// Runs every algorithm whose preconditions `x` meets and keeps the best
/// answer: the general algorithm always, the free banding algorithm on free
/// instances, and the integer-endpoint and ratio-two algorithms when they
/// apply. Point windows are always covered. Instances with at most
/// [`AUTO_EXACT_LIMIT`] vertices are also solved exactly.
pub fn solve_auto(x: &TwInstance, ctx: &SolverContext) -> Result<SolveReport> {
    let started = Instant::now();
    precheck(x)?;
    let mut routes = Vec::new();
    if x.is_free() {
        routes.push(Algorithm::FreeGeneral);
    }
    if x.has_integer_windows() {
        routes.push(Algorithm::IntegerEndpoints);
    }
    if length_ratio(x) <= int(2) {
        routes.push(Algorithm::LLe2);
    }
    routes.push(Algorithm::General);
    let mut cands = Vec::new();
    let mut ratio: Option<Rational> = None;
    let mut beta = 0;
    let mut asymptotic = String::new();
    for a in routes {
        let r = a.run(x, ctx)?;
        if ratio.is_none_or(|cur| r.bound.ratio < cur) {
            ratio = Some(r.bound.ratio);
            asymptotic = r.bound.asymptotic.clone();
        }
        beta += r.bound.beta;
        cands.push(Candidate { label: a.name().to_string(), walk: r.walk, nested: r.versions });
    }
    if x.n() <= AUTO_EXACT_LIMIT {
        let walk = brute_force_opt(x)?;
        ratio = Some(Rational::one());
        asymptotic = "exact".into();
        cands.push(Candidate { label: "exact".into(), walk, nested: Vec::new() });
    }
    let (alpha, proven) = ctx.alpha();
    let bound = Bound { beta, alpha, ratio: ratio.unwrap_or(Rational::zero()), proven, asymptotic };
    Ok(finish("auto", cands, bound, started))
}
