//! Empirical ratios of the algorithms against the brute-force optimum.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;

use crate::algorithms::{Algorithm, SolverContext};
use crate::brute::brute_force_opt;
use crate::error::{Error, Result};
use crate::generate::{generate_instance, Family, GenSpec};
use crate::instance::window_stats;
use crate::rational::{format_rational, Rational};

/// Largest instance the benchmark solves by brute force.
pub const BENCH_BRUTE_LIMIT: usize = 12;

pub const CSV_HEADER: [&str; 14] = [
    "instance",
    "n",
    "l_min",
    "l_max",
    "l_ratio",
    "algorithm",
    "oracle",
    "status",
    "alg_reward",
    "opt_reward",
    "empirical_ratio",
    "bound",
    "within_bound",
    "elapsed_ms",
];

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    /// Template for every generated instance; family, size and seed are
    /// overwritten.
    pub template: GenSpec,
    /// Name of the oracle in `ctx`, copied into each row.
    pub oracle: String,
    /// Record wall-clock time; rows are byte-identical across runs only
    /// without it.
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub l_min: Option<Rational>,
    pub l_max: Option<Rational>,
    pub l_ratio: Option<Rational>,
    pub algorithm: String,
    pub oracle: String,
    /// `ok`, or the reason the algorithm did not apply.
    pub status: String,
    pub alg_reward: Option<Rational>,
    pub opt_reward: Rational,
    /// `opt / alg`; `None` when the algorithm collected nothing but the
    /// optimum is positive.
    pub empirical_ratio: Option<Rational>,
    pub bound: Option<Rational>,
    pub elapsed_ms: Option<u128>,
}

impl BenchRow {
    pub fn within_bound(&self) -> Option<bool> {
        match (&self.bound, &self.alg_reward) {
            (Some(b), Some(a)) => Some(self.opt_reward <= a * b),
            _ => None,
        }
    }

    fn record(&self) -> Vec<String> {
        let opt = |r: &Option<Rational>| r.as_ref().map(format_rational).unwrap_or_default();
        vec![
            self.instance.clone(),
            self.n.to_string(),
            opt(&self.l_min),
            opt(&self.l_max),
            opt(&self.l_ratio),
            self.algorithm.clone(),
            self.oracle.clone(),
            self.status.clone(),
            opt(&self.alg_reward),
            format_rational(&self.opt_reward),
            match (&self.empirical_ratio, &self.alg_reward) {
                (Some(r), _) => format_rational(r),
                (None, Some(_)) => "inf".into(),
                (None, None) => String::new(),
            },
            opt(&self.bound),
            self.within_bound().map(|b| b.to_string()).unwrap_or_default(),
            self.elapsed_ms.map(|t| t.to_string()).unwrap_or_default(),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    pub csv: String,
    pub summary: String,
}

fn ratio(opt: &Rational, alg: &Rational) -> Option<Rational> {
    if alg.is_zero() {
        opt.is_zero().then(|| Rational::from_integer(1))
    } else {
        Some(opt / alg)
    }
}

/// Generates every `(family, size, seed)` instance, runs each algorithm and
/// the brute force on it, and returns the rows in `(instance, algorithm)`
/// order together with the CSV text and a summary line.
pub fn run_bench(spec: &BenchSpec, ctx: &SolverContext) -> Result<BenchOutput> {
    if let Some(&n) = spec.sizes.iter().find(|&&n| n > BENCH_BRUTE_LIMIT) {
        return Err(Error::Argument(format!(
            "size {n} exceeds the brute-force limit of {BENCH_BRUTE_LIMIT} vertices"
        )));
    }
    let mut jobs = Vec::new();
    for &family in &spec.families {
        for &n in &spec.sizes {
            for &seed in &spec.seeds {
                jobs.push(GenSpec { family, n, seed, ..spec.template.clone() });
            }
        }
    }
    let per_instance: Vec<Result<Vec<BenchRow>>> = jobs.par_iter().map(|g| bench_instance(spec, g, ctx)).collect();
    let mut rows = Vec::new();
    for r in per_instance {
        rows.extend(r?);
    }

    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    writer.write_record(CSV_HEADER).map_err(io)?;
    for row in &rows {
        writer.write_record(row.record()).map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let csv = String::from_utf8(bytes).expect("csv output is utf-8");
    Ok(BenchOutput { summary: summarize(&rows), rows, csv })
}

fn bench_instance(spec: &BenchSpec, g: &GenSpec, ctx: &SolverContext) -> Result<Vec<BenchRow>> {
    let x = generate_instance(g)?;
    let opt = brute_force_opt(&x)?.reward;
    let stats = window_stats(&x);
    let id = format!("{}-n{}-s{}", g.family, g.n, g.seed);
    let mut rows = Vec::new();
    for &a in &spec.algorithms {
        let started = Instant::now();
        let outcome = a.run(&x, ctx);
        let elapsed = spec.timings.then(|| started.elapsed().as_millis());
        let mut row = BenchRow {
            instance: id.clone(),
            n: g.n,
            l_min: stats.l_min,
            l_max: stats.l_max,
            l_ratio: stats.l_ratio,
            algorithm: a.name().to_string(),
            oracle: spec.oracle.clone(),
            status: "ok".into(),
            alg_reward: None,
            opt_reward: opt,
            empirical_ratio: None,
            bound: None,
            elapsed_ms: elapsed,
        };
        match outcome {
            Ok(r) => {
                row.empirical_ratio = ratio(&opt, &r.walk.reward);
                row.alg_reward = Some(r.walk.reward);
                row.bound = r.bound.proven.then_some(r.bound.ratio);
            }
            Err(Error::Precondition(m)) => row.status = format!("skipped: {m}"),
            Err(e) => return Err(e),
        }
        rows.push(row);
    }
    Ok(rows)
}

/// One line: the worst empirical ratio per algorithm and the number of rows
/// exceeding their bound.
pub fn summarize(rows: &[BenchRow]) -> String {
    let mut worst: BTreeMap<&str, Option<Rational>> = BTreeMap::new();
    let mut unbounded: BTreeMap<&str, bool> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.alg_reward.is_some()) {
        let e = worst.entry(r.algorithm.as_str()).or_insert(None);
        match &r.empirical_ratio {
            Some(v) => {
                if e.is_none_or(|cur| *v > cur) {
                    *e = Some(*v);
                }
            }
            None => {
                unbounded.insert(r.algorithm.as_str(), true);
            }
        }
    }
    let violations = rows.iter().filter(|r| r.within_bound() == Some(false)).count();
    let parts: Vec<String> = worst
        .iter()
        .map(|(a, v)| {
            let shown = if unbounded.contains_key(a) {
                "inf".to_string()
            } else {
                v.as_ref().map(format_rational).unwrap_or_else(|| "-".into())
            };
            format!("{a}={shown}")
        })
        .collect();
    format!("rows={} max_empirical_ratio: {} bound_violations={violations}", rows.len(), parts.join(" "))
}
