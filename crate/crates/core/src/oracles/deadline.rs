use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{DeadlineOracle, DeadlineQuery, OracleSpec, OrienteeringOracle, OrienteeringQuery, WalkResult};
use crate::oracles::ExactOrienteering;
use crate::rational::{floor_log2, pow2, Rational};

/// Exact deadline orienteering by branch and bound with deadline pruning.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactDeadline;

struct Bnb<'q, 'm> {
    q: &'q DeadlineQuery<'m>,
    cands: Vec<(usize, Rational, Rational)>,
    memo: HashMap<(u64, usize), Rational>,
    seq: Vec<usize>,
    best: Option<(Rational, Vec<usize>)>,
}

impl Bnb<'_, '_> {
    fn fits_end(&self, w: usize, time: &Rational) -> bool {
        match self.q.end {
            None => true,
            Some(e) => self.q.metric.get(w, e).is_some_and(|d| time + d <= self.q.horizon),
        }
    }

    fn dfs(&mut self, last: usize, time: Rational, mask: u64, reward: Rational) {
        let q = self.q;
        if self.best.as_ref().is_none_or(|(b, _)| reward > *b) {
            self.best = Some((reward, self.seq.clone()));
        }
        let mut options = Vec::new();
        let mut bound = Rational::zero();
        for (i, &(w, r, d)) in self.cands.iter().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let Some(step) = q.metric.get(last, w) else { continue };
            let t = time + step;
            if t <= d && t <= q.horizon && self.fits_end(w, &t) {
                bound += r;
                options.push((i, w, r, t));
            }
        }
        if let Some((b, _)) = &self.best {
            if reward + bound <= *b {
                return;
            }
        }
        for (i, w, r, t) in options {
            let next = mask | (1 << i);
            match self.memo.get(&(next, w)) {
                Some(m) if *m <= t => continue,
                _ => {
                    self.memo.insert((next, w), t);
                }
            }
            self.seq.push(w);
            self.dfs(w, t, next, reward + r);
            self.seq.pop();
        }
    }
}

fn direct(q: &DeadlineQuery) -> Option<Vec<usize>> {
    let order = match q.end {
        Some(e) if e != q.start => vec![q.start, e],
        _ => vec![q.start],
    };
    q.evaluate(&order).map(|r| r.order)
}

impl DeadlineOracle for ExactDeadline {
    fn spec(&self) -> OracleSpec {
        OracleSpec::exact("exact")
    }

    fn best_walk(&self, q: &DeadlineQuery) -> WalkResult {
        if direct(q).is_none() {
            return WalkResult::infeasible();
        }
        let cands: Vec<_> = q.eligible.iter().filter(|e| e.0 != q.start && e.1.is_positive()).cloned().collect();
        assert!(cands.len() <= 64, "too many eligible vertices for exact search");
        let base = q.entry(q.start).map(|e| e.1).unwrap_or_default();
        let mut bnb = Bnb { q, cands, memo: HashMap::new(), seq: Vec::new(), best: None };
        bnb.dfs(q.start, q.t0, 0, base);
        let (_, seq) = bnb.best.expect("the direct walk is feasible");
        let mut order = vec![q.start];
        order.extend(seq);
        if let Some(e) = q.end {
            if order.last() != Some(&e) {
                order.push(e);
            }
        }
        q.evaluate(&order).expect("search only keeps feasible walks")
    }
}

/// Deadline heuristic: groups eligible vertices into deadline classes
/// `[2^j, 2^(j+1))`, solves each class as plain orienteering that must finish
/// by `2^j` (then heads to the end anchor, if any), and keeps the best class.
#[derive(Clone)]
pub struct LayeredDeadline {
    inner: Arc<dyn OrienteeringOracle>,
}

impl LayeredDeadline {
    pub fn new(inner: Arc<dyn OrienteeringOracle>) -> Self {
        LayeredDeadline { inner }
    }
}

impl Default for LayeredDeadline {
    fn default() -> Self {
        LayeredDeadline::new(Arc::new(ExactOrienteering))
    }
}

impl DeadlineOracle for LayeredDeadline {
    fn spec(&self) -> OracleSpec {
        OracleSpec::heuristic("layered")
    }

    fn best_walk(&self, q: &DeadlineQuery) -> WalkResult {
        let Some(base) = direct(q) else { return WalkResult::infeasible() };
        let mut best = q.evaluate(&base).expect("direct walk re-evaluates");
        let mut classes: Vec<(i32, Vec<(usize, Rational)>)> = Vec::new();
        for (w, r, d) in &q.eligible {
            if !d.is_positive() || !r.is_positive() {
                continue;
            }
            let j = floor_log2(d);
            match classes.iter_mut().find(|c| c.0 == j) {
                Some(c) => c.1.push((*w, *r)),
                None => classes.push((j, vec![(*w, *r)])),
            }
        }
        classes.sort_by_key(|c| c.0);
        for (j, members) in classes {
            let cutoff = pow2(j).min(q.horizon);
            let budget = cutoff - q.t0;
            if budget.is_negative() {
                continue;
            }
            // the class walk ends at any member; an end anchor is appended
            for v in std::iter::once(q.start).chain(members.iter().map(|m| m.0)) {
                let oq = OrienteeringQuery::new(q.metric, members.clone(), q.start, v, budget);
                let found = self.inner.best_walk(&oq);
                if !found.is_feasible() {
                    continue;
                }
                let mut order = found.order;
                if let Some(e) = q.end {
                    if order.last() != Some(&e) {
                        order.push(e);
                    }
                }
                if let Some(r) = q.evaluate(&order) {
                    if r.reward > best.reward {
                        best = r;
                    }
                }
            }
        }
        best
    }
}
