use std::collections::HashMap;

use num_traits::Zero;

use super::{OracleSpec, OrienteeringOracle, OrienteeringQuery, WalkResult};
use crate::rational::Rational;

/// Exact point-to-point orienteering by branch and bound over claim
/// sequences, ties broken towards the lexicographically smallest order.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOrienteering;

struct Bnb<'q, 'm> {
    q: &'q OrienteeringQuery<'m>,
    cands: Vec<(usize, Rational)>,
    memo: HashMap<(u64, usize), Rational>,
    seq: Vec<usize>,
    best: Option<(Rational, Vec<usize>)>,
}

impl Bnb<'_, '_> {
    fn dfs(&mut self, last: usize, len: Rational, mask: u64, reward: Rational) {
        let q = self.q;
        let improves = match &self.best {
            None => true,
            Some((b, _)) => reward > *b,
        };
        if improves {
            self.best = Some((reward, self.seq.clone()));
        }
        let mut options = Vec::new();
        let mut bound = Rational::zero();
        for (i, &(w, r)) in self.cands.iter().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let (Some(a), Some(b)) = (q.metric.get(last, w), q.metric.get(w, q.v)) else { continue };
            let l = len + a;
            if l + b <= q.budget {
                bound += r;
                options.push((i, w, r, l));
            }
        }
        if let Some((b, _)) = &self.best {
            if reward + bound <= *b {
                return;
            }
        }
        for (i, w, r, l) in options {
            let next = mask | (1 << i);
            match self.memo.get(&(next, w)) {
                Some(m) if *m <= l => continue,
                _ => {
                    self.memo.insert((next, w), l);
                }
            }
            self.seq.push(w);
            self.dfs(w, l, next, reward + r);
            self.seq.pop();
        }
    }
}

impl OrienteeringOracle for ExactOrienteering {
    fn spec(&self) -> OracleSpec {
        OracleSpec::exact("exact")
    }

    fn best_walk(&self, q: &OrienteeringQuery) -> WalkResult {
        match q.metric.get(q.u, q.v) {
            Some(d) if *d <= q.budget => {}
            _ => return WalkResult::infeasible(),
        }
        let cands: Vec<(usize, Rational)> =
            q.eligible.iter().filter(|e| e.0 != q.u && e.0 != q.v && e.1 > Rational::zero()).cloned().collect();
        assert!(cands.len() <= 64, "too many eligible vertices for exact search");
        let base = if q.u == q.v { q.reward_of(q.u) } else { q.reward_of(q.u) + q.reward_of(q.v) };
        let mut bnb = Bnb { q, cands, memo: HashMap::new(), seq: Vec::new(), best: None };
        bnb.dfs(q.u, Rational::zero(), 0, base);
        let (_, seq) = bnb.best.expect("the direct walk is feasible");
        let mut order = vec![q.u];
        order.extend(seq);
        if order.len() > 1 || q.u != q.v {
            order.push(q.v);
        }
        q.evaluate(&order).expect("search only keeps feasible walks")
    }
}

/// Cheapest-insertion heuristic: repeatedly inserts the vertex with the best
/// reward per unit of detour that still fits the budget.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyOrienteering;

impl OrienteeringOracle for GreedyOrienteering {
    fn spec(&self) -> OracleSpec {
        OracleSpec::heuristic("greedy")
    }

    fn best_walk(&self, q: &OrienteeringQuery) -> WalkResult {
        let m = q.metric;
        let mut len = match m.get(q.u, q.v) {
            Some(d) if *d <= q.budget => *d,
            _ => return WalkResult::infeasible(),
        };
        let mut route = if q.u == q.v { vec![q.u, q.u] } else { vec![q.u, q.v] };
        let mut pool: Vec<(usize, Rational)> =
            q.eligible.iter().filter(|e| e.0 != q.u && e.0 != q.v && e.1 > Rational::zero()).cloned().collect();
        loop {
            // (score, reward, vertex index in pool, position, detour); a zero
            // detour scores above everything else
            let mut pick: Option<(Option<Rational>, Rational, usize, usize, Rational)> = None;
            for (k, &(w, r)) in pool.iter().enumerate() {
                let mut best_pos: Option<(usize, Rational)> = None;
                for p in 0..route.len() - 1 {
                    let (a, b) = (route[p], route[p + 1]);
                    let (Some(x), Some(y), Some(z)) = (m.get(a, w), m.get(w, b), m.get(a, b)) else { continue };
                    let delta = x + y - z;
                    if len + delta <= q.budget && best_pos.as_ref().is_none_or(|(_, d)| delta < *d) {
                        best_pos = Some((p, delta));
                    }
                }
                let Some((p, delta)) = best_pos else { continue };
                let score = if delta.is_zero() { None } else { Some(r / delta) };
                let better = match &pick {
                    None => true,
                    Some((s, pr, _, _, _)) => match (&score, s) {
                        (None, Some(_)) => true,
                        (Some(_), None) => false,
                        (a, b) if a == b => r > *pr,
                        (Some(a), Some(b)) => a > b,
                        _ => false,
                    },
                };
                if better {
                    pick = Some((score, r, k, p, delta));
                }
            }
            let Some((_, _, k, p, delta)) = pick else { break };
            let (w, _) = pool.remove(k);
            route.insert(p + 1, w);
            len += delta;
        }
        if q.u == q.v && route.len() == 2 {
            route.pop();
        }
        q.evaluate(&route).expect("insertion keeps the walk within budget")
    }
}
