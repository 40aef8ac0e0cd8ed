use std::collections::HashMap;
use std::sync::Mutex;

use super::{DeadlineOracle, DeadlineQuery, OracleSpec, OrienteeringOracle, OrienteeringQuery, WalkResult};
use crate::rational::Rational;

/// Cached answers for one query shape, keyed by the budget they were asked at.
type Probes = Vec<(Rational, WalkResult)>;

/// Picks the best answer among probes whose budget does not exceed `budget`.
fn running_max(probes: &Probes, budget: &Rational) -> WalkResult {
    let mut best: Option<&WalkResult> = None;
    for (b, r) in probes {
        if b > budget || !r.is_feasible() {
            continue;
        }
        let better = match best {
            None => true,
            Some(cur) => r.reward > cur.reward || (r.reward == cur.reward && r.duration < cur.duration),
        };
        if better {
            best = Some(r);
        }
    }
    best.cloned().unwrap_or_else(WalkResult::infeasible)
}

/// Makes any orienteering oracle nondecreasing in the budget: every answer
/// is the best walk seen so far at a budget no larger than the one asked.
/// The cache lives as long as the wrapper, so create one per solve.
pub struct MonotoneOrienteering<'o> {
    inner: &'o dyn OrienteeringOracle,
    cache: Mutex<HashMap<(usize, Vec<(usize, Rational)>, usize, usize), Probes>>,
}

impl<'o> MonotoneOrienteering<'o> {
    pub fn new(inner: &'o dyn OrienteeringOracle) -> Self {
        MonotoneOrienteering { inner, cache: Mutex::new(HashMap::new()) }
    }
}

impl OrienteeringOracle for MonotoneOrienteering<'_> {
    fn spec(&self) -> OracleSpec {
        self.inner.spec()
    }

    fn best_walk(&self, q: &OrienteeringQuery) -> WalkResult {
        let key = (q.metric as *const _ as usize, q.eligible.clone(), q.u, q.v);
        if let Some(probes) = self.cache.lock().unwrap().get(&key) {
            if probes.iter().any(|(b, _)| *b == q.budget) {
                return running_max(probes, &q.budget);
            }
        }
        let fresh = self.inner.best_walk(q);
        let mut cache = self.cache.lock().unwrap();
        let probes = cache.entry(key).or_default();
        probes.push((q.budget, fresh));
        running_max(probes, &q.budget)
    }
}

/// Deadline counterpart of [`MonotoneOrienteering`], monotone in the horizon.
pub struct MonotoneDeadline<'o> {
    inner: &'o dyn DeadlineOracle,
    cache: Mutex<HashMap<DeadlineKey, Probes>>,
}

type DeadlineKey = (usize, Vec<(usize, Rational, Rational)>, usize, Rational, Option<usize>);

impl<'o> MonotoneDeadline<'o> {
    pub fn new(inner: &'o dyn DeadlineOracle) -> Self {
        MonotoneDeadline { inner, cache: Mutex::new(HashMap::new()) }
    }
}

impl DeadlineOracle for MonotoneDeadline<'_> {
    fn spec(&self) -> OracleSpec {
        self.inner.spec()
    }

    fn best_walk(&self, q: &DeadlineQuery) -> WalkResult {
        let key = (q.metric as *const _ as usize, q.eligible.clone(), q.start, q.t0, q.end);
        if let Some(probes) = self.cache.lock().unwrap().get(&key) {
            if probes.iter().any(|(b, _)| *b == q.horizon) {
                return running_max(probes, &q.horizon);
            }
        }
        let fresh = self.inner.best_walk(q);
        let mut cache = self.cache.lock().unwrap();
        let probes = cache.entry(key).or_default();
        probes.push((q.horizon, fresh));
        running_max(probes, &q.horizon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{metric_closure, Graph};
    use crate::rational::int;

    /// Deliberately non-monotone: finds nothing at even budgets.
    struct Flaky;

    impl OrienteeringOracle for Flaky {
        fn spec(&self) -> OracleSpec {
            OracleSpec::heuristic("flaky")
        }

        fn best_walk(&self, q: &OrienteeringQuery) -> WalkResult {
            if q.budget.to_integer() % 2 == 0 {
                q.evaluate(&[q.u, q.v]).unwrap_or_else(WalkResult::infeasible)
            } else {
                super::super::ExactOrienteering.best_walk(q)
            }
        }
    }

    #[test]
    fn wrapper_restores_monotonicity() {
        let m = metric_closure(&Graph::path(4)).unwrap();
        let w = MonotoneOrienteering::new(&Flaky);
        let mut last = int(-1);
        for b in 3..9 {
            let q = OrienteeringQuery::new(&m, vec![(1, int(1)), (2, int(1)), (3, int(1))], 0, 1, int(b));
            let r = w.best_walk(&q);
            assert!(r.duration <= int(b));
            assert!(r.reward >= last);
            last = r.reward;
        }
        assert_eq!(last, int(3));
    }
}
