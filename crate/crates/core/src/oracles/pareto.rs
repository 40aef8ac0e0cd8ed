use std::collections::HashMap;

use num_traits::Signed;

use crate::metric::Metric;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoEntry {
    pub duration: Rational,
    pub reward: Rational,
    /// Visit order from `u` to `v` achieving the entry.
    pub order: Vec<usize>,
}

/// Nondominated `(duration, reward)` pairs, strictly increasing in both.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParetoProfile {
    pub entries: Vec<ParetoEntry>,
}

impl ParetoProfile {
    /// Best entry with duration at most `budget`.
    pub fn best_within(&self, budget: &Rational) -> Option<&ParetoEntry> {
        self.entries.iter().rev().find(|e| &e.duration <= budget)
    }
}

/// Every nondominated trade-off between travel time and collected reward for
/// walks from `u` to `v` of length at most `horizon`. `u` and `v` are
/// credited whenever eligible.
pub fn pareto_profiles(metric: &Metric, eligible: &[(usize, Rational)], u: usize, v: usize, horizon: &Rational) -> ParetoProfile {
    let Some(direct) = metric.get(u, v) else { return ParetoProfile::default() };
    if direct > horizon {
        return ParetoProfile::default();
    }
    let reward_of = |w: usize| eligible.iter().find(|e| e.0 == w).map(|e| e.1).unwrap_or_default();
    let cands: Vec<(usize, Rational)> =
        eligible.iter().filter(|e| e.0 != u && e.0 != v && e.1.is_positive()).cloned().collect();
    let k = cands.len();
    assert!(k <= 24, "too many eligible vertices for an exact profile");
    let base = if u == v { reward_of(u) } else { reward_of(u) + reward_of(v) };

    // shortest u -> ... -> last walk through exactly the set `mask`
    let mut best: HashMap<(u32, usize), (Rational, Vec<usize>)> = HashMap::new();
    let mut layer: Vec<(u32, usize)> = Vec::new();
    for (i, &(w, _)) in cands.iter().enumerate() {
        if let Some(d) = metric.get(u, w) {
            if d <= horizon {
                best.insert((1 << i, i), (*d, vec![u, w]));
                layer.push((1 << i, i));
            }
        }
    }
    let mut all: Vec<(u32, usize)> = layer.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        layer.sort_unstable();
        for &(mask, last) in &layer {
            let (len, path) = best[&(mask, last)].clone();
            for (j, &(w, _)) in cands.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let Some(d) = metric.get(cands[last].0, w) else { continue };
                let l = len + d;
                if &l > horizon {
                    continue;
                }
                let key = (mask | (1 << j), j);
                let mut p = path.clone();
                p.push(w);
                match best.get(&key) {
                    Some((old, op)) if (old, op) <= (&l, &p) => {}
                    prev => {
                        if prev.is_none() {
                            next.push(key);
                        }
                        best.insert(key, (l, p));
                    }
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        all.extend(next.iter().copied());
        layer = next;
    }

    let mut points: Vec<ParetoEntry> = Vec::new();
    let mut closing = vec![u];
    if u != v {
        closing.push(v);
    }
    points.push(ParetoEntry { duration: *direct, reward: base, order: closing });
    for key in all {
        let (len, path) = &best[&key];
        let Some(d) = metric.get(cands[key.1].0, v) else { continue };
        let total = len + d;
        if &total > horizon {
            continue;
        }
        let reward = base + (0..k).filter(|i| key.0 & (1 << i) != 0).map(|i| cands[i].1).sum::<Rational>();
        let mut order = path.clone();
        order.push(v);
        points.push(ParetoEntry { duration: total, reward, order });
    }
    points.sort_by(|a, b| {
        a.duration.cmp(&b.duration).then_with(|| b.reward.cmp(&a.reward)).then_with(|| a.order.cmp(&b.order))
    });
    let mut entries: Vec<ParetoEntry> = Vec::new();
    for p in points {
        if entries.last().is_none_or(|e| p.reward > e.reward) {
            entries.push(p);
        }
    }
    ParetoProfile { entries }
}
