//! Input graphs and their shortest-path metric closure.
//!
//! Every solver works on a [`Metric`]: walking a sequence of vertices on the
//! closure is the same as walking shortest paths in the graph, so intermediate
//! vertices never need to be listed explicitly.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Rational,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: Rational) -> Self {
        Edge { u, v, w }
    }
}

/// Edge-weighted input graph. Parallel edges and self-loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub directed: bool,
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl Graph {
    pub fn new(directed: bool, n: usize) -> Self {
        Graph { directed, n, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: Rational) -> &mut Self {
        self.edges.push(Edge::new(u, v, w));
        self
    }

    /// Undirected path `0 - 1 - ... - (n-1)` with unit edges.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(false, n);
        for i in 1..n {
            g.add_edge(i - 1, i, Rational::from_integer(1));
        }
        g
    }
}

/// Distance with a distinguished infinity for unreachable pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Dist {
    Finite(Rational),
    Infinite,
}

impl Dist {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Dist::Finite(q) => Some(q),
            Dist::Infinite => None,
        }
    }

    fn plus(&self, other: &Dist) -> Dist {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Infinite,
        }
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => a.cmp(b),
            (Dist::Finite(_), Dist::Infinite) => Ordering::Less,
            (Dist::Infinite, Dist::Finite(_)) => Ordering::Greater,
            (Dist::Infinite, Dist::Infinite) => Ordering::Equal,
        }
    }
}

/// Closed all-pairs distance table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Metric {
    directed: bool,
    n: usize,
    d: Vec<Dist>,
}

impl Metric {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn dist(&self, u: usize, v: usize) -> &Dist {
        &self.d[u * self.n + v]
    }

    /// Finite distance, or `None` when `v` is unreachable from `u`.
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Option<&Rational> {
        self.d[u * self.n + v].finite()
    }

    /// Builds a metric from an explicit table and closes it. The table must be
    /// square with nonnegative finite entries.
    pub fn from_table(directed: bool, table: Vec<Vec<Option<Rational>>>) -> Result<Metric> {
        let n = table.len();
        let mut g = Graph::new(directed, n);
        for (u, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Structural(format!("row {u} has {} entries, expected {n}", row.len())));
            }
            for (v, w) in row.iter().enumerate() {
                if let Some(w) = w {
                    if u != v {
                        g.add_edge(u, v, *w);
                    }
                }
            }
        }
        metric_closure(&g)
    }

    /// The complete graph carrying every finite off-diagonal entry.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(self.directed, self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                if u == v || (!self.directed && v < u) {
                    continue;
                }
                if let Some(w) = self.get(u, v) {
                    g.add_edge(u, v, *w);
                }
            }
        }
        g
    }

    /// Metric with every distance multiplied by `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Metric {
        let d = self
            .d
            .iter()
            .map(|x| match x {
                Dist::Finite(q) => Dist::Finite(q * c),
                Dist::Infinite => Dist::Infinite,
            })
            .collect();
        Metric { directed: self.directed, n: self.n, d }
    }

    /// Metric of the reversed graph: `d'(u, v) = d(v, u)`.
    pub fn transposed(&self) -> Metric {
        let n = self.n;
        let mut d = self.d.clone();
        for u in 0..n {
            for v in 0..n {
                d[u * n + v] = self.d[v * n + u].clone();
            }
        }
        Metric { directed: self.directed, n, d }
    }

    /// Adds a vertex `n` joined to `anchor` by an edge of length `w`
    /// (`n -> anchor` only, when directed) and re-closes.
    pub fn with_pendant(&self, anchor: usize, w: Rational) -> Metric {
        let n = self.n;
        let m = n + 1;
        let mut d = vec![Dist::Infinite; m * m];
        for u in 0..n {
            for v in 0..n {
                d[u * m + v] = self.dist(u, v).clone();
            }
        }
        d[n * m + n] = Dist::Finite(Rational::zero());
        let leg = Dist::Finite(w);
        for v in 0..n {
            d[n * m + v] = leg.plus(self.dist(anchor, v));
            if !self.directed {
                d[v * m + n] = self.dist(v, anchor).plus(&leg);
            }
        }
        Metric { directed: self.directed, n: m, d }
    }

    /// Exact triangle-inequality check over all finite triples.
    pub fn satisfies_triangle_inequality(&self) -> bool {
        let n = self.n;
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if self.dist(u, w) > &self.dist(u, v).plus(self.dist(v, w)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| (0..self.n).all(|v| self.dist(u, v) == self.dist(v, u)))
    }
}

/// All-pairs shortest walk lengths (Floyd-Warshall over exact rationals).
pub fn metric_closure(g: &Graph) -> Result<Metric> {
    let n = g.n;
    let mut d = vec![Dist::Infinite; n * n];
    for u in 0..n {
        d[u * n + u] = Dist::Finite(Rational::zero());
    }
    for (i, e) in g.edges.iter().enumerate() {
        if e.u >= n || e.v >= n {
            return Err(Error::Structural(format!("edge {i} ({}, {}) refers to a vertex outside 0..{n}", e.u, e.v)));
        }
        if e.w.is_negative() {
            return Err(Error::Structural(format!("edge {i} ({}, {}) has negative weight", e.u, e.v)));
        }
        let w = Dist::Finite(e.w);
        if w < d[e.u * n + e.v] {
            d[e.u * n + e.v] = w.clone();
        }
        if !g.directed && w < d[e.v * n + e.u] {
            d[e.v * n + e.u] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k].clone();
            if dik == Dist::Infinite {
                continue;
            }
            for j in 0..n {
                let via = dik.plus(&d[k * n + j]);
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    Ok(Metric { directed: g.directed, n, d })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphDiagnostic {
    NegativeWeight { edge: usize },
    VertexOutOfRange { edge: usize, vertex: usize },
    Unreachable { vertex: usize },
}

/// Lists negative weights, out-of-range endpoints, and vertices not reachable
/// from `source`. A valid graph yields an empty list.
pub fn validate_graph(g: &Graph, source: usize) -> Vec<GraphDiagnostic> {
    let mut out = Vec::new();
    let n = g.n;
    let mut adj = vec![Vec::new(); n];
    for (i, e) in g.edges.iter().enumerate() {
        let mut ok = true;
        for x in [e.u, e.v] {
            if x >= n {
                out.push(GraphDiagnostic::VertexOutOfRange { edge: i, vertex: x });
                ok = false;
            }
        }
        if e.w.is_negative() {
            out.push(GraphDiagnostic::NegativeWeight { edge: i });
        }
        if ok {
            adj[e.u].push(e.v);
            if !g.directed {
                adj[e.v].push(e.u);
            }
        }
    }
    if source < n {
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        out.extend(seen.iter().enumerate().filter(|(_, s)| !**s).map(|(v, _)| GraphDiagnostic::Unreachable { vertex: v }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn path_closure() {
        let m = metric_closure(&Graph::path(3)).unwrap();
        assert_eq!(m.get(0, 2), Some(&int(2)));
        assert!(m.is_symmetric());
    }

    #[test]
    fn single_vertex() {
        let m = metric_closure(&Graph::new(false, 1)).unwrap();
        assert_eq!(m.get(0, 0), Some(&int(0)));
    }

    #[test]
    fn directed_cycle() {
        let mut g = Graph::new(true, 3);
        g.add_edge(0, 1, int(1)).add_edge(1, 2, int(2)).add_edge(2, 0, int(3));
        let m = metric_closure(&g).unwrap();
        assert_eq!(m.get(1, 0), Some(&int(5)));
        assert_eq!(m.get(0, 1), Some(&int(1)));
        assert_eq!(m.get(0, 2), Some(&int(3)));
        assert!(!m.is_symmetric());
    }

    #[test]
    fn unreachable_is_infinite() {
        let m = metric_closure(&Graph::new(false, 2)).unwrap();
        assert_eq!(m.dist(0, 1), &Dist::Infinite);
        assert_eq!(m.get(0, 1), None);
    }

    #[test]
    fn parallel_edges_and_loops_collapse() {
        let mut g = Graph::new(false, 2);
        g.add_edge(0, 1, int(4)).add_edge(1, 0, int(2)).add_edge(0, 0, int(7));
        let m = metric_closure(&g).unwrap();
        assert_eq!(m.get(0, 1), Some(&int(2)));
        assert_eq!(m.get(0, 0), Some(&int(0)));
    }

    #[test]
    fn closure_rejects_bad_ids() {
        let mut g = Graph::new(false, 2);
        g.add_edge(0, 5, int(1));
        assert!(matches!(metric_closure(&g), Err(Error::Structural(_))));
    }

    #[test]
    fn diagnostics() {
        assert!(validate_graph(&Graph::path(3), 0).is_empty());

        let mut g = Graph::new(false, 2);
        g.add_edge(0, 1, int(-1));
        assert_eq!(validate_graph(&g, 0), vec![GraphDiagnostic::NegativeWeight { edge: 0 }]);

        let g = Graph::new(false, 2);
        assert_eq!(validate_graph(&g, 0), vec![GraphDiagnostic::Unreachable { vertex: 1 }]);
    }

    #[test]
    fn pendant_vertex() {
        let m = metric_closure(&Graph::path(2)).unwrap().with_pendant(0, int(3));
        assert_eq!(m.n(), 3);
        assert_eq!(m.get(2, 1), Some(&int(4)));
        assert_eq!(m.get(1, 2), Some(&int(4)));
        assert!(m.satisfies_triangle_inequality());
    }
}
