//! Dinic's algorithm on real capacities, enough for the small cut problems
//! in this crate.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
}

/// A directed flow network; arcs come in residual pairs `2i`, `2i + 1`.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    eps: f64,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); n],
            arcs: Vec::new(),
            eps: 0.0,
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0.0 });
    }

    /// Undirected edge: capacity `cap` in both directions.
    pub fn add_edge(&mut self, a: usize, b: usize, cap: f64) {
        self.adj[a].push(self.arcs.len());
        self.arcs.push(Arc { to: b, cap });
        self.adj[b].push(self.arcs.len());
        self.arcs.push(Arc { to: a, cap });
    }

    /// Pushes a maximum flow from `s` to `t` and returns its value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let largest = self
            .arcs
            .iter()
            .map(|a| a.cap)
            .filter(|c| c.is_finite())
            .fold(0.0, f64::max);
        self.eps = 1e-12 * largest.max(1.0);
        let mut total = 0.0;
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0; self.adj.len()];
            loop {
                let pushed = self.augment(s, t, f64::INFINITY, &level, &mut next);
                if pushed <= self.eps {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &i in &self.adj[u] {
                let a = &self.arcs[i];
                if a.cap > self.eps && level[a.to] == usize::MAX {
                    level[a.to] = level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        (level[t] != usize::MAX).then_some(level)
    }

    fn augment(
        &mut self,
        u: usize,
        t: usize,
        limit: f64,
        level: &[usize],
        next: &mut [usize],
    ) -> f64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let i = self.adj[u][next[u]];
            let (to, cap) = (self.arcs[i].to, self.arcs[i].cap);
            if cap > self.eps && level[to] == level[u] + 1 {
                let got = self.augment(to, t, limit.min(cap), level, next);
                if got > 0.0 {
                    self.arcs[i].cap -= got;
                    self.arcs[i ^ 1].cap += got;
                    return got;
                }
            }
            next[u] += 1;
        }
        0.0
    }

    /// Vertices reachable from `s` in the residual network: the source side
    /// of the minimum cut closest to `s`.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &i in &self.adj[u] {
                let a = &self.arcs[i];
                if a.cap > self.eps && !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        // CLRS figure 26.1: max flow 23.
        let mut net = FlowNetwork::new(6);
        for (a, b, c) in [
            (0, 1, 16.0),
            (0, 2, 13.0),
            (2, 1, 4.0),
            (1, 3, 12.0),
            (3, 2, 9.0),
            (2, 4, 14.0),
            (4, 3, 7.0),
            (3, 5, 20.0),
            (4, 5, 4.0),
        ] {
            net.add_arc(a, b, c);
        }
        assert_eq!(net.max_flow(0, 5), 23.0);
        let side = net.source_side(0);
        assert!(side[0] && !side[5]);
    }

    #[test]
    fn undirected_cycle_and_infinite_arcs() {
        let mut net = FlowNetwork::new(6);
        for i in 0..4 {
            net.add_edge(i, (i + 1) % 4, 1.5);
        }
        net.add_arc(4, 0, f64::INFINITY);
        net.add_arc(2, 5, f64::INFINITY);
        assert_eq!(net.max_flow(4, 5), 3.0);
        assert_eq!(
            net.source_side(4),
            vec![true, false, false, false, true, false]
        );
    }
}
