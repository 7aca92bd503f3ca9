//! Integral max-flow by shortest augmenting paths.

use std::collections::VecDeque;

pub(crate) const INF: u32 = u32::MAX / 4;

#[derive(Clone, Debug)]
pub(crate) struct FlowGraph {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowGraph {
    pub fn new(nodes: usize) -> Self {
        FlowGraph {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Adds `u -> v` with capacity `c` and returns the arc index. The reverse
    /// residual arc is `index ^ 1`.
    pub fn add_arc(&mut self, u: usize, v: usize, c: u32) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(c);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(id + 1);
        id
    }

    /// Saturates the graph from `s` to `t` and returns the flow value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> u32 {
        self.max_flow_limited(s, t, INF)
    }

    /// Flow currently carried by arc `a` (as returned by `add_arc`).
    pub fn flow_on(&self, a: usize) -> u32 {
        self.cap[a ^ 1]
    }

    /// Augments until the flow reaches `limit` or no path remains.
    pub fn max_flow_limited(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let n = self.adj.len();
        let mut total = 0;
        while total < limit {
            let mut via = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &a in &self.adj[u] {
                    let v = self.to[a];
                    if !seen[v] && self.cap[a] > 0 {
                        seen[v] = true;
                        via[v] = a;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = limit - total;
            let mut v = t;
            while v != s {
                let a = via[v];
                push = push.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.to[a ^ 1];
            }
            total += push;
        }
        total
    }

    /// Nodes reachable from `s` in the residual graph.
    pub fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if !seen[v] && self.cap[a] > 0 {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}
