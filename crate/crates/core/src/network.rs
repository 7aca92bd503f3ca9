//! Single-source multicast networks: acyclic multigraphs with unit-capacity
//! edges, their cut capacities, primary minimum cuts and primary edge subsets.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::flow::{FlowGraph, INF};
use crate::gf::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// Sorted set of edge indices. Indices follow edge declaration order, which
/// is also the order every report and iteration uses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgeSet(Vec<usize>);

impl EdgeSet {
    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        EdgeSet(edges)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutProfile {
    /// `(sink, C_t)` in sink declaration order.
    pub per_sink: Vec<(usize, usize)>,
    pub c_min: usize,
}

/// Incrementally declares a network; [`NetworkBuilder::build`] validates it.
#[derive(Clone, Debug)]
pub struct NetworkBuilder {
    field: Field,
    nodes: Vec<String>,
    node_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    source: Option<usize>,
    sinks: Vec<usize>,
}

impl NetworkBuilder {
    pub fn new(field: Field) -> Self {
        NetworkBuilder {
            field,
            nodes: Vec::new(),
            node_index: HashMap::new(),
            edges: Vec::new(),
            source: None,
            sinks: Vec::new(),
        }
    }

    pub fn node(&mut self, id: &str) -> usize {
        if let Some(&i) = self.node_index.get(id) {
            return i;
        }
        self.nodes.push(id.to_string());
        self.node_index.insert(id.to_string(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    pub fn source(&mut self, id: &str) -> Result<&mut Self> {
        let v = self.node(id);
        if self.source.is_some_and(|s| s != v) {
            return Err(Error::InvalidNetwork(
                "more than one source declared".into(),
            ));
        }
        self.source = Some(v);
        Ok(self)
    }

    pub fn sink(&mut self, id: &str) -> &mut Self {
        let v = self.node(id);
        if !self.sinks.contains(&v) {
            self.sinks.push(v);
        }
        self
    }

    pub fn edge(&mut self, id: &str, tail: &str, head: &str) -> Result<&mut Self> {
        if self.edges.iter().any(|e| e.id == id) {
            return Err(Error::InvalidNetwork(format!("duplicate edge id `{id}`")));
        }
        let tail = self.node(tail);
        let head = self.node(head);
        if tail == head {
            return Err(Error::Cycle(id.to_string()));
        }
        self.edges.push(Edge {
            id: id.to_string(),
            tail,
            head,
        });
        Ok(self)
    }

    pub fn build(self) -> Result<Network> {
        let source = self
            .source
            .ok_or_else(|| Error::InvalidNetwork("no source declared".into()))?;
        if self.sinks.is_empty() {
            return Err(Error::InvalidNetwork("no sink declared".into()));
        }
        if self.sinks.contains(&source) {
            return Err(Error::InvalidNetwork("the source cannot be a sink".into()));
        }
        let n = self.nodes.len();
        let mut in_edges = vec![Vec::new(); n];
        let mut out_edges = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            out_edges[e.tail].push(i);
            in_edges[e.head].push(i);
        }
        if let Some(&e) = in_edges[source].first() {
            return Err(Error::InvalidNetwork(format!(
                "source has incoming edge `{}`",
                self.edges[e].id
            )));
        }
        for &t in &self.sinks {
            if let Some(&e) = out_edges[t].first() {
                return Err(Error::InvalidNetwork(format!(
                    "sink `{}` has outgoing edge `{}`",
                    self.nodes[t], self.edges[e].id
                )));
            }
        }

        // Kahn's algorithm, ready nodes taken in declaration order.
        let mut indeg: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut node_order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            node_order.push(v);
            for &e in &out_edges[v] {
                let h = self.edges[e].head;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    ready.push(Reverse(h));
                }
            }
        }
        if node_order.len() < n {
            let e = edge_on_cycle(&self.edges, &out_edges, &indeg);
            return Err(Error::Cycle(self.edges[e].id.clone()));
        }
        let mut position = vec![0; n];
        for (p, &v) in node_order.iter().enumerate() {
            position[v] = p;
        }
        let mut edge_order: Vec<usize> = (0..self.edges.len()).collect();
        edge_order.sort_by_key(|&e| (position[self.edges[e].tail], e));

        let edge_index = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        let mut net = Network {
            field: self.field,
            nodes: self.nodes,
            node_index: self.node_index,
            edges: self.edges,
            edge_index,
            source,
            sinks: self.sinks,
            in_edges,
            out_edges,
            node_order,
            edge_order,
            profile: CutProfile {
                per_sink: Vec::new(),
                c_min: 0,
            },
            primary_cache: Vec::new(),
        };
        let per_sink: Vec<(usize, usize)> = net
            .sinks
            .iter()
            .map(|&t| (t, net.max_flow_to_node(t)))
            .collect();
        let c_min = per_sink.iter().map(|&(_, c)| c).min().unwrap_or(0);
        net.profile = CutProfile { per_sink, c_min };
        net.primary_cache = (0..=c_min).map(|_| OnceLock::new()).collect();
        Ok(net)
    }
}

/// The earliest-declared edge of some cycle among the nodes Kahn's
/// algorithm left behind (those with `indeg > 0`).
fn edge_on_cycle(edges: &[Edge], out_edges: &[Vec<usize>], indeg: &[usize]) -> usize {
    let n = indeg.len();
    let mut alive: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
    // Strip leftovers that only lead out of the leftover set.
    let mut outdeg: Vec<usize> = (0..n)
        .map(|v| {
            out_edges[v]
                .iter()
                .filter(|&&e| alive[edges[e].head])
                .count()
        })
        .collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && outdeg[v] == 0).collect();
    while let Some(v) = stack.pop() {
        alive[v] = false;
        for edge in edges {
            if edge.head == v && alive[edge.tail] {
                outdeg[edge.tail] -= 1;
                if outdeg[edge.tail] == 0 {
                    stack.push(edge.tail);
                }
            }
        }
    }
    // Every survivor has a surviving successor, so walking must repeat.
    let mut v = (0..n).find(|&v| alive[v]).expect("a cycle survives");
    let mut seen_at = vec![usize::MAX; n];
    let mut path: Vec<usize> = Vec::new();
    while seen_at[v] == usize::MAX {
        seen_at[v] = path.len();
        let e = *out_edges[v]
            .iter()
            .find(|&&e| alive[edges[e].head])
            .expect("survivor has a successor");
        path.push(e);
        v = edges[e].head;
    }
    *path[seen_at[v]..].iter().min().expect("nonempty cycle")
}

/// A validated network. Immutable; all queries are pure.
#[derive(Clone, Debug)]
pub struct Network {
    field: Field,
    nodes: Vec<String>,
    node_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    source: usize,
    sinks: Vec<usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    node_order: Vec<usize>,
    edge_order: Vec<usize>,
    profile: CutProfile,
    primary_cache: Vec<OnceLock<Vec<EdgeSet>>>,
}

impl Network {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_name(&self, v: usize) -> &str {
        &self.nodes[v]
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.node_index.get(name).copied()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_id(&self, name: &str) -> Result<usize> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.sinks.contains(&v)
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    /// Nodes in topological order.
    pub fn node_order(&self) -> &[usize] {
        &self.node_order
    }

    /// Edges in ancestral order: by topological position of the tail, then
    /// by declaration.
    pub fn edge_order(&self) -> &[usize] {
        &self.edge_order
    }

    /// Nodes that are neither the source nor a sink, in topological order.
    pub fn intermediate_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.node_order
            .iter()
            .copied()
            .filter(move |&v| v != self.source && !self.is_sink(v))
    }

    /// Nodes carrying a local kernel (everything except sinks), in
    /// topological order.
    pub fn coding_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.node_order
            .iter()
            .copied()
            .filter(move |&v| !self.is_sink(v))
    }

    pub fn cut_profile(&self) -> &CutProfile {
        &self.profile
    }

    pub fn c_min(&self) -> usize {
        self.profile.c_min
    }

    /// Parses a comma-separated list of edge ids.
    pub fn parse_edge_set(&self, list: &str) -> Result<EdgeSet> {
        let ids = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.edge_id(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(EdgeSet::new(ids))
    }

    pub fn edge_set_from_ids(&self, ids: &[&str]) -> Result<EdgeSet> {
        Ok(EdgeSet::new(
            ids.iter().map(|s| self.edge_id(s)).collect::<Result<_>>()?,
        ))
    }

    pub fn format_edge_set(&self, a: &EdgeSet) -> String {
        a.indices()
            .iter()
            .map(|&e| self.edges[e].id.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    fn max_flow_to_node(&self, t: usize) -> usize {
        let mut g = FlowGraph::new(self.nodes.len());
        for e in &self.edges {
            g.add_arc(e.tail, e.head, 1);
        }
        g.max_flow(self.source, t) as usize
    }

    /// Builds the flow graph with every edge of `a` subdivided and its
    /// midpoint drained into a super-sink. Returns the graph, the super-sink
    /// and, per original edge, the arc leaving its tail.
    fn edge_target_graph(&self, a: &EdgeSet) -> (FlowGraph, usize, Vec<usize>) {
        let n = self.nodes.len();
        let super_sink = n + a.len();
        let mut g = FlowGraph::new(n + a.len() + 1);
        let mut first_arc = Vec::with_capacity(self.edges.len());
        let mut k = 0;
        for (i, e) in self.edges.iter().enumerate() {
            if a.contains(i) {
                let mid = n + k;
                k += 1;
                first_arc.push(g.add_arc(e.tail, mid, 1));
                g.add_arc(mid, e.head, 1);
                g.add_arc(mid, super_sink, INF);
            } else {
                first_arc.push(g.add_arc(e.tail, e.head, 1));
            }
        }
        (g, super_sink, first_arc)
    }

    fn check_edge_set(&self, a: &EdgeSet) -> Result<()> {
        if a.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        if let Some(&e) = a.indices().iter().find(|&&e| e >= self.edges.len()) {
            return Err(Error::UnknownEdge(format!("#{e}")));
        }
        Ok(())
    }

    /// `k` edge-disjoint source-to-`t` paths as edge lists, or fewer if the
    /// cut capacity is smaller.
    pub fn edge_disjoint_paths(&self, t: usize, k: usize) -> Vec<Vec<usize>> {
        let mut g = FlowGraph::new(self.nodes.len());
        let arcs: Vec<usize> = self
            .edges
            .iter()
            .map(|e| g.add_arc(e.tail, e.head, 1))
            .collect();
        let value = g.max_flow_limited(self.source, t, k as u32) as usize;
        let mut used: Vec<bool> = arcs.iter().map(|&a| g.flow_on(a) == 0).collect();
        let mut paths = Vec::with_capacity(value);
        for _ in 0..value {
            let mut path = Vec::new();
            let mut v = self.source;
            while v != t {
                let e = *self.out_edges[v]
                    .iter()
                    .find(|&&e| !used[e])
                    .expect("flow is conserved along the path");
                used[e] = true;
                path.push(e);
                v = self.edges[e].head;
            }
            paths.push(path);
        }
        paths
    }

    /// Capacity of a minimum cut between the source and the edge set `a`.
    pub fn mincut_to_edges(&self, a: &EdgeSet) -> Result<usize> {
        self.check_edge_set(a)?;
        let (mut g, t, _) = self.edge_target_graph(a);
        Ok(g.max_flow(self.source, t) as usize)
    }

    /// The minimum cut between the source and `a` lying closest to the
    /// source: edges leaving the residual-reachable side after a max flow.
    pub fn primary_min_cut(&self, a: &EdgeSet) -> Result<EdgeSet> {
        self.check_edge_set(a)?;
        let (mut g, t, _) = self.edge_target_graph(a);
        g.max_flow(self.source, t);
        let reach = g.residual_reachable(self.source);
        // A subdivided edge's midpoint is never source-side (it drains into
        // the super-sink without limit), so testing the original endpoints
        // plus membership in `a` recovers the crossing edges.
        let cut = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| reach[e.tail] && (a.contains(*i) || !reach[e.head]))
            .map(|(i, _)| i)
            .collect();
        Ok(EdgeSet::new(cut))
    }

    pub fn is_primary(&self, a: &EdgeSet) -> Result<bool> {
        Ok(&self.primary_min_cut(a)? == a)
    }

    pub fn is_regular(&self, a: &EdgeSet) -> Result<bool> {
        Ok(self.mincut_to_edges(a)? == a.len())
    }

    /// All primary edge subsets of size `r`, sorted. Empty for `r = 0`.
    pub fn enumerate_primary_sets(&self, r: usize) -> Result<Vec<EdgeSet>> {
        if r > self.profile.c_min {
            return Err(Error::LevelOutOfRange {
                level: r,
                max: self.profile.c_min,
            });
        }
        if r == 0 {
            return Ok(Vec::new());
        }
        let sets = self.primary_cache[r].get_or_init(|| {
            let mut out = Vec::new();
            for_each_subset(self.edges.len(), r, |idx| {
                let a = EdgeSet(idx.to_vec());
                if self.is_primary(&a).expect("nonempty in-range set") {
                    out.push(a);
                }
            });
            out
        });
        Ok(sets.clone())
    }

    /// Whether removing `cut` leaves the source unable to reach any edge of
    /// `target` (edges of `target` inside `cut` count as blocked).
    pub fn separates(&self, cut: &EdgeSet, target: &EdgeSet) -> bool {
        let reach = self.reachable_without(cut);
        target
            .indices()
            .iter()
            .all(|&e| cut.contains(e) || !reach[self.edges[e].tail])
    }

    /// Nodes reachable from the source once `removed` is deleted.
    pub fn reachable_without(&self, removed: &EdgeSet) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        seen[self.source] = true;
        for &v in &self.node_order {
            if !seen[v] {
                continue;
            }
            for &e in &self.out_edges[v] {
                if !removed.contains(e) {
                    seen[self.edges[e].head] = true;
                }
            }
        }
        seen
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "network over {} with {} nodes, {} edges, C_min {}",
            self.field,
            self.nodes.len(),
            self.edges.len(),
            self.profile.c_min
        )
    }
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
