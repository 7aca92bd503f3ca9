//! Fixtures and independent oracles shared by the integration tests. The
//! oracles only use the public graph and kernel accessors, never the
//! library's flow or subspace code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use slnc::format::{parse_code, parse_network, write_network};
use slnc::{EdgeSet, LinearNetworkCode, Network, SecureCodeSpec};

pub const RELAY4: &str = include_str!("../../data/relay4.net");
pub const RELAY4_C3: &str = include_str!("../../data/relay4_c3.slnc");
pub const RELAY4_W1_R1: &str = include_str!("../../data/relay4_w1_r1.slnc");
pub const RELAY4_W1_R1_IDENTITY: &str = include_str!("../../data/relay4_w1_r1_identity.slnc");

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn relay4() -> Network {
    parse_network(RELAY4).unwrap()
}

pub fn relay4_over(q: u64) -> Network {
    parse_network(&write_network(&relay4()).replace("field 5", &format!("field {q}"))).unwrap()
}

pub fn relay4_c3(net: &Network) -> LinearNetworkCode {
    parse_code(net, RELAY4_C3).unwrap().code
}

pub fn example_spec(net: &Network) -> SecureCodeSpec {
    parse_code(net, RELAY4_W1_R1).unwrap().spec(net).unwrap()
}

pub fn ids(net: &Network, sets: &[EdgeSet]) -> Vec<String> {
    sets.iter().map(|a| net.format_edge_set(a)).collect()
}

/// Edges whose tail the source still reaches once `removed` is deleted.
fn live_edges(net: &Network, removed: &[usize]) -> Vec<bool> {
    let mut reach = vec![false; net.node_count()];
    reach[net.source()] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for (i, e) in net.edges().iter().enumerate() {
            if reach[e.tail] && !reach[e.head] && !removed.contains(&i) {
                reach[e.head] = true;
                changed = true;
            }
        }
    }
    net.edges().iter().map(|e| reach[e.tail]).collect()
}

/// Whether deleting `cut` stops every edge of `target` from carrying
/// source information (an edge in the cut itself counts as stopped).
pub fn cuts_off(net: &Network, cut: &[usize], target: &[usize]) -> bool {
    let live = live_edges(net, cut);
    target.iter().all(|&e| cut.contains(&e) || !live[e])
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every nonempty edge subset of size at most `r`.
pub fn small_subsets(net: &Network, r: usize) -> Vec<Vec<usize>> {
    (1..=r.min(net.edge_count()))
        .flat_map(|k| subsets(net.edge_count(), k))
        .collect()
}

/// The minimum cut between the source and `a` that cuts off every other
/// minimum cut, found by enumerating edge subsets by size.
pub fn brute_primary_cut(net: &Network, a: &[usize]) -> Vec<usize> {
    for k in 0..=a.len() {
        let mins: Vec<Vec<usize>> = subsets(net.edge_count(), k)
            .into_iter()
            .filter(|c| cuts_off(net, c, a))
            .collect();
        if mins.is_empty() {
            continue;
        }
        let primary: Vec<&Vec<usize>> = mins
            .iter()
            .filter(|c| mins.iter().all(|other| cuts_off(net, c, other)))
            .collect();
        assert_eq!(primary.len(), 1, "no unique source-most min cut for {a:?}");
        return primary[0].clone();
    }
    unreachable!("`a` itself is a cut")
}

/// Leakage test by enumeration over all source inputs `x = (m k)`: the
/// observed symbols on `a` must have the same count for every message.
/// Returns `true` when `a` learns nothing.
pub fn leaks_nothing(net: &Network, code: &LinearNetworkCode, rate: usize, a: &[usize]) -> bool {
    let q = net.field().order() as u64;
    let n = code.dimension();
    let kernels: Vec<Vec<u64>> = a
        .iter()
        .map(|&e| {
            code.global_kernel(e)
                .entries()
                .iter()
                .map(|&v| v as u64)
                .collect()
        })
        .collect();
    let total = q.pow(n as u32);
    let messages = q.pow(rate as u32) as usize;
    let mut counts: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
    let mut x = vec![0u64; n];
    for idx in 0..total {
        let mut rest = idx;
        for j in (0..n).rev() {
            x[j] = rest % q;
            rest /= q;
        }
        let y: Vec<u64> = kernels
            .iter()
            .map(|f| x.iter().zip(f).map(|(a, b)| a * b).sum::<u64>() % q)
            .collect();
        let m = x[..rate].iter().fold(0u64, |acc, &d| acc * q + d) as usize;
        counts.entry(y).or_insert_with(|| vec![0; messages])[m] += 1;
    }
    counts.values().all(|c| c.iter().all(|&v| v == c[0]))
}
