//! Random small networks, codes and secure-code instances for property
//! tests and the `selftest` command. Everything is driven by a caller-owned
//! RNG so runs are reproducible from a seed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::code::{LinearNetworkCode, SecureCodeSpec};
use crate::construct::{build_fixed_pair_with, generate_multicast_code, FieldGuard};
use crate::error::Result;
use crate::gf::Field;
use crate::linalg::Matrix;
use crate::network::{Network, NetworkBuilder};

/// Shape limits for [`random_network`].
#[derive(Clone, Copy, Debug)]
pub struct NetShape {
    pub max_edges: usize,
    pub max_relays: usize,
    pub max_sinks: usize,
}

impl Default for NetShape {
    fn default() -> Self {
        NetShape {
            max_edges: 12,
            max_relays: 4,
            max_sinks: 3,
        }
    }
}

/// A random acyclic single-source network with every sink reachable.
/// Parallel edges are allowed.
pub fn random_network<R: Rng>(rng: &mut R, field: Field, shape: NetShape) -> Network {
    loop {
        let relays = rng.gen_range(0..=shape.max_relays);
        let sinks = rng.gen_range(1..=shape.max_sinks);
        // Node order s, v1.., t1..; edges only go forward in it.
        let mut names = vec!["s".to_string()];
        names.extend((1..=relays).map(|i| format!("v{i}")));
        names.extend((1..=sinks).map(|i| format!("t{i}")));
        let first_sink = 1 + relays;
        let lo = (sinks + relays).min(shape.max_edges);
        let m = rng.gen_range(lo..=shape.max_edges);
        let mut b = NetworkBuilder::new(field);
        b.source("s").expect("first source");
        for t in &names[first_sink..] {
            b.sink(t);
        }
        for i in 0..m {
            let tail = rng.gen_range(0..first_sink);
            let head = rng.gen_range(tail + 1..names.len());
            b.edge(&format!("e{}", i + 1), &names[tail], &names[head])
                .expect("fresh edge id, forward edge");
        }
        let net = b.build().expect("forward edges form a DAG");
        if net.c_min() > 0 {
            return net;
        }
    }
}

/// A random invertible `n x n` matrix.
pub fn random_invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    loop {
        let data: Vec<u64> = (0..n * n)
            .map(|_| rng.gen_range(0..field.order() as u64))
            .collect();
        let m = Matrix::from_rows_shaped(field, n, n, &data).expect("shape");
        if m.rank() == n {
            return m;
        }
    }
}

/// A decodable `n`-dimensional code with random local kernels, or `None`
/// when `attempts` draws all failed.
pub fn random_code<R: Rng>(
    rng: &mut R,
    net: &Network,
    n: usize,
    attempts: usize,
) -> Option<LinearNetworkCode> {
    let f = net.field();
    for _ in 0..attempts {
        let kernels: Vec<(usize, Matrix)> = net
            .coding_nodes()
            .map(|v| {
                let rows = if v == net.source() {
                    n
                } else {
                    net.in_edges(v).len()
                };
                let cols = net.out_edges(v).len();
                let data: Vec<u64> = (0..rows * cols)
                    .map(|_| rng.gen_range(0..f.order() as u64))
                    .collect();
                (
                    v,
                    Matrix::from_rows_shaped(f, rows, cols, &data).expect("shape"),
                )
            })
            .collect();
        let code = LinearNetworkCode::new(net, n, kernels).expect("shapes follow degrees");
        if code.is_decodable(net) {
            return Some(code);
        }
    }
    None
}

/// A decodable code, random if possible, otherwise the greedy one.
pub fn some_code<R: Rng>(rng: &mut R, net: &Network, n: usize) -> Option<LinearNetworkCode> {
    random_code(rng, net, n, 40).or_else(|| generate_multicast_code(net, n).ok())
}

/// Parameters for [`random_instance`].
#[derive(Clone, Debug)]
pub struct InstanceShape {
    pub fields: Vec<u64>,
    pub net: NetShape,
    /// Upper bound on `q^n`, the number of source inputs.
    pub max_inputs: u64,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            fields: vec![2, 3, 5, 7],
            net: NetShape::default(),
            max_inputs: 3125,
        }
    }
}

/// A random network with a secure-code candidate on it. About half the
/// candidates come from the fixed-pair construction (so they usually pass);
/// the rest use a random `Q`. Most have both rate and level positive.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    shape: &InstanceShape,
) -> Result<(Network, SecureCodeSpec)> {
    loop {
        let q = *shape.fields.choose(rng).expect("at least one field");
        let field = Field::new(q)?;
        let net = random_network(rng, field, shape.net);
        let max_n = (0..=net.c_min())
            .take_while(|&n| {
                q.checked_pow(n as u32)
                    .is_some_and(|s| s <= shape.max_inputs)
            })
            .last()
            .unwrap_or(0);
        // Mostly draw splits with both a message and a key; the degenerate
        // ones are secure or insecure for trivial reasons.
        if max_n < 2 && rng.gen_bool(0.8) {
            continue;
        }
        let (n, rate) = if max_n >= 2 && rng.gen_bool(0.8) {
            let n = rng.gen_range(2..=max_n);
            (n, rng.gen_range(1..n))
        } else {
            let n = rng.gen_range(0..=max_n);
            (n, rng.gen_range(0..=n))
        };
        let Some(base) = some_code(rng, &net, n) else {
            continue;
        };
        let level = n - rate;
        if rng.gen_bool(0.5) {
            if let Ok(spec) = build_fixed_pair_with(&net, &base, rate, level, FieldGuard::Skip) {
                return Ok((net, spec));
            }
        }
        let qm = random_invertible(rng, field, n);
        let spec = SecureCodeSpec::new(&net, base, qm, rate, level)?;
        return Ok((net, spec));
    }
}
