//! Linear network codes: local kernels, global kernels, transmission,
//! decoding, transformation by a source-side matrix, and secure code specs.

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{Matrix, Vector};
use crate::network::Network;

/// A linear network code of dimension `n` on a fixed network.
///
/// Local kernels are the stored representation; global kernels are derived
/// once at construction. The source kernel has one row per imaginary input
/// `d_1..d_n`; every other non-sink node `v` has an `|In(v)| x |Out(v)|`
/// kernel with rows and columns in edge declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearNetworkCode {
    field: Field,
    dim: usize,
    /// Indexed by node; `None` at sinks.
    kernels: Vec<Option<Matrix>>,
    /// Indexed by edge.
    global: Vec<Vector>,
}

impl LinearNetworkCode {
    /// Builds a code from `(node, kernel)` pairs. Nodes whose kernel would be
    /// empty may be omitted.
    pub fn new<I>(net: &Network, dim: usize, kernels: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Matrix)>,
    {
        let field = net.field();
        let mut slots: Vec<Option<Matrix>> = vec![None; net.node_count()];
        for (v, k) in kernels {
            if v >= net.node_count() {
                return Err(Error::ShapeMismatch(format!("no node with index {v}")));
            }
            if net.is_sink(v) {
                return Err(Error::ShapeMismatch(format!(
                    "sink `{}` carries no kernel",
                    net.node_name(v)
                )));
            }
            if slots[v].is_some() {
                return Err(Error::ShapeMismatch(format!(
                    "kernel for `{}` given twice",
                    net.node_name(v)
                )));
            }
            if k.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.order(),
                    right: k.field().order(),
                });
            }
            slots[v] = Some(k);
        }
        for v in net.coding_nodes() {
            let shape = expected_shape(net, dim, v);
            match &slots[v] {
                Some(k) if (k.rows(), k.cols()) != shape => {
                    return Err(Error::ShapeMismatch(format!(
                        "kernel at `{}` is {}x{}, expected {}x{}",
                        net.node_name(v),
                        k.rows(),
                        k.cols(),
                        shape.0,
                        shape.1
                    )));
                }
                Some(_) => {}
                None if shape.0 * shape.1 == 0 => {
                    slots[v] = Some(Matrix::zeros(field, shape.0, shape.1));
                }
                None => {
                    return Err(Error::ShapeMismatch(format!(
                        "missing kernel at `{}`",
                        net.node_name(v)
                    )));
                }
            }
        }
        let global = compute_global(net, dim, &slots);
        Ok(LinearNetworkCode {
            field,
            dim,
            kernels: slots,
            global,
        })
    }

    /// The code with every local kernel zero.
    pub fn zero(net: &Network, dim: usize) -> Self {
        let kernels: Vec<(usize, Matrix)> = net
            .coding_nodes()
            .map(|v| {
                let (r, c) = expected_shape(net, dim, v);
                (v, Matrix::zeros(net.field(), r, c))
            })
            .collect();
        Self::new(net, dim, kernels).expect("zero kernels have the right shapes")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn kernel(&self, v: usize) -> Option<&Matrix> {
        self.kernels[v].as_ref()
    }

    pub fn source_kernel(&self, net: &Network) -> &Matrix {
        self.kernels[net.source()].as_ref().expect("source kernel")
    }

    pub fn global_kernel(&self, e: usize) -> &Vector {
        &self.global[e]
    }

    /// Global kernels indexed by edge.
    pub fn global_kernels(&self) -> &[Vector] {
        &self.global
    }

    fn check_net(&self, net: &Network) -> Result<()> {
        if net.field() != self.field
            || net.node_count() != self.kernels.len()
            || net.edge_count() != self.global.len()
        {
            return Err(Error::ShapeMismatch(
                "code does not belong to this network".into(),
            ));
        }
        Ok(())
    }

    /// `F_t`: the `n x |In(t)|` matrix of global kernels entering `t`.
    pub fn sink_matrix(&self, net: &Network, t: usize) -> Matrix {
        let cols: Vec<&Vector> = net.in_edges(t).iter().map(|&e| &self.global[e]).collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("kernels have length n")
    }

    /// Symbols on every edge for source input `x`, by the node-by-node
    /// recursion (not via the global kernels).
    pub fn transmit(&self, net: &Network, x: &Vector) -> Result<Vec<Elem>> {
        self.check_net(net)?;
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "source input",
                expected: self.dim,
                found: x.len(),
            });
        }
        let f = self.field;
        let mut y = vec![0u32; net.edge_count()];
        for v in net.coding_nodes() {
            let k = self.kernels[v].as_ref().expect("coding node has a kernel");
            let inputs: Vec<u32> = if v == net.source() {
                x.entries().to_vec()
            } else {
                net.in_edges(v).iter().map(|&d| y[d]).collect()
            };
            let out = k.vec_mul(&Vector::from_raw(f, inputs))?;
            for (j, &e) in net.out_edges(v).iter().enumerate() {
                y[e] = out.entries()[j];
            }
        }
        Ok(y.into_iter().map(|v| f.elem(v as u64)).collect())
    }

    /// Every sink's `F_t` has full row rank `n`.
    pub fn is_decodable(&self, net: &Network) -> bool {
        net.sinks()
            .iter()
            .all(|&t| self.sink_matrix(net, t).rank() == self.dim)
    }

    /// Recovers `x` from the symbols `y` on `In(t)` (in declaration order).
    pub fn decode_at_sink(&self, net: &Network, t: usize, y: &[Elem]) -> Result<Vector> {
        self.check_net(net)?;
        let ins = net.in_edges(t);
        if y.len() != ins.len() {
            return Err(Error::DimensionMismatch {
                context: "sink observation",
                expected: ins.len(),
                found: y.len(),
            });
        }
        let n = self.dim;
        let ft = self.sink_matrix(net, t);
        // Solve F_t^T x^T = y^T via the augmented system.
        let mut aug = Matrix::zeros(self.field, ins.len(), n + 1);
        for (i, &e) in ins.iter().enumerate() {
            for j in 0..n {
                aug.set(i, j, self.global[e].entries()[j] as u64);
            }
            aug.set(i, n, y[i].value() as u64);
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&n) {
            return Err(Error::InconsistentObservation);
        }
        if ft.rank() < n {
            return Err(Error::NotDecodable(net.node_name(t).to_string()));
        }
        let x: Vec<u32> = (0..n).map(|i| aug.raw(i, n)).collect();
        Ok(Vector::from_raw(self.field, x))
    }

    /// The code with source kernel `Q K_s`; all other kernels unchanged.
    /// `Q` is `m x n` with `m <= n`, giving an `m`-dimensional code whose
    /// global kernels are `Q f_e`.
    pub fn transform(&self, net: &Network, q: &Matrix) -> Result<LinearNetworkCode> {
        self.check_net(net)?;
        if q.cols() != self.dim || q.rows() > self.dim {
            return Err(Error::ShapeMismatch(format!(
                "transform matrix is {}x{}, code dimension {}",
                q.rows(),
                q.cols(),
                self.dim
            )));
        }
        let ks = q.mul(self.source_kernel(net))?;
        let mut kernels = self.kernels.clone();
        kernels[net.source()] = Some(ks);
        let global = compute_global(net, q.rows(), &kernels);
        Ok(LinearNetworkCode {
            field: self.field,
            dim: q.rows(),
            kernels,
            global,
        })
    }

    /// `[I_m | 0] · C`, the first `m` coordinates of every kernel.
    pub fn truncate(&self, net: &Network, m: usize) -> Result<LinearNetworkCode> {
        if m > self.dim {
            return Err(Error::ShapeMismatch(format!(
                "cannot truncate a {}-dimensional code to {m}",
                self.dim
            )));
        }
        let mut p = Matrix::zeros(self.field, m, self.dim);
        for i in 0..m {
            p.set(i, i, 1);
        }
        self.transform(net, &p)
    }

    /// Whether `self` is the `m`-truncation of `larger` (same intermediate
    /// kernels and `f_e` a prefix of the larger kernel for every edge).
    pub fn is_truncation_of(&self, net: &Network, larger: &LinearNetworkCode) -> bool {
        self.dim <= larger.dim
            && same_intermediate_kernels(net, self, larger)
            && self
                .global
                .iter()
                .zip(&larger.global)
                .all(|(a, b)| a.entries() == &b.entries()[..self.dim])
    }
}

fn expected_shape(net: &Network, dim: usize, v: usize) -> (usize, usize) {
    let rows = if v == net.source() {
        dim
    } else {
        net.in_edges(v).len()
    };
    (rows, net.out_edges(v).len())
}

/// `f_e = Σ_{d ∈ In(tail e)} k_{d,e} f_d` over the ancestral order, with the
/// standard basis on the imaginary source inputs.
fn compute_global(net: &Network, dim: usize, kernels: &[Option<Matrix>]) -> Vec<Vector> {
    let f = net.field();
    let mut global: Vec<Vector> = vec![Vector::zeros(f, dim); net.edge_count()];
    for v in net.coding_nodes() {
        let k = kernels[v].as_ref().expect("coding node has a kernel");
        let inputs: Vec<Vector> = if v == net.source() {
            (0..dim).map(|i| Vector::unit(f, dim, i)).collect()
        } else {
            net.in_edges(v).iter().map(|&d| global[d].clone()).collect()
        };
        for (j, &e) in net.out_edges(v).iter().enumerate() {
            let mut acc = vec![0u32; dim];
            for (i, fd) in inputs.iter().enumerate() {
                let c = k.raw(i, j);
                if c == 0 {
                    continue;
                }
                for (a, &b) in acc.iter_mut().zip(fd.entries()) {
                    *a = f.add_raw(*a, f.mul_raw(c, b));
                }
            }
            global[e] = Vector::from_raw(f, acc);
        }
    }
    global
}

/// Whether two codes carry identical kernels at every intermediate node.
pub fn same_intermediate_kernels(
    net: &Network,
    a: &LinearNetworkCode,
    b: &LinearNetworkCode,
) -> bool {
    net.intermediate_nodes()
        .all(|v| a.kernels[v] == b.kernels[v])
}

/// The truncations `C_1, ..., C_n` of a decodable `n`-dimensional code.
pub fn truncation_family(
    net: &Network,
    code: &LinearNetworkCode,
) -> Result<Vec<LinearNetworkCode>> {
    if !code.is_decodable(net) {
        return Err(Error::NotDecodable(
            "input code is not decodable at every sink".into(),
        ));
    }
    (1..=code.dimension())
        .map(|m| code.truncate(net, m))
        .collect()
}

/// A base code `C_n` together with a source-side matrix `Q` and a claimed
/// (rate, level) pair. The deployed code is `Q^{-1} · C_n`; the source input
/// is the row vector `x = (m k)` of message then key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecureCodeSpec {
    base: LinearNetworkCode,
    q: Matrix,
    rate: usize,
    level: usize,
    deployed: LinearNetworkCode,
}

impl SecureCodeSpec {
    pub fn new(
        net: &Network,
        base: LinearNetworkCode,
        q: Matrix,
        rate: usize,
        level: usize,
    ) -> Result<Self> {
        let n = base.dimension();
        if rate + level != n {
            return Err(Error::DimensionMismatch {
                context: "rate + level vs code dimension",
                expected: n,
                found: rate + level,
            });
        }
        if n > net.c_min() {
            return Err(Error::LevelOutOfRange {
                level: n,
                max: net.c_min(),
            });
        }
        if q.rows() != n || q.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "matrix Q is {}x{}, expected {n}x{n}",
                q.rows(),
                q.cols()
            )));
        }
        let qinv = q.invert()?;
        let deployed = base.transform(net, &qinv)?;
        Ok(SecureCodeSpec {
            base,
            q,
            rate,
            level,
            deployed,
        })
    }

    /// The spec with `Q = I`.
    pub fn plain(
        net: &Network,
        base: LinearNetworkCode,
        rate: usize,
        level: usize,
    ) -> Result<Self> {
        let q = Matrix::identity(base.field(), base.dimension());
        Self::new(net, base, q, rate, level)
    }

    pub fn base(&self) -> &LinearNetworkCode {
        &self.base
    }

    pub fn q_matrix(&self) -> &Matrix {
        &self.q
    }

    pub fn rate(&self) -> usize {
        self.rate
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dimension(&self) -> usize {
        self.rate + self.level
    }

    pub fn deployed(&self) -> &LinearNetworkCode {
        &self.deployed
    }

    /// Columns `b_1..b_ω` of `Q`, the message directions.
    pub fn message_columns(&self) -> Vec<Vector> {
        (0..self.rate).map(|j| self.q.column(j)).collect()
    }

    /// Concatenates message and key into the source input `x = (m k)`.
    pub fn source_input(&self, message: &[Elem], key: &[Elem]) -> Result<Vector> {
        if message.len() != self.rate {
            return Err(Error::DimensionMismatch {
                context: "message length",
                expected: self.rate,
                found: message.len(),
            });
        }
        if key.len() != self.level {
            return Err(Error::DimensionMismatch {
                context: "key length",
                expected: self.level,
                found: key.len(),
            });
        }
        let all: Vec<Elem> = message.iter().chain(key).copied().collect();
        Vector::from_elems(self.base.field(), &all)
    }
}

/// Secure code specs on one network. Local-encoding-preserving when every
/// member's deployed code has the same kernel at each intermediate node.
#[derive(Clone, Debug)]
pub struct CodeFamily {
    pub members: Vec<SecureCodeSpec>,
}

impl CodeFamily {
    pub fn is_local_encoding_preserving(&self, net: &Network) -> bool {
        match self.members.first() {
            None => true,
            Some(first) => self
                .members
                .iter()
                .all(|m| same_intermediate_kernels(net, first.deployed(), m.deployed())),
        }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.members.iter().map(|m| (m.rate(), m.level())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{relay4, relay4_base3};
    use proptest::prelude::*;

    fn kernels_by_name(net: &Network, code: &LinearNetworkCode) -> Vec<(String, Vec<u32>)> {
        (0..net.edge_count())
            .map(|e| {
                (
                    net.edge(e).id.clone(),
                    code.global_kernel(e).entries().to_vec(),
                )
            })
            .collect()
    }

    fn all_inputs(f: Field, n: usize) -> Vec<Vector> {
        let q = f.order() as u64;
        (0..q.pow(n as u32))
            .map(|mut i| {
                let mut e = vec![0; n];
                for s in e.iter_mut().rev() {
                    *s = i % q;
                    i /= q;
                }
                Vector::new(f, &e)
            })
            .collect()
    }

    #[test]
    fn base_kernels() {
        let net = relay4();
        let c3 = relay4_base3(&net);
        let want3: [&[u32]; 11] = [
            &[0, 1, 1],
            &[1, 0, 1],
            &[1, 0, 2],
            &[0, 1, 2],
            &[1, 0, 1],
            &[1, 0, 1],
            &[1, 0, 2],
            &[1, 0, 2],
            &[0, 0, 1],
            &[0, 0, 1],
            &[0, 0, 1],
        ];
        for (e, w) in want3.iter().enumerate() {
            assert_eq!(c3.global_kernel(e).entries(), *w, "edge {}", net.edge(e).id);
        }
        let c2 = c3.truncate(&net, 2).unwrap();
        let want2: [&[u32]; 11] = [
            &[0, 1],
            &[1, 0],
            &[1, 0],
            &[0, 1],
            &[1, 0],
            &[1, 0],
            &[1, 0],
            &[1, 0],
            &[0, 0],
            &[0, 0],
            &[0, 0],
        ];
        for (e, w) in want2.iter().enumerate() {
            assert_eq!(c2.global_kernel(e).entries(), *w);
        }
        let z = LinearNetworkCode::zero(&net, 3);
        assert!(z.global_kernels().iter().all(Vector::is_zero));
        assert_eq!(kernels_by_name(&net, &c2).len(), 11);
    }

    #[test]
    fn shape_errors() {
        let net = relay4();
        let f = net.field();
        let s = net.source();
        assert!(LinearNetworkCode::new(&net, 2, [(s, Matrix::zeros(f, 3, 4))]).is_err());
        let sink = net.sinks()[0];
        assert!(LinearNetworkCode::new(&net, 0, [(sink, Matrix::zeros(f, 1, 1))]).is_err());
        assert!(matches!(
            LinearNetworkCode::new(&net, 3, [(s, Matrix::zeros(f, 3, 4))]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn transmit_examples() {
        let net = relay4();
        let f = net.field();
        let c3 = relay4_base3(&net);
        let c2 = c3.truncate(&net, 2).unwrap();
        let y = c2.transmit(&net, &Vector::new(f, &[1, 2])).unwrap();
        let id = |s: &str| net.edge_id(s).unwrap();
        assert_eq!(y[id("e1")].value(), 2);
        assert_eq!(y[id("e2")].value(), 1);
        assert_eq!(y[id("e9")].value(), 0);
        assert!(c3
            .transmit(&net, &Vector::zeros(f, 3))
            .unwrap()
            .iter()
            .all(|v| v.is_zero()));
        for i in 0..3 {
            let y = c3.transmit(&net, &Vector::unit(f, 3, i)).unwrap();
            for (e, ye) in y.iter().enumerate() {
                assert_eq!(*ye, c3.global_kernel(e).get(i));
            }
        }
        assert!(c3.transmit(&net, &Vector::zeros(f, 2)).is_err());
    }

    #[test]
    fn transmit_matches_global_kernels_exhaustively() {
        let net = relay4();
        let c3 = relay4_base3(&net);
        for n in 0..=3 {
            let c = c3.truncate(&net, n).unwrap();
            for x in all_inputs(net.field(), n) {
                let y = c.transmit(&net, &x).unwrap();
                for (e, ye) in y.iter().enumerate() {
                    assert_eq!(*ye, x.dot(c.global_kernel(e)).unwrap());
                }
            }
        }
    }

    #[test]
    fn decodability() {
        let net = relay4();
        let c3 = relay4_base3(&net);
        assert!(c3.is_decodable(&net));
        assert!(LinearNetworkCode::zero(&net, 0).is_decodable(&net));
        let v3 = net.node_id("v3").unwrap();
        let mut kernels: Vec<(usize, Matrix)> = net
            .coding_nodes()
            .map(|v| (v, c3.kernel(v).unwrap().clone()))
            .collect();
        for (v, k) in kernels.iter_mut() {
            if *v == v3 {
                *k = Matrix::zeros(net.field(), 2, 1);
            }
        }
        let broken = LinearNetworkCode::new(&net, 3, kernels).unwrap();
        assert!(!broken.is_decodable(&net));
    }

    #[test]
    fn decode_round_trip_exhaustive() {
        let net = relay4();
        let c3 = relay4_base3(&net);
        for x in all_inputs(net.field(), 3) {
            let y = c3.transmit(&net, &x).unwrap();
            for &t in net.sinks() {
                let obs: Vec<Elem> = net.in_edges(t).iter().map(|&e| y[e]).collect();
                assert_eq!(c3.decode_at_sink(&net, t, &obs).unwrap(), x);
            }
        }
        let f = net.field();
        let t1 = net.node_id("t1").unwrap();
        let y = c3.transmit(&net, &Vector::new(f, &[1, 0, 0])).unwrap();
        let obs: Vec<Elem> = net.in_edges(t1).iter().map(|&e| y[e]).collect();
        assert_eq!(
            c3.decode_at_sink(&net, t1, &obs).unwrap(),
            Vector::new(f, &[1, 0, 0])
        );
        assert_eq!(
            c3.decode_at_sink(&net, t1, &[f.zero(); 3]).unwrap(),
            Vector::zeros(f, 3)
        );
    }

    #[test]
    fn inconsistent_observation() {
        let net = relay4();
        let c2 = relay4_base3(&net).truncate(&net, 2).unwrap();
        let f = net.field();
        let t1 = net.node_id("t1").unwrap();
        // e9..e11 carry zero in the 2-dimensional truncation.
        let obs = [f.zero(), f.zero(), f.one()];
        assert_eq!(
            c2.decode_at_sink(&net, t1, &obs),
            Err(Error::InconsistentObservation)
        );
    }

    #[test]
    fn transform_examples() {
        let net = relay4();
        let f = net.field();
        let c3 = relay4_base3(&net);
        assert_eq!(c3.transform(&net, &Matrix::identity(f, 3)).unwrap(), c3);
        let c2 = c3.truncate(&net, 2).unwrap();
        assert!(c2.is_truncation_of(&net, &c3));
        assert!(c2.is_decodable(&net));
        let q = Matrix::from_rows(f, &[vec![1, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let t = c3.transform(&net, &q).unwrap();
        for e in 0..net.edge_count() {
            assert_eq!(t.global_kernel(e), &q.mul_vec(c3.global_kernel(e)).unwrap());
        }
        assert!(t.is_decodable(&net));
        assert!(same_intermediate_kernels(&net, &c3, &t));
        assert!(c3.transform(&net, &Matrix::identity(f, 4)).is_err());
    }

    #[test]
    fn truncation_family_members() {
        let net = relay4();
        let c3 = relay4_base3(&net);
        let fam = truncation_family(&net, &c3).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam[2], c3);
        for c in &fam {
            assert!(c.is_decodable(&net));
            assert!(c.is_truncation_of(&net, &c3));
        }
        assert!(truncation_family(&net, &LinearNetworkCode::zero(&net, 3)).is_err());
    }

    #[test]
    fn spec_input_and_deployment() {
        let net = relay4();
        let f = net.field();
        let c2 = relay4_base3(&net).truncate(&net, 2).unwrap();
        let q = Matrix::from_rows(f, &[vec![1, 1], vec![1, 0]]).unwrap();
        let spec = SecureCodeSpec::new(&net, c2.clone(), q.clone(), 1, 1).unwrap();
        assert_eq!(spec.message_columns(), vec![Vector::new(f, &[1, 1])]);
        let x = spec.source_input(&[f.elem(3)], &[f.elem(4)]).unwrap();
        assert_eq!(x, Vector::new(f, &[3, 4]));
        assert!(spec.source_input(&[], &[f.one()]).is_err());
        assert!(SecureCodeSpec::new(&net, c2.clone(), q.clone(), 2, 1).is_err());
        let sing = Matrix::from_rows(f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(
            SecureCodeSpec::new(&net, c2, sing, 1, 1).unwrap_err(),
            Error::SingularMatrix
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn transform_maps_kernels(rows in proptest::collection::vec(0u64..5, 9)) {
            let net = relay4();
            let c3 = relay4_base3(&net);
            let q = Matrix::from_rows_shaped(net.field(), 3, 3, &rows).unwrap();
            let t = c3.transform(&net, &q).unwrap();
            for e in 0..net.edge_count() {
                prop_assert_eq!(t.global_kernel(e), &q.mul_vec(c3.global_kernel(e)).unwrap());
            }
            prop_assert!(same_intermediate_kernels(&net, &c3, &t));
        }
    }
}
