//! Security analysis of secure code specs against wiretappers.
//!
//! Two independent verifiers live here. The subspace verifier checks that the
//! message directions `b_1..b_ω` (columns of `Q`) meet every wiretap subspace
//! `L_A = <f_e : e in A>` trivially. The exhaustive verifier runs the deployed
//! code on every `(message, key)` pair and checks, with exact integer counts,
//! that each observation `y_A` leaves the message uniformly distributed.

use std::collections::BTreeMap;

use crate::code::{LinearNetworkCode, SecureCodeSpec};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::network::{for_each_subset, EdgeSet, Network};

/// Largest input space the exhaustive verifier will enumerate.
pub const EXHAUSTIVE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Subspace,
    Exhaustive,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Subspace => "subspace",
            Method::Exhaustive => "exhaustive",
        }
    }
}

/// Which wiretap sets a verifier examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Primary edge subsets of size exactly `r`.
    Primary,
    /// Every nonempty edge subset of size at most `r`.
    AllSubsets,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetVerdict {
    pub set: EdgeSet,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecurityReport {
    pub rate: usize,
    pub level: usize,
    pub method: Method,
    /// Sorted by edge set.
    pub verdicts: Vec<SetVerdict>,
}

impl SecurityReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SetVerdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    /// One `A=<ids> verdict=<pass|fail> [witness=...]` line per set.
    pub fn render(&self, net: &Network) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            out.push_str("A=");
            out.push_str(&net.format_edge_set(&v.set));
            out.push_str(if v.pass {
                " verdict=pass"
            } else {
                " verdict=fail"
            });
            if let Some(w) = &v.witness {
                out.push_str(" witness=");
                out.push_str(w);
            }
            out.push('\n');
        }
        out
    }
}

/// The wiretap sets a scope covers at level `r`, sorted.
pub fn wiretap_sets(net: &Network, r: usize, scope: Scope) -> Result<Vec<EdgeSet>> {
    match scope {
        Scope::Primary => net.enumerate_primary_sets(r),
        Scope::AllSubsets => {
            let mut out = Vec::new();
            for k in 1..=r.min(net.edge_count()) {
                for_each_subset(net.edge_count(), k, |idx| {
                    out.push(EdgeSet::new(idx.to_vec()))
                });
            }
            out.sort();
            Ok(out)
        }
    }
}

/// `L_A` spanned by the kernels of `code` on the edges of `a`.
pub fn wiretap_subspace(code: &LinearNetworkCode, a: &EdgeSet) -> Subspace {
    Subspace::span(
        code.field(),
        code.dimension(),
        a.indices().iter().map(|&e| code.global_kernel(e)),
    )
    .expect("global kernels have the code dimension")
}

/// Dimension of `<b_1..b_ω> ∩ L_A` for each set.
fn meet_dims(code: &LinearNetworkCode, b: &[Vector], sets: &[EdgeSet]) -> Result<Vec<usize>> {
    let bs = Subspace::span(code.field(), code.dimension(), b)?;
    sets.iter()
        .map(|a| bs.intersection_dim(&wiretap_subspace(code, a)))
        .collect()
}

/// Whether `<b_1..b_ω>` meets `L_A` trivially for every listed set.
pub fn message_space_avoids(
    code: &LinearNetworkCode,
    b: &[Vector],
    sets: &[EdgeSet],
) -> Result<bool> {
    Ok(meet_dims(code, b, sets)?.iter().all(|&d| d == 0))
}

/// The subspace criterion over the primary edge subsets of size `r`.
pub fn check_secure_subspace(net: &Network, spec: &SecureCodeSpec) -> Result<SecurityReport> {
    check_secure_subspace_scoped(net, spec, Scope::Primary)
}

pub fn check_secure_subspace_scoped(
    net: &Network,
    spec: &SecureCodeSpec,
    scope: Scope,
) -> Result<SecurityReport> {
    let sets = wiretap_sets(net, spec.level(), scope)?;
    let dims = meet_dims(spec.base(), &spec.message_columns(), &sets)?;
    let verdicts = sets
        .into_iter()
        .zip(dims)
        .map(|(set, d)| SetVerdict {
            set,
            pass: d == 0,
            witness: (d > 0).then(|| format!("meet_dim={d}")),
        })
        .collect();
    Ok(SecurityReport {
        rate: spec.rate(),
        level: spec.level(),
        method: Method::Subspace,
        verdicts,
    })
}

/// Runs the deployed code on every input `x = (m k)` and checks that, for
/// every wiretap set in scope, each attainable observation is produced by
/// every message equally often.
pub fn check_secure_exhaustive(
    net: &Network,
    deployed: &LinearNetworkCode,
    rate: usize,
    level: usize,
    scope: Scope,
) -> Result<SecurityReport> {
    let n = deployed.dimension();
    if rate + level != n {
        return Err(Error::DimensionMismatch {
            context: "rate + level vs code dimension",
            expected: n,
            found: rate + level,
        });
    }
    let f = deployed.field();
    let q = f.order() as u64;
    let size = q
        .checked_pow(n as u32)
        .filter(|&s| s <= EXHAUSTIVE_BUDGET)
        .ok_or(Error::EnumerationBudget {
            size: q.saturating_pow(n as u32),
            budget: EXHAUSTIVE_BUDGET,
        })?;
    let sets = wiretap_sets(net, level, scope)?;
    let symbols = all_symbols(f, deployed, size as usize);
    let edges = net.edge_count();
    let messages = q.pow(rate as u32) as usize;
    let keys = q.pow(level as u32) as usize;

    let verdicts = sets
        .into_iter()
        .map(|set| {
            let mut table: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
            for x in 0..size as usize {
                let row = &symbols[x * edges..(x + 1) * edges];
                let y: Vec<u32> = set.indices().iter().map(|&e| row[e]).collect();
                table.entry(y).or_insert_with(|| vec![0; messages])[x / keys] += 1;
            }
            let bad = table
                .iter()
                .find(|(_, counts)| counts.iter().any(|&c| c != counts[0]));
            SetVerdict {
                pass: bad.is_none(),
                witness: bad.map(|(y, counts)| {
                    let ys: Vec<String> = y.iter().map(u32::to_string).collect();
                    let cs: Vec<String> = counts.iter().map(u64::to_string).collect();
                    format!("y=({}),m-counts=[{}]", ys.join(","), cs.join(","))
                }),
                set,
            }
        })
        .collect();
    Ok(SecurityReport {
        rate,
        level,
        method: Method::Exhaustive,
        verdicts,
    })
}

/// Symbols on every edge for every input, row `x` at `x * |E|`. Inputs are
/// enumerated lexicographically with the first coordinate most significant.
fn all_symbols(f: Field, code: &LinearNetworkCode, size: usize) -> Vec<u32> {
    let n = code.dimension();
    let kernels = code.global_kernels();
    let edges = kernels.len();
    let mut out = vec![0u32; size * edges];
    let mut x = vec![0u32; n];
    for idx in 0..size {
        let row = &mut out[idx * edges..(idx + 1) * edges];
        for (slot, k) in row.iter_mut().zip(kernels) {
            *slot = x
                .iter()
                .zip(k.entries())
                .fold(0, |acc, (&a, &b)| f.add_raw(acc, f.mul_raw(a, b)));
        }
        for i in (0..n).rev() {
            x[i] += 1;
            if x[i] < f.order() {
                break;
            }
            x[i] = 0;
        }
    }
    out
}

/// Whether the subspace verdict over the primary sets of size `r` agrees
/// with the verdict over every edge subset of size at most `r`.
pub fn check_primary_scope_equivalence(net: &Network, spec: &SecureCodeSpec) -> Result<bool> {
    let primary = check_secure_subspace_scoped(net, spec, Scope::Primary)?.passed();
    let all = check_secure_subspace_scoped(net, spec, Scope::AllSubsets)?.passed();
    Ok(primary == all)
}

/// Checks one matrix `Q` for every pair `(n - r, r)`: the first `n - r`
/// columns must meet `L_A` trivially for every primary set of size `r`.
/// Returns one subspace report per level `r = 0..=n`.
pub fn check_all_pairs(
    net: &Network,
    base: &LinearNetworkCode,
    q: &Matrix,
) -> Result<Vec<SecurityReport>> {
    let n = base.dimension();
    if q.rows() != n || q.cols() != n {
        return Err(Error::ShapeMismatch(format!(
            "matrix Q is {}x{}, expected {n}x{n}",
            q.rows(),
            q.cols()
        )));
    }
    if q.rank() < n {
        return Err(Error::SingularMatrix);
    }
    let cols = q.columns();
    (0..=n)
        .map(|r| {
            let sets = net.enumerate_primary_sets(r)?;
            let dims = meet_dims(base, &cols[..n - r], &sets)?;
            Ok(SecurityReport {
                rate: n - r,
                level: r,
                method: Method::Subspace,
                verdicts: sets
                    .into_iter()
                    .zip(dims)
                    .map(|(set, d)| SetVerdict {
                        set,
                        pass: d == 0,
                        witness: (d > 0).then(|| format!("meet_dim={d}")),
                    })
                    .collect(),
            })
        })
        .collect()
}

/// Proof that `<b_1..b_ω>` meets `L_A` in a line:
/// `Σ α_i b_i = Σ β_e f_e ≠ 0`, scaled so the first nonzero `α_i` is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub set: EdgeSet,
    pub alpha: Vector,
    /// One coefficient per edge of `set`, in index order.
    pub beta: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WiretapClassification {
    /// Primary sets whose kernels are linearly dependent; the message space
    /// already meets them trivially.
    pub dependent: Vec<EdgeSet>,
    /// Primary sets whose kernels are independent, with certificates.
    pub independent: Vec<Certificate>,
}

/// Splits the primary sets of size `level_next` by solving
/// `Σ α_i b_i + Σ γ_e f_e = 0` for each. Requires the message directions to
/// be secure at level `level_next - 1`.
pub fn classify_wiretap_sets(
    net: &Network,
    base: &LinearNetworkCode,
    b: &[Vector],
    level_next: usize,
) -> Result<WiretapClassification> {
    if level_next == 0 {
        return Err(Error::LevelOutOfRange {
            level: 0,
            max: net.c_min(),
        });
    }
    let n = base.dimension();
    let f = base.field();
    let omega = b.len();
    if Subspace::span(f, n, b)?.dim() != omega {
        return Err(Error::NotSecure {
            rate: omega,
            level: level_next - 1,
            witness: "message directions are linearly dependent".into(),
        });
    }
    let below = net.enumerate_primary_sets(level_next - 1)?;
    let dims = meet_dims(base, b, &below)?;
    if let Some(i) = dims.iter().position(|&d| d > 0) {
        return Err(Error::NotSecure {
            rate: omega,
            level: level_next - 1,
            witness: net.format_edge_set(&below[i]),
        });
    }
    classify_unchecked(net, base, b, level_next)
}

/// [`classify_wiretap_sets`] without the security precondition check.
pub fn classify_unchecked(
    net: &Network,
    base: &LinearNetworkCode,
    b: &[Vector],
    level_next: usize,
) -> Result<WiretapClassification> {
    let n = base.dimension();
    let f = base.field();
    let omega = b.len();
    let bs = Subspace::span(f, n, b)?;
    let mut dependent = Vec::new();
    let mut independent = Vec::new();
    for a in net.enumerate_primary_sets(level_next)? {
        let mut cols: Vec<&Vector> = b.iter().collect();
        cols.extend(a.indices().iter().map(|&e| base.global_kernel(e)));
        let m = Matrix::from_columns(f, n, &cols)?;
        let meet = bs.intersection_dim(&wiretap_subspace(base, &a))?;
        let v = m
            .nullspace_nonzero()
            .ok_or_else(|| Error::Internal("more columns than rows yet no kernel".into()))?;
        let lead = v.entries()[..omega].iter().copied().find(|&x| x != 0);
        match lead {
            None => {
                if meet != 0 {
                    return Err(Error::Internal(format!(
                        "set {} meets the message space but the kernel vector misses it",
                        net.format_edge_set(&a)
                    )));
                }
                dependent.push(a);
            }
            Some(lead) => {
                if meet != 1 {
                    return Err(Error::Internal(format!(
                        "set {} meets the message space in dimension {meet}",
                        net.format_edge_set(&a)
                    )));
                }
                let v = v.scale(f.elem(f.inv_raw(lead)? as u64));
                let alpha = v.truncated(omega);
                let beta = v.entries()[omega..]
                    .iter()
                    .map(|&g| -f.elem(g as u64))
                    .collect();
                independent.push(Certificate {
                    set: a,
                    alpha,
                    beta,
                });
            }
        }
    }
    Ok(WiretapClassification {
        dependent,
        independent,
    })
}

/// `Γ_A = {c : Σ α_i c_i = λ_A}`: the last-row extensions of the message
/// directions that would expose the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenHyperplane {
    pub set: EdgeSet,
    pub alpha: Vector,
    pub lambda: Elem,
}

impl ForbiddenHyperplane {
    pub fn contains(&self, c: &Vector) -> Result<bool> {
        Ok(self.alpha.dot(c)? == self.lambda)
    }

    /// All members, enumerated over `F_q^ω` (small cases only).
    pub fn members(&self) -> Vec<Vector> {
        let f = self.alpha.field();
        let w = self.alpha.len();
        let q = f.order() as u64;
        (0..q.pow(w as u32))
            .map(|mut i| {
                let mut e = vec![0u64; w];
                for s in e.iter_mut().rev() {
                    *s = i % q;
                    i /= q;
                }
                Vector::new(f, &e)
            })
            .filter(|c| self.contains(c).expect("same length"))
            .collect()
    }
}

/// `λ_A = Σ β_e f_{e,n+1}` read off the last coordinate of the kernels of the
/// `(n+1)`-dimensional extension.
pub fn gamma_hyperplane(
    cert: &Certificate,
    larger: &LinearNetworkCode,
) -> Result<ForbiddenHyperplane> {
    if cert.alpha.is_zero() {
        return Err(Error::Unsupported(
            "sets with dependent kernels have no forbidden hyperplane".into(),
        ));
    }
    let f = larger.field();
    let last = larger
        .dimension()
        .checked_sub(1)
        .ok_or_else(|| Error::ShapeMismatch("extension code has dimension 0".into()))?;
    let mut lambda = f.zero();
    for (&e, &beta) in cert.set.indices().iter().zip(&cert.beta) {
        lambda = lambda + beta * larger.global_kernel(e).get(last);
    }
    Ok(ForbiddenHyperplane {
        set: cert.set.clone(),
        alpha: cert.alpha.clone(),
        lambda,
    })
}
