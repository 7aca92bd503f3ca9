//! Constructions of secure codes and local-encoding-preserving families.
//!
//! * [`build_fixed_pair`]: message directions chosen one at a time outside
//!   every `B_{i-1} + L_A`, for a single (rate, level) pair.
//! * [`increment_security_level`]: lifts a rate-ω level-r spec on `C_n` to a
//!   rate-ω level-(r+1) spec on `C_{n+1}` by appending one row to the message
//!   directions and one standard column.
//! * [`fixed_dimension`]: one `Q` on `C_n` serving every pair `(n - r, r)`.
//! * [`family_fixed_rate`] and [`region_family`] chain those together.
//! * [`generate_multicast_code`]: a deterministic greedy seed code.

use std::collections::BTreeMap;

use crate::code::{truncation_family, CodeFamily, LinearNetworkCode, SecureCodeSpec};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{
    pick_vector_avoiding, pick_vector_avoiding_with, Matrix, PickStrategy, Subspace, Vector,
};
use crate::network::{EdgeSet, Network};
use crate::secure::{
    check_all_pairs, check_secure_subspace, classify_unchecked, classify_wiretap_sets,
    gamma_hyperplane, wiretap_subspace, ForbiddenHyperplane,
};

/// Whether a construction checks its sufficient field-size bound before
/// searching. The bounds are not necessary: small fields often still work,
/// and a skipped guard only means a failed search is reported late.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FieldGuard {
    #[default]
    Enforce,
    Skip,
}

fn require_field(field: Field, bound: usize) -> Result<()> {
    require_field_if(FieldGuard::Enforce, field, bound)
}

fn require_field_if(guard: FieldGuard, field: Field, bound: usize) -> Result<()> {
    if guard == FieldGuard::Enforce && (field.order() as usize) <= bound {
        return Err(Error::FieldTooSmall {
            q: field.order(),
            bound,
        });
    }
    Ok(())
}

fn verified(net: &Network, spec: SecureCodeSpec) -> Result<SecureCodeSpec> {
    let report = check_secure_subspace(net, &spec)?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::Internal(format!(
            "constructed rate-{} level-{} spec fails at {}",
            spec.rate(),
            spec.level(),
            net.format_edge_set(&bad.set)
        )));
    }
    Ok(spec)
}

/// `Σ_{A ∈ sets} (B + L_A)` plus `B` itself, for vector avoidance.
fn shifted_wiretap_spaces(
    base: &LinearNetworkCode,
    chosen: &[Vector],
    sets: &[EdgeSet],
) -> Result<Vec<Subspace>> {
    let f = base.field();
    let n = base.dimension();
    let b = Subspace::span(f, n, chosen)?;
    let mut out = Vec::with_capacity(sets.len() + 1);
    for a in sets {
        out.push(b.sum(&wiretap_subspace(base, a))?);
    }
    out.push(b);
    Ok(out)
}

/// Completes `chosen` to a basis, each new column the smallest vector
/// outside the span so far.
fn complete_basis(field: Field, n: usize, chosen: &mut Vec<Vector>) -> Result<()> {
    while chosen.len() < n {
        let span = Subspace::span(field, n, chosen.iter())?;
        chosen.push(pick_vector_avoiding(field, n, &[span])?);
    }
    Ok(())
}

fn matrix_of_columns(field: Field, n: usize, cols: &[Vector]) -> Result<Matrix> {
    let refs: Vec<&Vector> = cols.iter().collect();
    Matrix::from_columns(field, n, &refs)
}

/// A spec at `(rate, level)` on `base` (of dimension `rate + level`) whose
/// message directions avoid every primary set of size `level`.
pub fn build_fixed_pair(
    net: &Network,
    base: &LinearNetworkCode,
    rate: usize,
    level: usize,
) -> Result<SecureCodeSpec> {
    build_fixed_pair_with(net, base, rate, level, FieldGuard::Enforce)
}

pub fn build_fixed_pair_with(
    net: &Network,
    base: &LinearNetworkCode,
    rate: usize,
    level: usize,
    guard: FieldGuard,
) -> Result<SecureCodeSpec> {
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
    if !base.is_decodable(net) {
        return Err(Error::NotDecodable("base code".into()));
    }
    let sets = net.enumerate_primary_sets(level)?;
    let bound = net.sinks().len().max(sets.len());
    require_field_if(guard, base.field(), bound)?;
    let f = base.field();
    let mut cols: Vec<Vector> = Vec::with_capacity(n);
    for _ in 0..rate {
        let avoid = shifted_wiretap_spaces(base, &cols, &sets)?;
        cols.push(
            pick_vector_avoiding(f, n, &avoid).map_err(|_| Error::FieldTooSmall {
                q: f.order(),
                bound,
            })?,
        );
    }
    complete_basis(f, n, &mut cols)?;
    let q = matrix_of_columns(f, n, &cols)?;
    verified(net, SecureCodeSpec::new(net, base.clone(), q, rate, level)?)
}

/// One pass of the increment loop for a set whose kernels meet the message
/// space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncrementStep {
    pub hyperplane: ForbiddenHyperplane,
    /// `Σ α_i c*_i` on entry to the step.
    pub tau: Elem,
    /// Set when `tau` was zero and the running vector had to move.
    pub h: Option<Vector>,
    /// Set when the running vector was rescaled before adding `h`.
    pub xi: Option<Elem>,
    /// Running vector after the step.
    pub c_star: Vector,
}

/// Everything the increment decided, in processing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncrementTrace {
    /// Primary sets of the next size with dependent kernels.
    pub dependent: Vec<EdgeSet>,
    pub steps: Vec<IncrementStep>,
    pub c_star: Vector,
    pub theta: Elem,
    /// The appended last row of the message directions.
    pub c: Vector,
}

impl IncrementTrace {
    pub fn hyperplanes(&self) -> impl Iterator<Item = &ForbiddenHyperplane> {
        self.steps.iter().map(|s| &s.hyperplane)
    }
}

#[derive(Clone, Debug)]
pub struct IncrementOutcome {
    pub spec: SecureCodeSpec,
    pub trace: IncrementTrace,
}

/// Raises the security level of `spec` by one on the `(n+1)`-dimensional
/// code `larger`, whose truncation must be `spec`'s base code. Intermediate
/// kernels are untouched.
pub fn increment_security_level(
    net: &Network,
    spec: &SecureCodeSpec,
    larger: &LinearNetworkCode,
) -> Result<IncrementOutcome> {
    increment_inner(net, spec, larger, true)
}

/// [`increment_security_level`] without re-verifying that the input spec is
/// secure at its claimed level. The output is still verified.
pub fn increment_security_level_unchecked(
    net: &Network,
    spec: &SecureCodeSpec,
    larger: &LinearNetworkCode,
) -> Result<IncrementOutcome> {
    increment_inner(net, spec, larger, false)
}

fn increment_inner(
    net: &Network,
    spec: &SecureCodeSpec,
    larger: &LinearNetworkCode,
    check_input: bool,
) -> Result<IncrementOutcome> {
    let n = spec.dimension();
    let omega = spec.rate();
    let level = spec.level();
    let f = larger.field();
    if larger.dimension() != n + 1 || !spec.base().is_truncation_of(net, larger) {
        return Err(Error::UnrelatedCodes(format!(
            "the {}-dimensional code is not the truncation of the {}-dimensional one",
            n,
            larger.dimension()
        )));
    }
    if n + 1 > net.c_min() {
        return Err(Error::LevelOutOfRange {
            level: n + 1,
            max: net.c_min(),
        });
    }
    let b = spec.message_columns();
    let cls = if check_input {
        classify_wiretap_sets(net, spec.base(), &b, level + 1)?
    } else {
        classify_unchecked(net, spec.base(), &b, level + 1)?
    };
    require_field(f, cls.independent.len())?;

    let mut c_star = Vector::zeros(f, omega);
    let mut steps: Vec<IncrementStep> = Vec::with_capacity(cls.independent.len());
    for cert in &cls.independent {
        let hyperplane = gamma_hyperplane(cert, larger)?;
        let alpha = &hyperplane.alpha;
        let tau = alpha.dot(&c_star)?;
        let (mut h_used, mut xi_used) = (None, None);
        if tau.is_zero() {
            let lead = alpha
                .entries()
                .iter()
                .position(|&a| a != 0)
                .expect("certificate has nonzero alpha");
            let h = Vector::unit(f, omega, lead);
            if steps.is_empty() {
                c_star = h.clone();
            } else {
                let mut pairs = Vec::with_capacity(steps.len());
                for s in &steps {
                    let a = &s.hyperplane.alpha;
                    pairs.push((a.dot(&c_star)?, a.dot(&h)?));
                }
                let xi = f
                    .elements()
                    .find(|&xi| pairs.iter().all(|&(t, p)| !(xi * t + p).is_zero()))
                    .ok_or_else(|| Error::Internal("no admissible rescaling factor".into()))?;
                c_star = c_star.scale(xi).add(&h)?;
                xi_used = Some(xi);
            }
            h_used = Some(h);
        }
        steps.push(IncrementStep {
            hyperplane,
            tau,
            h: h_used,
            xi: xi_used,
            c_star: c_star.clone(),
        });
        for s in &steps {
            if s.hyperplane.alpha.dot(&c_star)?.is_zero() {
                return Err(Error::Internal(
                    "running vector annihilated by a processed set".into(),
                ));
            }
        }
    }

    let mut taus = Vec::with_capacity(steps.len());
    for s in &steps {
        taus.push((s.hyperplane.alpha.dot(&c_star)?, s.hyperplane.lambda));
    }
    let theta = f
        .elements()
        .find(|&th| taus.iter().all(|&(t, l)| th * t != l))
        .ok_or_else(|| Error::Internal("no admissible final scalar".into()))?;
    let c = c_star.scale(theta);

    let q_old = spec.q_matrix();
    let mut cols = Vec::with_capacity(n + 1);
    for i in 0..n {
        let last = if i < omega { c.entries()[i] } else { 0 };
        cols.push(q_old.column(i).extended(last));
    }
    cols.push(Vector::unit(f, n + 1, n));
    let q_new = matrix_of_columns(f, n + 1, &cols)?;
    if q_new.rank() != n + 1 {
        return Err(Error::Internal("lifted matrix is singular".into()));
    }
    let out = verified(
        net,
        SecureCodeSpec::new(net, larger.clone(), q_new, omega, level + 1)?,
    )?;
    Ok(IncrementOutcome {
        spec: out,
        trace: IncrementTrace {
            dependent: cls.dependent,
            steps,
            c_star,
            theta,
            c,
        },
    })
}

/// Field-size bound for [`fixed_dimension`] at dimension `n`:
/// `max(|T|, |A_r| for 1 <= r <= n - 1)`.
pub fn fixed_dimension_bound(net: &Network, n: usize) -> Result<usize> {
    let mut bound = net.sinks().len();
    for r in 1..n {
        bound = bound.max(net.enumerate_primary_sets(r)?.len());
    }
    Ok(bound)
}

/// One invertible `Q` on `base` such that for every `r` the first `n - r`
/// columns meet `L_A` trivially for all primary sets of size `r`.
pub fn fixed_dimension(net: &Network, base: &LinearNetworkCode) -> Result<Matrix> {
    fixed_dimension_with(net, base, FieldGuard::Enforce)
}

pub fn fixed_dimension_with(
    net: &Network,
    base: &LinearNetworkCode,
    guard: FieldGuard,
) -> Result<Matrix> {
    let n = base.dimension();
    if n > net.c_min() {
        return Err(Error::LevelOutOfRange {
            level: n,
            max: net.c_min(),
        });
    }
    let f = base.field();
    let bound = fixed_dimension_bound(net, n)?;
    require_field_if(guard, f, bound)?;
    let mut cols: Vec<Vector> = Vec::with_capacity(n);
    for i in 1..=n {
        let sets = net.enumerate_primary_sets(n - i)?;
        let avoid = shifted_wiretap_spaces(base, &cols, &sets)?;
        cols.push(
            pick_vector_avoiding(f, n, &avoid).map_err(|_| Error::FieldTooSmall {
                q: f.order(),
                bound,
            })?,
        );
    }
    let q = matrix_of_columns(f, n, &cols)?;
    for report in check_all_pairs(net, base, &q)? {
        if !report.passed() {
            return Err(Error::Internal(format!(
                "shared matrix fails at pair ({}, {})",
                report.rate, report.level
            )));
        }
    }
    Ok(q)
}

/// The specs `(n - r, r)`, `r = 0..=n`, all sharing the matrix from
/// [`fixed_dimension`].
pub fn fixed_dimension_specs(
    net: &Network,
    base: &LinearNetworkCode,
) -> Result<Vec<SecureCodeSpec>> {
    fixed_dimension_specs_with(net, base, FieldGuard::Enforce)
}

pub fn fixed_dimension_specs_with(
    net: &Network,
    base: &LinearNetworkCode,
    guard: FieldGuard,
) -> Result<Vec<SecureCodeSpec>> {
    let q = fixed_dimension_with(net, base, guard)?;
    let n = base.dimension();
    (0..=n)
        .map(|r| {
            verified(
                net,
                SecureCodeSpec::new(net, base.clone(), q.clone(), n - r, r)?,
            )
        })
        .collect()
}

/// Rate-`rate` specs at every level `0..=D - rate`, where `D` is the
/// dimension of `top`; each member lifts the previous one, so all share the
/// intermediate kernels of `top`.
pub fn family_fixed_rate(
    net: &Network,
    top: &LinearNetworkCode,
    rate: usize,
) -> Result<CodeFamily> {
    let d = top.dimension();
    if rate > d {
        return Err(Error::LevelOutOfRange {
            level: rate,
            max: d,
        });
    }
    require_field(top.field(), net.sinks().len())?;
    let mut members = vec![SecureCodeSpec::plain(
        net,
        top.truncate(net, rate)?,
        rate,
        0,
    )?];
    for n in rate..d {
        let larger = top.truncate(net, n + 1)?;
        let next = increment_security_level(net, members.last().expect("nonempty"), &larger)?;
        members.push(next.spec);
    }
    Ok(CodeFamily { members })
}

/// How a region family is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionStrategy {
    /// For each rate, climb the levels by repeated increments.
    RateChains,
    /// For each dimension, one shared matrix for all pairs.
    SharedDimension,
}

impl RegionStrategy {
    pub fn tag(self) -> &'static str {
        match self {
            RegionStrategy::RateChains => "construction-2",
            RegionStrategy::SharedDimension => "construction-3",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "construction-2" => Ok(RegionStrategy::RateChains),
            "construction-3" => Ok(RegionStrategy::SharedDimension),
            "construction-1" => Err(Error::Unsupported(
                "construction-1 needs the fixed-level rate-lowering algorithm, which is not implemented; use construction-2 or construction-3".into(),
            )),
            other => Err(Error::Unsupported(format!("unknown construction tag `{other}`"))),
        }
    }
}

/// Specs for every `(ω, r)` with `ω + r <= C_min`.
#[derive(Clone, Debug)]
pub struct RegionFamily {
    pub strategy: RegionStrategy,
    pub c_min: usize,
    pub members: BTreeMap<(usize, usize), SecureCodeSpec>,
}

impl RegionFamily {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.members.keys().copied().collect()
    }

    pub fn to_family(&self) -> CodeFamily {
        CodeFamily {
            members: self.members.values().cloned().collect(),
        }
    }

    pub fn is_local_encoding_preserving(&self, net: &Network) -> bool {
        self.to_family().is_local_encoding_preserving(net)
    }
}

/// Field-size bound for [`region_family`]:
/// `max(|T|, |A_r| for 1 <= r <= C_min - 1)`.
pub fn region_bound(net: &Network) -> Result<usize> {
    fixed_dimension_bound(net, net.c_min())
}

pub fn region_family(
    net: &Network,
    top: &LinearNetworkCode,
    strategy: RegionStrategy,
) -> Result<RegionFamily> {
    let c_min = net.c_min();
    if top.dimension() != c_min {
        return Err(Error::ShapeMismatch(format!(
            "seed code has dimension {}, expected C_min = {c_min}",
            top.dimension()
        )));
    }
    require_field(top.field(), region_bound(net)?)?;
    // Also rejects a seed that is not decodable.
    truncation_family(net, top)?;
    let mut members = BTreeMap::new();
    match strategy {
        RegionStrategy::RateChains => {
            for rate in 0..=c_min {
                for spec in family_fixed_rate(net, top, rate)?.members {
                    members.insert((spec.rate(), spec.level()), spec);
                }
            }
        }
        RegionStrategy::SharedDimension => {
            for n in 0..=c_min {
                for spec in fixed_dimension_specs(net, &top.truncate(net, n)?)? {
                    members.insert((spec.rate(), spec.level()), spec);
                }
            }
        }
    }
    let fam = RegionFamily {
        strategy,
        c_min,
        members,
    };
    if !fam.is_local_encoding_preserving(net) {
        return Err(Error::Internal(
            "family members disagree on an intermediate kernel".into(),
        ));
    }
    Ok(fam)
}

/// A decodable `n`-dimensional code, `n <= C_min`, built greedily along
/// `n` edge-disjoint paths per sink: each edge on some path combines only
/// the path predecessors, with coefficients keeping every sink's current
/// path frontier independent. Requires `q > |T|`.
pub fn generate_multicast_code(net: &Network, n: usize) -> Result<LinearNetworkCode> {
    if n > net.c_min() {
        return Err(Error::LevelOutOfRange {
            level: n,
            max: net.c_min(),
        });
    }
    let f = net.field();
    require_field(f, net.sinks().len())?;
    let sinks = net.sinks();
    let e_count = net.edge_count();
    // Per sink: predecessor of each path edge; imaginary input j is encoded
    // as `e_count + j`.
    let mut pred: Vec<Vec<Option<usize>>> = vec![vec![None; e_count]; sinks.len()];
    for (ti, &t) in sinks.iter().enumerate() {
        for (j, path) in net.edge_disjoint_paths(t, n).iter().enumerate() {
            let mut prev = e_count + j;
            for &e in path {
                pred[ti][e] = Some(prev);
                prev = e;
            }
        }
    }
    let kernel_of = |global: &[Vector], d: usize| -> Vector {
        if d >= e_count {
            Vector::unit(f, n, d - e_count)
        } else {
            global[d].clone()
        }
    };
    // Frontier of each sink: path slot -> current edge (or imaginary input).
    let mut frontier: Vec<Vec<usize>> = (0..sinks.len())
        .map(|_| (0..n).map(|j| e_count + j).collect())
        .collect();
    let mut global: Vec<Vector> = vec![Vector::zeros(f, n); e_count];
    // coeffs[e]: (input, coefficient) pairs feeding edge e.
    let mut coeffs: Vec<Vec<(usize, u32)>> = vec![Vec::new(); e_count];

    for &e in net.edge_order() {
        let mut inputs: Vec<usize> = (0..sinks.len()).filter_map(|ti| pred[ti][e]).collect();
        inputs.sort_unstable();
        inputs.dedup();
        if inputs.is_empty() {
            continue;
        }
        let p = inputs.len();
        let in_kernels: Vec<Vector> = inputs.iter().map(|&d| kernel_of(&global, d)).collect();
        let combo = Matrix::from_columns(f, n, &in_kernels.iter().collect::<Vec<_>>())?;
        // For each sink using e, the coefficient vectors that would land in
        // the span of the rest of its frontier.
        let mut bad = Vec::new();
        for ti in 0..sinks.len() {
            let Some(d) = pred[ti][e] else { continue };
            let rest: Vec<Vector> = frontier[ti]
                .iter()
                .filter(|&&g| g != d)
                .map(|&g| kernel_of(&global, g))
                .collect();
            let mut cols: Vec<&Vector> = Vec::new();
            let combo_cols = combo.columns();
            cols.extend(combo_cols.iter());
            cols.extend(rest.iter());
            let sys = Matrix::from_columns(f, n, &cols)?;
            let kernel: Vec<Vector> = sys
                .nullspace_basis()
                .iter()
                .map(|v| v.truncated(p))
                .collect();
            bad.push(Subspace::span(f, p, &kernel)?);
        }
        let strategy = if (f.order() as u64)
            .checked_pow(p as u32)
            .is_some_and(|s| s <= 1 << 20)
        {
            PickStrategy::Lexicographic
        } else {
            PickStrategy::Seeded(e as u64)
        };
        let kappa =
            pick_vector_avoiding_with(f, p, &bad, strategy).map_err(|_| Error::FieldTooSmall {
                q: f.order(),
                bound: sinks.len(),
            })?;
        global[e] = combo.mul_vec(&kappa)?;
        coeffs[e] = inputs
            .iter()
            .copied()
            .zip(kappa.entries().iter().copied())
            .collect();
        for ti in 0..sinks.len() {
            if let Some(d) = pred[ti][e] {
                let slot = frontier[ti]
                    .iter()
                    .position(|&g| g == d)
                    .expect("on frontier");
                frontier[ti][slot] = e;
            }
        }
    }

    let mut kernels = Vec::new();
    for v in net.coding_nodes() {
        let rows: Vec<usize> = if v == net.source() {
            (0..n).map(|j| e_count + j).collect()
        } else {
            net.in_edges(v).to_vec()
        };
        let outs = net.out_edges(v);
        let mut k = Matrix::zeros(f, rows.len(), outs.len());
        for (j, &e) in outs.iter().enumerate() {
            for &(d, c) in &coeffs[e] {
                let i = rows
                    .iter()
                    .position(|&r| r == d)
                    .expect("input enters the tail");
                k.set(i, j, c as u64);
            }
        }
        kernels.push((v, k));
    }
    let code = LinearNetworkCode::new(net, n, kernels)?;
    if !code.is_decodable(net) {
        return Err(Error::Internal("greedy code is not decodable".into()));
    }
    Ok(code)
}
