//! The `slnc` command line. All logic lives here so it can be driven from
//! tests with in-memory writers; the binary only forwards `std::env::args`.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 the field
//! is below a construction's size bound.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::{LinearNetworkCode, SecureCodeSpec};
use crate::construct::{
    build_fixed_pair_with, family_fixed_rate, fixed_dimension_specs_with, generate_multicast_code,
    increment_security_level, increment_security_level_unchecked, region_family, FieldGuard,
    RegionStrategy,
};
use crate::error::{Error, Result};
use crate::format::{read_code, read_network, write_family_dir};
use crate::gen::{random_instance, InstanceShape};
use crate::gf::Elem;
use crate::network::Network;
use crate::secure::{check_secure_exhaustive, check_secure_subspace, Scope, SecurityReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FIELD: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "slnc",
    version,
    about = "Secure linear network codes on multicast DAGs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect a network file.
    #[command(subcommand)]
    Net(NetCommand),
    /// Build, verify or exercise codes.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Check the two security verifiers against each other on random
    /// small instances.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum NetCommand {
    /// Nodes, edges, per-sink cut capacities and C_min.
    Info { net: PathBuf },
    /// Primary edge subsets of size R, one per line.
    PrimarySets {
        net: PathBuf,
        #[arg(long = "r")]
        r: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// One (rate, level) pair.
    Pair,
    /// Raise the level of an existing spec by one.
    Increment,
    /// One matrix serving every pair of a fixed dimension.
    FixedDim,
    /// Every level for one rate.
    FamilyRate,
    /// Every pair with rate + level <= C_min, by rate chains.
    RegionC2,
    /// Every pair with rate + level <= C_min, by shared matrices.
    RegionC3,
    /// Region family selected with `--tag`.
    Region,
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Construct secure codes and write them with a manifest into `--out`.
    Construct {
        net: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
        /// Input spec (increment mode).
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Base code; truncated to the needed dimension. Generated when
        /// absent (except for increment, which needs the larger code).
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        rate: Option<usize>,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        tag: Option<String>,
        /// Try pair and fixed-dim constructions below their field bound.
        #[arg(long)]
        allow_small_field: bool,
        /// Skip re-verifying the increment input.
        #[arg(long)]
        unchecked_input: bool,
    },
    /// Check a code against its declared rate and level.
    Verify {
        code: PathBuf,
        net: PathBuf,
        /// Enumerate all inputs instead of the subspace test.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Send one message through the deployed code.
    Transmit {
        code: PathBuf,
        net: PathBuf,
        #[arg(long)]
        message: String,
        #[arg(long, default_value = "")]
        key: String,
        #[arg(long)]
        tap: Option<String>,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::FieldTooSmall { .. } => EXIT_FIELD,
        Error::Internal(_) => EXIT_VERIFY,
        _ => EXIT_INPUT,
    }
}

fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Net(NetCommand::Info { net }) => net_info(&read_network(net)?, out),
        Command::Net(NetCommand::PrimarySets { net, r }) => {
            let net = read_network(net)?;
            for a in net.enumerate_primary_sets(*r)? {
                writeln!(out, "{}", net.format_edge_set(&a))?;
            }
            Ok(EXIT_OK)
        }
        Command::Code(CodeCommand::Construct {
            net,
            mode,
            out: dir,
            input,
            base,
            rate,
            level,
            n,
            tag,
            allow_small_field,
            unchecked_input,
        }) => {
            let net = read_network(net)?;
            let req = ConstructRequest {
                mode: *mode,
                input: input.as_deref(),
                base: base.as_deref(),
                rate: *rate,
                level: *level,
                n: *n,
                tag: tag.as_deref(),
                guard: if *allow_small_field {
                    FieldGuard::Skip
                } else {
                    FieldGuard::Enforce
                },
                check_input: !*unchecked_input,
            };
            construct(&net, &req, dir, out)
        }
        Command::Code(CodeCommand::Verify {
            code,
            net,
            exhaustive,
        }) => {
            let net = read_network(net)?;
            let spec = read_code(&net, code)?.spec(&net)?;
            verify(&net, &spec, *exhaustive, out)
        }
        Command::Code(CodeCommand::Transmit {
            code,
            net,
            message,
            key,
            tap,
        }) => {
            let net = read_network(net)?;
            let spec = read_code(&net, code)?.spec(&net)?;
            transmit(&net, &spec, message, key, tap.as_deref(), out)
        }
        Command::Selftest { seed, cases } => selftest(*seed, *cases, out),
    }
}

fn net_info(net: &Network, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "field {}", net.field().order())?;
    writeln!(out, "nodes {}", net.node_count())?;
    writeln!(out, "edges {}", net.edge_count())?;
    writeln!(out, "source {}", net.node_name(net.source()))?;
    for &(t, c) in &net.cut_profile().per_sink {
        writeln!(out, "sink {} C_t {c}", net.node_name(t))?;
    }
    writeln!(out, "C_min {}", net.c_min())?;
    Ok(EXIT_OK)
}

fn verify(
    net: &Network,
    spec: &SecureCodeSpec,
    exhaustive: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let report = if exhaustive {
        check_secure_exhaustive(
            net,
            spec.deployed(),
            spec.rate(),
            spec.level(),
            Scope::Primary,
        )?
    } else {
        check_secure_subspace(net, spec)?
    };
    let decodable = spec.deployed().is_decodable(net);
    writeln!(
        out,
        "rate {} level {} method {}",
        spec.rate(),
        spec.level(),
        report.method.tag()
    )?;
    out.write_all(report.render(net).as_bytes())?;
    writeln!(out, "decodable {}", if decodable { "yes" } else { "no" })?;
    let ok = decodable && report.passed();
    writeln!(out, "result {}", if ok { "pass" } else { "fail" })?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn parse_symbols(net: &Network, csv: &str, what: &str) -> Result<Vec<Elem>> {
    let f = net.field();
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let v: u64 = s
                .parse()
                .map_err(|_| Error::Unsupported(format!("{what}: `{s}` is not a number")))?;
            if v >= f.order() as u64 {
                return Err(Error::Unsupported(format!(
                    "{what}: {v} is not an element of {f}"
                )));
            }
            Ok(f.elem(v))
        })
        .collect()
}

fn fmt_symbols(xs: impl IntoIterator<Item = Elem>) -> String {
    let parts: Vec<String> = xs.into_iter().map(|x| x.value().to_string()).collect();
    format!("({})", parts.join(","))
}

fn transmit(
    net: &Network,
    spec: &SecureCodeSpec,
    message: &str,
    key: &str,
    tap: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32> {
    let m = parse_symbols(net, message, "message")?;
    let k = parse_symbols(net, key, "key")?;
    let x = spec.source_input(&m, &k)?;
    let tapped = match tap {
        Some(list) => Some(net.parse_edge_set(list)?),
        None => None,
    };
    let code = spec.deployed();
    let y = code.transmit(net, &x)?;
    for (e, edge) in net.edges().iter().enumerate() {
        let mark = if tapped.as_ref().is_some_and(|a| a.contains(e)) {
            " *"
        } else {
            ""
        };
        writeln!(out, "{} {}{mark}", edge.id, y[e].value())?;
    }
    if let Some(a) = &tapped {
        writeln!(
            out,
            "tap {} observes {}",
            net.format_edge_set(a),
            fmt_symbols(a.indices().iter().map(|&e| y[e]))
        )?;
    }
    let mut ok = true;
    for &t in net.sinks() {
        let obs: Vec<Elem> = net.in_edges(t).iter().map(|&e| y[e]).collect();
        match code.decode_at_sink(net, t, &obs) {
            Ok(xt) => {
                let got = &xt.entries()[..spec.rate()];
                let good = got.iter().zip(&m).all(|(&a, b)| a == b.value());
                ok &= good;
                writeln!(
                    out,
                    "sink {} message {} {}",
                    net.node_name(t),
                    fmt_symbols(got.iter().map(|&v| net.field().elem(v as u64))),
                    if good { "ok" } else { "mismatch" }
                )?;
            }
            Err(e) => {
                ok = false;
                writeln!(out, "sink {} cannot decode: {e}", net.node_name(t))?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

/// Options for `code construct`, decoupled from clap.
#[derive(Clone, Debug)]
pub struct ConstructRequest<'a> {
    pub mode: Mode,
    pub input: Option<&'a Path>,
    pub base: Option<&'a Path>,
    pub rate: Option<usize>,
    pub level: Option<usize>,
    pub n: Option<usize>,
    pub tag: Option<&'a str>,
    pub guard: FieldGuard,
    pub check_input: bool,
}

fn need(v: Option<usize>, flag: &str, mode: &str) -> Result<usize> {
    v.ok_or_else(|| Error::Unsupported(format!("--mode {mode} needs {flag}")))
}

/// The `--base` code truncated to `dim`, or a generated code of that
/// dimension.
fn base_code(net: &Network, base: Option<&Path>, dim: usize) -> Result<LinearNetworkCode> {
    match base {
        Some(p) => {
            let code = read_code(net, p)?.code;
            if code.dimension() < dim {
                return Err(Error::ShapeMismatch(format!(
                    "base code has dimension {}, need at least {dim}",
                    code.dimension()
                )));
            }
            code.truncate(net, dim)
        }
        None => generate_multicast_code(net, dim),
    }
}

fn construct(
    net: &Network,
    req: &ConstructRequest,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<i32> {
    let (tag, specs): (&str, Vec<SecureCodeSpec>) = match req.mode {
        Mode::Pair => {
            let rate = need(req.rate, "--rate", "pair")?;
            let level = need(req.level, "--level", "pair")?;
            let base = base_code(net, req.base, rate + level)?;
            (
                "pair",
                vec![build_fixed_pair_with(net, &base, rate, level, req.guard)?],
            )
        }
        Mode::Increment => {
            let input = req
                .input
                .ok_or_else(|| Error::Unsupported("--mode increment needs --in <spec>".into()))?;
            let base = req.base.ok_or_else(|| {
                Error::Unsupported("--mode increment needs --base <larger code>".into())
            })?;
            let spec = read_code(net, input)?.spec(net)?;
            let larger = base_code(net, Some(base), spec.dimension() + 1)?;
            let lifted = if req.check_input {
                increment_security_level(net, &spec, &larger)?
            } else {
                increment_security_level_unchecked(net, &spec, &larger)?
            };
            ("increment", vec![lifted.spec])
        }
        Mode::FixedDim => {
            let n = req.n.unwrap_or(net.c_min());
            let base = base_code(net, req.base, n)?;
            (
                "fixed-dim",
                fixed_dimension_specs_with(net, &base, req.guard)?,
            )
        }
        Mode::FamilyRate => {
            let rate = need(req.rate, "--rate", "family-rate")?;
            let top = base_code(net, req.base, net.c_min())?;
            ("family-rate", family_fixed_rate(net, &top, rate)?.members)
        }
        Mode::RegionC2 | Mode::RegionC3 | Mode::Region => {
            let strategy = match (req.mode, req.tag) {
                (Mode::RegionC2, _) => RegionStrategy::RateChains,
                (Mode::RegionC3, _) => RegionStrategy::SharedDimension,
                (_, Some(t)) => RegionStrategy::from_tag(t)?,
                (_, None) => {
                    return Err(Error::Unsupported("--mode region needs --tag".into()));
                }
            };
            let top = base_code(net, req.base, net.c_min())?;
            let fam = region_family(net, &top, strategy)?;
            (strategy.tag(), fam.members.into_values().collect())
        }
    };
    let mut members = Vec::with_capacity(specs.len());
    for spec in specs {
        let report: SecurityReport = check_secure_subspace(net, &spec)?;
        let pass = report.passed() && spec.deployed().is_decodable(net);
        members.push((spec, pass));
    }
    let manifest = write_family_dir(dir, net, tag, &members)?;
    out.write_all(manifest.render().as_bytes())?;
    Ok(if manifest.all_pass() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

/// Counts from a [`run_selftest`] run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SelftestSummary {
    pub cases: usize,
    pub secure: usize,
    /// Instances where the subspace and enumeration verdicts differ on
    /// some primary set.
    pub verdict_mismatches: usize,
    /// Instances secure on primary sets but leaking on a smaller or
    /// non-primary set.
    pub scope_counterexamples: usize,
}

pub fn run_selftest(seed: u64, cases: usize) -> Result<SelftestSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = InstanceShape::default();
    let mut s = SelftestSummary::default();
    for _ in 0..cases {
        let (net, spec) = random_instance(&mut rng, &shape)?;
        let sub = check_secure_subspace(&net, &spec)?;
        let exh = check_secure_exhaustive(
            &net,
            spec.deployed(),
            spec.rate(),
            spec.level(),
            Scope::Primary,
        )?;
        let agree = sub.verdicts.len() == exh.verdicts.len()
            && sub
                .verdicts
                .iter()
                .zip(&exh.verdicts)
                .all(|(a, b)| a.set == b.set && a.pass == b.pass);
        s.cases += 1;
        s.verdict_mismatches += usize::from(!agree);
        if sub.passed() {
            s.secure += 1;
            let all = check_secure_exhaustive(
                &net,
                spec.deployed(),
                spec.rate(),
                spec.level(),
                Scope::AllSubsets,
            )?;
            s.scope_counterexamples += usize::from(!all.passed());
        }
    }
    Ok(s)
}

fn selftest(seed: u64, cases: usize, out: &mut dyn Write) -> Result<i32> {
    let s = run_selftest(seed, cases)?;
    writeln!(out, "seed {seed}")?;
    writeln!(out, "cases {}", s.cases)?;
    writeln!(out, "secure {}", s.secure)?;
    writeln!(out, "verdict-mismatches {}", s.verdict_mismatches)?;
    writeln!(out, "scope-counterexamples {}", s.scope_counterexamples)?;
    let ok = s.verdict_mismatches == 0 && s.scope_counterexamples == 0;
    writeln!(out, "result {}", if ok { "pass" } else { "fail" })?;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["slnc"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["slnc", "net", "info"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["slnc", "--help"]).0, EXIT_OK);
        let (code, _, err) = run_str(&["slnc", "net", "info", "/nonexistent/x.net"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.starts_with("error: io error"), "{err}");
    }

    #[test]
    fn selftest_small_run() {
        let (code, out, _) = run_str(&["slnc", "selftest", "--seed", "5", "--cases", "20"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("cases 20\n"));
        assert!(out.ends_with("result pass\n"));
    }
}
