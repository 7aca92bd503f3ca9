//! Plain-text network, code and manifest files.
//!
//! Networks:
//!
//! ```text
//! field 5
//! source s
//! sink t1
//! edge e1 s t1
//! ```
//!
//! Codes list the local kernels of the base code and optionally the source
//! matrix `Q` (absent means identity). `#` starts a comment everywhere.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::code::{LinearNetworkCode, SecureCodeSpec};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::Matrix;
use crate::network::{Network, NetworkBuilder};

struct Line<'a> {
    no: usize,
    words: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some(Line { no: i + 1, words })
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => parse_err(line, other.to_string()),
    })
}

fn number<T: std::str::FromStr>(line: usize, word: &str, what: &str) -> Result<T> {
    word.parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{word}`")))
}

fn arity(l: &Line, n: usize, usage: &str) -> Result<()> {
    if l.words.len() != n {
        return Err(parse_err(l.no, format!("expected `{usage}`")));
    }
    Ok(())
}

pub fn parse_network(text: &str) -> Result<Network> {
    let mut builder: Option<NetworkBuilder> = None;
    let mut edge_lines: Vec<(String, usize)> = Vec::new();
    for l in lines(text) {
        let kw = l.words[0];
        if kw == "field" {
            arity(&l, 2, "field <q>")?;
            if builder.is_some() {
                return Err(parse_err(l.no, "field declared twice"));
            }
            let q: u64 = number(l.no, l.words[1], "field order")?;
            builder = Some(NetworkBuilder::new(at_line(l.no, Field::new(q))?));
            continue;
        }
        let b = builder
            .as_mut()
            .ok_or_else(|| parse_err(l.no, "the first declaration must be `field <q>`"))?;
        match kw {
            "node" => {
                arity(&l, 2, "node <id>")?;
                b.node(l.words[1]);
            }
            "source" => {
                arity(&l, 2, "source <id>")?;
                at_line(l.no, b.source(l.words[1]).map(|_| ()))?;
            }
            "sink" => {
                arity(&l, 2, "sink <id>")?;
                b.sink(l.words[1]);
            }
            "edge" => {
                arity(&l, 4, "edge <id> <tail> <head>")?;
                at_line(l.no, b.edge(l.words[1], l.words[2], l.words[3]).map(|_| ()))?;
                edge_lines.push((l.words[1].to_string(), l.no));
            }
            other => return Err(parse_err(l.no, format!("unknown declaration `{other}`"))),
        }
    }
    let b = builder.ok_or_else(|| parse_err(1, "missing `field <q>`"))?;
    b.build().map_err(|e| match e {
        Error::Cycle(ref id) => {
            let line = edge_lines
                .iter()
                .find(|(e, _)| e == id)
                .map_or(0, |&(_, n)| n);
            parse_err(line, e.to_string())
        }
        other => other,
    })
}

pub fn read_network(path: &Path) -> Result<Network> {
    parse_network(&fs::read_to_string(path)?)
}

pub fn write_network(net: &Network) -> String {
    let mut out = format!("field {}\n", net.field().order());
    for v in 0..net.node_count() {
        let _ = writeln!(out, "node {}", net.node_name(v));
    }
    let _ = writeln!(out, "source {}", net.node_name(net.source()));
    for &t in net.sinks() {
        let _ = writeln!(out, "sink {}", net.node_name(t));
    }
    for e in net.edges() {
        let _ = writeln!(
            out,
            "edge {} {} {}",
            e.id,
            net.node_name(e.tail),
            net.node_name(e.head)
        );
    }
    out
}

/// A parsed code file: the base code plus whatever of `Q`, rate and level
/// the file declared.
#[derive(Clone, Debug)]
pub struct CodeFile {
    pub code: LinearNetworkCode,
    pub q: Option<Matrix>,
    pub rate: Option<usize>,
    pub level: Option<usize>,
}

impl CodeFile {
    /// The secure code the file describes. A file without rate and level is
    /// read as rate `n`, level 0.
    pub fn spec(&self, net: &Network) -> Result<SecureCodeSpec> {
        let n = self.code.dimension();
        let (rate, level) = match (self.rate, self.level) {
            (Some(w), Some(r)) => (w, r),
            (Some(w), None) => (w, n.saturating_sub(w)),
            (None, Some(r)) => (n.saturating_sub(r), r),
            (None, None) => (n, 0),
        };
        let q = self
            .q
            .clone()
            .unwrap_or_else(|| Matrix::identity(self.code.field(), n));
        SecureCodeSpec::new(net, self.code.clone(), q, rate, level)
    }
}

fn matrix_rows<'a, I>(
    field: Field,
    header: usize,
    rows: usize,
    cols: usize,
    it: &mut std::iter::Peekable<I>,
) -> Result<Matrix>
where
    I: Iterator<Item = Line<'a>>,
{
    let mut data = Vec::with_capacity(rows * cols);
    // An empty matrix has no row lines, even when it has rows.
    let lines_needed = if cols == 0 { 0 } else { rows };
    for i in 0..lines_needed {
        let l = it
            .next()
            .ok_or_else(|| parse_err(header, format!("expected {rows} rows, found {i}")))?;
        if l.words.len() != cols {
            return Err(parse_err(
                l.no,
                format!("expected {cols} entries, found {}", l.words.len()),
            ));
        }
        for w in &l.words {
            let x: u64 = number(l.no, w, "field element")?;
            if x >= field.order() as u64 {
                return Err(parse_err(l.no, format!("{x} is not an element of {field}")));
            }
            data.push(x);
        }
    }
    at_line(header, Matrix::from_rows_shaped(field, rows, cols, &data))
}

pub fn parse_code(net: &Network, text: &str) -> Result<CodeFile> {
    let mut field: Option<Field> = None;
    let mut dim: Option<usize> = None;
    let mut rate = None;
    let mut level = None;
    let mut q = None;
    let mut kernels: Vec<(usize, Matrix)> = Vec::new();
    let mut last_line = 1;
    let mut it = lines(text).peekable();
    while let Some(l) = it.next() {
        last_line = l.no;
        match l.words[0] {
            "field" => {
                arity(&l, 2, "field <q>")?;
                let f = at_line(l.no, Field::new(number(l.no, l.words[1], "field order")?))?;
                if f != net.field() {
                    return Err(parse_err(
                        l.no,
                        format!("code is over {f} but the network is over {}", net.field()),
                    ));
                }
                field = Some(f);
            }
            "dimension" => {
                arity(&l, 2, "dimension <n>")?;
                dim = Some(number(l.no, l.words[1], "dimension")?);
            }
            "rate" => {
                arity(&l, 2, "rate <w>")?;
                rate = Some(number(l.no, l.words[1], "rate")?);
            }
            "level" => {
                arity(&l, 2, "level <r>")?;
                level = Some(number(l.no, l.words[1], "level")?);
            }
            "kernel" | "matrixQ" => {
                let f = field.ok_or_else(|| parse_err(l.no, "`field` must come first"))?;
                let is_kernel = l.words[0] == "kernel";
                let (rows, cols) = if is_kernel {
                    arity(&l, 4, "kernel <node> <rows> <cols>")?;
                    (
                        number(l.no, l.words[2], "row count")?,
                        number(l.no, l.words[3], "column count")?,
                    )
                } else {
                    arity(&l, 3, "matrixQ <n> <n>")?;
                    (
                        number(l.no, l.words[1], "row count")?,
                        number(l.no, l.words[2], "column count")?,
                    )
                };
                let m = matrix_rows(f, l.no, rows, cols, &mut it)?;
                if is_kernel {
                    let v = net
                        .node_id(l.words[1])
                        .ok_or_else(|| parse_err(l.no, format!("unknown node `{}`", l.words[1])))?;
                    if kernels.iter().any(|(u, _)| *u == v) {
                        return Err(parse_err(
                            l.no,
                            format!("kernel for `{}` given twice", l.words[1]),
                        ));
                    }
                    kernels.push((v, m));
                } else if q.replace(m).is_some() {
                    return Err(parse_err(l.no, "matrixQ given twice"));
                }
            }
            other => return Err(parse_err(l.no, format!("unknown declaration `{other}`"))),
        }
    }
    field.ok_or_else(|| parse_err(1, "missing `field <q>`"))?;
    let dim = dim.ok_or_else(|| parse_err(last_line, "missing `dimension <n>`"))?;
    let code = at_line(last_line, LinearNetworkCode::new(net, dim, kernels))?;
    if let Some(m) = &q {
        if m.rows() != dim || m.cols() != dim {
            return Err(parse_err(last_line, format!("matrixQ must be {dim}x{dim}")));
        }
    }
    Ok(CodeFile {
        code,
        q,
        rate,
        level,
    })
}

pub fn read_code(net: &Network, path: &Path) -> Result<CodeFile> {
    parse_code(net, &fs::read_to_string(path)?)
}

fn write_matrix(out: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| m.get(i, j).value().to_string())
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn write_kernels(out: &mut String, net: &Network, code: &LinearNetworkCode) {
    for v in net.coding_nodes() {
        // Empty kernels are implied by the network.
        if let Some(k) = code.kernel(v).filter(|k| k.rows() * k.cols() > 0) {
            let _ = writeln!(out, "kernel {} {} {}", net.node_name(v), k.rows(), k.cols());
            write_matrix(out, k);
        }
    }
}

/// A plain code: no rate, level or `Q`.
pub fn write_code(net: &Network, code: &LinearNetworkCode) -> String {
    let mut out = format!(
        "field {}\ndimension {}\n",
        code.field().order(),
        code.dimension()
    );
    write_kernels(&mut out, net, code);
    out
}

pub fn write_spec(net: &Network, spec: &SecureCodeSpec) -> String {
    let base = spec.base();
    let mut out = format!(
        "field {}\ndimension {}\nrate {}\nlevel {}\n",
        base.field().order(),
        base.dimension(),
        spec.rate(),
        spec.level()
    );
    write_kernels(&mut out, net, base);
    let n = spec.dimension();
    let _ = writeln!(out, "matrixQ {n} {n}");
    write_matrix(&mut out, spec.q_matrix());
    out
}

/// File name of the `(rate, level)` member in a family directory.
pub fn member_file_name(rate: usize, level: usize) -> String {
    format!("code_w{rate}_r{level}.slnc")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub rate: usize,
    pub level: usize,
    pub file: String,
    pub pass: bool,
}

/// The `manifest` file of a family directory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub field: u32,
    pub c_min: usize,
    pub tag: String,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "field {}\nc_min {}\ntag {}\npairs {}\n",
            self.field,
            self.c_min,
            self.tag,
            self.entries.len()
        );
        for e in &self.entries {
            let _ = writeln!(
                out,
                "pair {} {} {} {}",
                e.rate,
                e.level,
                e.file,
                if e.pass { "pass" } else { "fail" }
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Manifest> {
        let (mut field, mut c_min, mut tag, mut count) = (None, None, None, None);
        let mut entries = Vec::new();
        let mut last = 1;
        for l in lines(text) {
            last = l.no;
            match l.words[0] {
                "field" => {
                    arity(&l, 2, "field <q>")?;
                    field = Some(number(l.no, l.words[1], "field order")?);
                }
                "c_min" => {
                    arity(&l, 2, "c_min <c>")?;
                    c_min = Some(number(l.no, l.words[1], "cut capacity")?);
                }
                "tag" => {
                    arity(&l, 2, "tag <name>")?;
                    tag = Some(l.words[1].to_string());
                }
                "pairs" => {
                    arity(&l, 2, "pairs <count>")?;
                    count = Some(number::<usize>(l.no, l.words[1], "pair count")?);
                }
                "pair" => {
                    arity(&l, 5, "pair <rate> <level> <file> <pass|fail>")?;
                    let pass = match l.words[4] {
                        "pass" => true,
                        "fail" => false,
                        other => return Err(parse_err(l.no, format!("bad verdict `{other}`"))),
                    };
                    entries.push(ManifestEntry {
                        rate: number(l.no, l.words[1], "rate")?,
                        level: number(l.no, l.words[2], "level")?,
                        file: l.words[3].to_string(),
                        pass,
                    });
                }
                other => return Err(parse_err(l.no, format!("unknown declaration `{other}`"))),
            }
        }
        let missing = |what: &str| parse_err(last, format!("missing `{what}`"));
        if count.is_some_and(|c| c != entries.len()) {
            return Err(parse_err(last, "pair count does not match the pair lines"));
        }
        Ok(Manifest {
            field: field.ok_or_else(|| missing("field"))?,
            c_min: c_min.ok_or_else(|| missing("c_min"))?,
            tag: tag.ok_or_else(|| missing("tag"))?,
            entries,
        })
    }
}

/// Writes each `(spec, verdict)` as a member file plus the manifest into
/// `dir`, creating it if needed.
pub fn write_family_dir(
    dir: &Path,
    net: &Network,
    tag: &str,
    members: &[(SecureCodeSpec, bool)],
) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(members.len());
    for (spec, pass) in members {
        let file = member_file_name(spec.rate(), spec.level());
        fs::write(dir.join(&file), write_spec(net, spec))?;
        entries.push(ManifestEntry {
            rate: spec.rate(),
            level: spec.level(),
            file,
            pass: *pass,
        });
    }
    let manifest = Manifest {
        field: net.field().order(),
        c_min: net.c_min(),
        tag: tag.to_string(),
        entries,
    };
    fs::write(dir.join("manifest"), manifest.render())?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{relay4, relay4_base3};

    #[test]
    fn network_round_trip() {
        let net = relay4();
        let text = write_network(&net);
        let back = parse_network(&text).unwrap();
        assert_eq!(write_network(&back), text);
        assert_eq!(back.c_min(), 3);
    }

    #[test]
    fn network_errors_carry_lines() {
        let cyclic =
            "field 3\nsource s\nsink t\nedge a s u\n# loop\nedge b u w\nedge c w u\nedge d w t\n";
        match parse_network(cyclic) {
            Err(Error::Parse { line, msg }) => {
                assert!(msg.contains("cycle"), "{msg}");
                assert!([6, 7].contains(&line), "line {line}");
            }
            other => panic!("{other:?}"),
        }
        let bad = [
            ("source s\n", 1),
            ("field 4\n", 1),
            ("field 5\nsource s\nsink t\nedge e1 s\n", 4),
            ("field 5\n\nwire a b\n", 3),
            ("field 5\nsource s\nsource u\n", 3),
        ];
        for (text, want) in bad {
            match parse_network(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn code_round_trip() {
        let net = relay4();
        let c3 = relay4_base3(&net);
        let parsed = parse_code(&net, &write_code(&net, &c3)).unwrap();
        assert_eq!(parsed.code, c3);
        assert!(parsed.q.is_none());
        let spec = parsed.spec(&net).unwrap();
        assert_eq!((spec.rate(), spec.level()), (3, 0));

        let c2 = c3.truncate(&net, 2).unwrap();
        let q = Matrix::from_rows(net.field(), &[vec![1, 1], vec![1, 0]]).unwrap();
        let spec = SecureCodeSpec::new(&net, c2, q, 1, 1).unwrap();
        let text = write_spec(&net, &spec);
        assert!(text.contains("matrixQ 2 2\n1 1\n1 0\n"));
        assert_eq!(parse_code(&net, &text).unwrap().spec(&net).unwrap(), spec);
    }

    #[test]
    fn empty_kernels() {
        let net = parse_network("field 3\nsource s\nsink t\nedge a s t\nedge b s v\n").unwrap();
        let code = crate::construct::generate_multicast_code(&net, 1).unwrap();
        let text = write_code(&net, &code);
        assert!(!text.contains("kernel v"));
        assert_eq!(parse_code(&net, &text).unwrap().code, code);
        let explicit = format!("{text}kernel v 1 0\n");
        assert_eq!(parse_code(&net, &explicit).unwrap().code, code);
    }

    #[test]
    fn code_errors() {
        let net = relay4();
        let good = write_code(&net, &relay4_base3(&net));
        let cases = [
            good.replace("field 5", "field 7"),
            good.replace("kernel v3 2 1", "kernel v3 1 2"),
            good.replace("kernel v1", "kernel zz"),
            good.replace("1 1 2 2", "1 1 2 9"),
            good.replace("dimension 3\n", ""),
            format!("{good}matrixQ 2 2\n1 0\n0 1\n"),
        ];
        for text in &cases {
            assert!(
                matches!(parse_code(&net, text), Err(Error::Parse { .. })),
                "{text}"
            );
        }
    }

    #[test]
    fn manifest_round_trip() {
        let m = Manifest {
            field: 11,
            c_min: 3,
            tag: "construction-3".into(),
            entries: vec![
                ManifestEntry {
                    rate: 0,
                    level: 0,
                    file: member_file_name(0, 0),
                    pass: true,
                },
                ManifestEntry {
                    rate: 1,
                    level: 2,
                    file: member_file_name(1, 2),
                    pass: false,
                },
            ],
        };
        let text = m.render();
        assert!(text.contains("pair 1 2 code_w1_r2.slnc fail\n"));
        assert_eq!(Manifest::parse(&text).unwrap(), m);
        assert!(!m.all_pass());
    }
}
