//! One source matrix that serves every (rate, level) split of a fixed
//! dimension.

use slnc::construct::{fixed_dimension_with, FieldGuard};
use slnc::format::{parse_code, parse_network};
use slnc::secure::check_all_pairs;
use slnc::Error;

fn main() -> slnc::Result<()> {
    let net = parse_network(include_str!("../data/relay4.net"))?;
    let c3 = parse_code(&net, include_str!("../data/relay4_c3.slnc"))?.code;

    // GF(5) is below the sufficient bound, so the default refuses...
    match slnc::construct::fixed_dimension(&net, &c3) {
        Err(Error::FieldTooSmall { q, bound }) => println!("guard: q={q} needs > {bound}"),
        other => println!("unexpected: {other:?}"),
    }
    // ...but the scan itself still finds a matrix here.
    let q = fixed_dimension_with(&net, &c3, FieldGuard::Skip)?;
    println!(
        "Q = {:?}",
        q.columns()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    );
    for rep in check_all_pairs(&net, &c3, &q)? {
        println!(
            "rate {} level {}: {}",
            rep.rate,
            rep.level,
            if rep.passed() { "secure" } else { "leaks" }
        );
    }
    Ok(())
}
