//! The subspace criterion against brute-force enumeration, on a secure and
//! an insecure choice of source matrix.

use slnc::format::{parse_code, parse_network};
use slnc::secure::{check_secure_exhaustive, check_secure_subspace, Scope};

fn main() -> slnc::Result<()> {
    let net = parse_network(include_str!("../data/relay4.net"))?;
    for (name, text) in [
        ("mixed Q", include_str!("../data/relay4_w1_r1.slnc")),
        (
            "identity Q",
            include_str!("../data/relay4_w1_r1_identity.slnc"),
        ),
    ] {
        let spec = parse_code(&net, text)?.spec(&net)?;
        let fast = check_secure_subspace(&net, &spec)?;
        let slow = check_secure_exhaustive(
            &net,
            spec.deployed(),
            spec.rate(),
            spec.level(),
            Scope::AllSubsets,
        )?;
        println!(
            "== {name}: subspace {} / exhaustive {}",
            fast.passed(),
            slow.passed()
        );
        print!("{}", fast.render(&net));
        for v in slow.failures() {
            println!(
                "leaks at {{{}}}: {}",
                net.format_edge_set(&v.set),
                v.witness.as_deref().unwrap_or("")
            );
        }
    }
    Ok(())
}
