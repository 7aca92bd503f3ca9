//! Raise a rate-1 level-1 code to level 2 without touching any relay, and
//! show every choice the increment made.

use slnc::construct::increment_security_level;
use slnc::format::{parse_code, parse_network};

fn main() -> slnc::Result<()> {
    let net = parse_network(include_str!("../data/relay4.net"))?;
    let c3 = parse_code(&net, include_str!("../data/relay4_c3.slnc"))?.code;
    let spec = parse_code(&net, include_str!("../data/relay4_w1_r1.slnc"))?.spec(&net)?;

    let out = increment_security_level(&net, &spec, &c3)?;
    let t = &out.trace;
    let dependent: Vec<String> = t.dependent.iter().map(|a| net.format_edge_set(a)).collect();
    println!("sets already covered: {}", dependent.join(" | "));
    for step in &t.steps {
        let h = &step.hyperplane;
        println!(
            "A={{{}}} alpha={} lambda={} tau={} -> c*={}",
            net.format_edge_set(&h.set),
            h.alpha,
            h.lambda.value(),
            step.tau.value(),
            step.c_star
        );
    }
    println!("theta={} appended row c={}", t.theta.value(), t.c);
    let q = out.spec.q_matrix();
    for i in 0..q.rows() {
        let row: Vec<String> = (0..q.cols())
            .map(|j| q.get(i, j).value().to_string())
            .collect();
        println!("Q[{i}] = {}", row.join(" "));
    }
    Ok(())
}
