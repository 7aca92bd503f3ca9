//! Global kernels of a code, one transmission through it, and decoding at
//! each sink.

use slnc::format::{parse_code, parse_network};
use slnc::Vector;

fn main() -> slnc::Result<()> {
    let net = parse_network(include_str!("../data/relay4.net"))?;
    let code = parse_code(&net, include_str!("../data/relay4_c3.slnc"))?.code;
    for (e, edge) in net.edges().iter().enumerate() {
        println!("f_{} = {}", edge.id, code.global_kernel(e));
    }

    let x = Vector::new(net.field(), &[2, 4, 1]);
    let y = code.transmit(&net, &x)?;
    for &t in net.sinks() {
        let obs: Vec<_> = net.in_edges(t).iter().map(|&e| y[e]).collect();
        let decoded = code.decode_at_sink(&net, t, &obs)?;
        println!("sink {} decodes {decoded}", net.node_name(t));
        assert_eq!(decoded, x);
    }

    // The 2-dimensional truncation keeps every relay's kernel.
    let c2 = code.truncate(&net, 2)?;
    println!("truncation f_e9 = {}", c2.global_kernel(net.edge_id("e9")?));
    Ok(())
}
