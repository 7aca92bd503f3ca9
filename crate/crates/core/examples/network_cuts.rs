//! Parse a network, print its cut capacities and primary edge subsets.

use slnc::format::parse_network;

fn main() -> slnc::Result<()> {
    let net = parse_network(include_str!("../data/relay4.net"))?;
    for &(t, c) in &net.cut_profile().per_sink {
        println!("sink {} has cut capacity {c}", net.node_name(t));
    }
    println!("C_min = {}", net.c_min());
    for r in 1..=net.c_min() {
        let sets = net.enumerate_primary_sets(r)?;
        let shown: Vec<String> = sets
            .iter()
            .map(|a| format!("{{{}}}", net.format_edge_set(a)))
            .collect();
        println!(
            "primary sets of size {r} ({}): {}",
            sets.len(),
            shown.join(" ")
        );
    }
    // {e5,e6} is not primary: one edge upstream already cuts it off.
    let a = net.edge_set_from_ids(&["e5", "e6"])?;
    let cut = net.primary_min_cut(&a)?;
    println!(
        "primary min cut of {{e5,e6}} is {{{}}}",
        net.format_edge_set(&cut)
    );
    Ok(())
}
