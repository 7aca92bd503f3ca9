//! Families covering every (rate, level) with rate + level <= C_min, all
//! sharing the relay kernels, written out as a directory with a manifest.

use slnc::construct::{family_fixed_rate, generate_multicast_code, region_family, RegionStrategy};
use slnc::format::{parse_network, write_family_dir, write_network};
use slnc::secure::check_secure_subspace;

fn main() -> slnc::Result<()> {
    let small = parse_network(include_str!("../data/relay4.net"))?;
    let text = write_network(&small).replace("field 5", "field 11");
    let net = parse_network(&text)?;
    let top = generate_multicast_code(&net, net.c_min())?;

    let out = std::env::temp_dir().join("slnc-region-example");
    for strategy in [RegionStrategy::RateChains, RegionStrategy::SharedDimension] {
        let fam = region_family(&net, &top, strategy)?;
        let members: Vec<_> = fam
            .members
            .values()
            .map(|s| Ok((s.clone(), check_secure_subspace(&net, s)?.passed())))
            .collect::<slnc::Result<_>>()?;
        let manifest = write_family_dir(&out.join(strategy.tag()), &net, strategy.tag(), &members)?;
        println!(
            "{}: {} pairs, shared relay kernels: {}, all pass: {}",
            strategy.tag(),
            fam.members.len(),
            fam.is_local_encoding_preserving(&net),
            manifest.all_pass()
        );
    }
    println!("written under {}", out.display());

    // A single rate over GF(5), using the increment chain.
    let c3 = generate_multicast_code(&small, 3)?;
    let fam = family_fixed_rate(&small, &c3, 1)?;
    println!("rate-1 family over GF(5): {:?}", fam.pairs());
    Ok(())
}
