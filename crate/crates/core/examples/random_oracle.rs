//! Random small instances checked three ways: subspace criterion,
//! enumeration over primary sets, enumeration over every small set.

use slnc::cli::run_selftest;

fn main() -> slnc::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let s = run_selftest(seed, 100)?;
    println!("seed {seed}: {} cases, {} secure", s.cases, s.secure);
    println!("verifier disagreements: {}", s.verdict_mismatches);
    println!("leaks outside primary sets: {}", s.scope_counterexamples);
    Ok(())
}
