//! Run a verification suite from code, with a tolerance override, and print failures.
//!
//! cargo run --release --example run_suite -- opcalc

use venturi::suites::{run_suite, Suite, SuiteConfig};

fn main() -> venturi::Result<()> {
    let suite: Suite = std::env::args().nth(1).as_deref().unwrap_or("characters").parse()?;
    let mut cfg = SuiteConfig::new(suite);
    cfg.tolerances.apply("wave.eigen=1e-8")?;
    let report = run_suite(&cfg)?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        println!("FAIL {} ({})", c.name, c.paper_ref);
    }
    println!("{}/{} checks passed", report.passed(), report.checks.len());
    Ok(())
}
