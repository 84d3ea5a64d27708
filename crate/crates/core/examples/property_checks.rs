//! Runs every property suite at a small budget and prints the counters.

use modp_langlands::checks::{run_suite, CheckConfig, Suite};

fn main() -> modp_langlands::Result<()> {
    let mut cfg = CheckConfig::new(3);
    cfg.samples = 20;
    for suite in Suite::ALL {
        let rep = run_suite(suite, &cfg)?;
        println!("{} ({:.2}s)", suite.name(), rep.seconds);
        for prop in &rep.properties {
            println!(
                "  {:<36} checked {:>6}  skipped {:>4}  violations {}",
                prop.name, prop.checked, prop.skipped, prop.violations
            );
        }
    }
    Ok(())
}
