//! Check the universal noise-disturbance relation on seeded random models.

use qmeasure::cli::{run_uup, SuiteConfig, SuiteReport};

pub fn run() -> qmeasure::Result<SuiteReport> {
    let config = SuiteConfig {
        count: 200,
        seed: 7,
        ..Default::default()
    };
    run_uup(&config)
}

pub fn main() -> qmeasure::Result<()> {
    let report = run()?;
    println!("models checked: {}", report.count);
    println!("pass={} fail={}", report.pass, report.fail);
    println!("smallest slack: {:?}", report.min_slack);
    Ok(())
}
