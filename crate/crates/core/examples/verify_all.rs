//! Every verification suite with the default configuration; prints the
//! summary and exits non-zero if an asserted check fails.

use bounded_orbit::verify::{run_suite, Suite, VerifyConfig};

fn main() -> bounded_orbit::Result<()> {
    let report = run_suite(Suite::All, &VerifyConfig::default())?;
    print!("{}", report.summary());
    if !report.pass {
        std::process::exit(1);
    }
    Ok(())
}
