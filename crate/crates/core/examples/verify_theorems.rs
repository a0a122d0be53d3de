//! A small seeded run of the verification suite.
use sepmult::suite::{run_suite, SuiteConfig};

fn main() -> sepmult::Result<()> {
    let config = SuiteConfig::from_json(
        r#"{"groups": ["cyclic(4)", "symmetric(3)"], "p_values": [1, 2], "trials": 40, "seed": 5, "schur_dims": [2, 3], "random_symbols": 5}"#,
    )?;
    let report = run_suite(&config)?;
    print!("{}", report.summary());
    println!("exit code {}", report.exit_code());
    Ok(())
}
