//! Exhaustive ground-truth verification: run the solver against every
//! secret of small configurations and check correctness and query bounds.
//!
//! Run with: cargo run --release --example exhaustive_verification

use permind::analysis::{verify_exhaustive, STATS_CSV_HEADER};
use permind::GameConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{STATS_CSV_HEADER}");
    for (n, k) in [(5, 5), (6, 6), (7, 7), (4, 7), (5, 8), (2, 8)] {
        let config = GameConfig::new(n, k)?;
        let report = verify_exhaustive(config, 10_000_000, None)?;
        println!("{}", report.csv_row());
        assert!(report.all_solved() && report.bound_violations == 0);
    }

    // The same report, in prose.
    let report = verify_exhaustive(GameConfig::new(6, 6)?, 10_000_000, None)?;
    println!("\n{report}");
    Ok(())
}
