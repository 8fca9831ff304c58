//! Solve one game end to end, tracing every guess, then print the
//! transcript JSON.
//!
//! Run with: cargo run --example solve_with_trace

use std::io::Write;

use permind::{solve_with, GameConfig, SolveOptions, StaticCodemaker};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = GameConfig::new(8, 8)?;
    let secret = config.validate_code(&[3, 8, 1, 5, 2, 7, 4, 6])?;
    let mut codemaker = StaticCodemaker::new(config, secret)?;

    let mut stderr = std::io::stderr().lock();
    let run = solve_with(
        &mut codemaker,
        SolveOptions {
            record_transcript: true,
            trace: Some(&mut stderr),
            observer: None,
        },
    );
    stderr.flush()?;

    let transcript = run.transcript.expect("recording was on");
    println!("{}", transcript.to_json());
    eprintln!(
        "\nsolved={} in {} queries (fallback searches: {})",
        run.solved, run.queries, run.fallback_invocations
    );
    Ok(())
}
