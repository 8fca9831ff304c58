//! Codebreaker strategy and verification tools for black-peg Mastermind
//! without color repetition.
//!
//! The game: a codemaker fixes a secret code of `n` pairwise-distinct colors
//! from `1..=k` (`k >= n`); the codebreaker repeatedly guesses codes of the
//! same shape and only learns, per guess, at how many positions it agrees
//! with the secret. For `k = n` secrets and guesses are permutations in
//! one-line form.
//!
//! The implemented strategy opens with `k - 1` cyclic shifts of the identity
//! code. Their answers already pin the last shift's answer (the answers
//! across the whole family always sum to `n`) and seed a per-family ledger
//! of open matches. From there, each still-unknown position is isolated by a
//! binary search whose probe guesses splice an *active* family code onto its
//! cyclic successor — chosen so the successor contributes no matches and
//! each answer cleanly says "a match lies left of the probe". The last two
//! positions follow from the ledger directly. The query count is
//! `O(n log n)` plus the `k - 1` opening guesses; exact envelopes live in
//! [`analysis::bounds`].
//!
//! # Modules
//!
//! - [`codes`]: game configurations, repetition-free codes, partial
//!   solutions, black/white feedback, the shift family, random secrets.
//! - [`oracle`]: the [`oracle::Codemaker`] trait with in-memory and
//!   interactive (stdin/stdout) implementations, guess validation, query
//!   budgets and JSON transcripts.
//! - [`solver`]: the codebreaker itself — [`solver::solve`] plus observer
//!   and tracing hooks.
//! - [`analysis`]: exhaustive verification, consistency counting, exact
//!   combinatorics, query bounds and the search-space-reduction experiment.
//! - [`cli`]: the `permind` binary's subcommands.
//!
//! # Example
//!
//! ```
//! use permind::{GameConfig, StaticCodemaker, solve};
//!
//! let config = GameConfig::new(4, 4)?;
//! let secret = config.validate_code(&[2, 1, 4, 3])?;
//! let mut codemaker = StaticCodemaker::new(config, secret)?;
//! let transcript = solve(&mut codemaker)?;
//! assert!(transcript.solved);
//! assert_eq!(transcript.secret.unwrap().as_slice(), &[2, 1, 4, 3]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! Runnable walkthroughs for every major capability are in `examples/`.

pub mod analysis;
pub mod cli;
pub mod codes;
pub mod oracle;
pub mod solver;

pub use codes::{
    black, parse_colors, random_code, shift_family, white, Code, CodeError, Feedback, GameConfig,
    PartialSolution, ShiftFamily,
};
pub use oracle::{
    Codemaker, Guarded, InteractiveCodemaker, OracleError, QueryBudget, StaticCodemaker,
    Transcript, TranscriptEntry,
};
pub use solver::{
    active_pair, choose_pivot, open_matches, solve, solve_with, ActivePair, Phase, PivotContext,
    SolveError, SolveObserver, SolveOptions, SolveRun, SolverState,
};
pub use analysis::{
    bounds, count_consistent, enumerate_secrets, fixed_point_distribution, reduction_factor,
    verify_exhaustive, verify_sampled, AnalysisError, QueryBounds, ReductionResult,
    SecondQueryMode, VerificationReport,
};
