//! Ground-truth machinery: secret enumeration, transcript-consistency
//! counting, exact combinatorial distributions, worst-case query bounds,
//! exhaustive solver verification and the search-space-reduction experiment.

use num_integer::Integer;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::codes::{black, random_code, Code, CodeError, GameConfig};
use crate::oracle::{Guarded, QueryBudget, StaticCodemaker, TranscriptEntry};
use crate::solver::{solve_with, SolveOptions};

/// Default limit on how many candidate secrets an enumeration-based
/// operation may visit before failing fast.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{required} candidate secrets exceed the enumeration cap of {cap}")]
    CapExceeded { required: u128, cap: u64 },
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Streams every repetition-free code of `config` exactly once, in
/// lexicographic order.
#[derive(Debug)]
pub struct SecretEnumerator {
    config: GameConfig,
    current: Vec<u32>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

/// Starts an exhaustive enumeration, failing fast when the space is larger
/// than `cap`.
pub fn enumerate_secrets(config: GameConfig, cap: u64) -> Result<SecretEnumerator, AnalysisError> {
    let required = config.code_space().unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(AnalysisError::CapExceeded { required, cap });
    }
    Ok(SecretEnumerator {
        config,
        current: Vec::new(),
        used: vec![false; config.k + 1],
        started: false,
        done: false,
    })
}

impl Iterator for SecretEnumerator {
    type Item = Code;

    fn next(&mut self) -> Option<Code> {
        let (n, k) = (self.config.n, self.config.k);
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.current = (1..=n as u32).collect();
            for c in 1..=n {
                self.used[c] = true;
            }
            return Some(Code::from_vec_unchecked(self.current.clone()));
        }
        // Advance the rightmost position that still has a larger unused
        // color, then refill the suffix with the smallest unused colors.
        let mut i = n;
        while i > 0 {
            i -= 1;
            let cur = self.current[i] as usize;
            self.used[cur] = false;
            if let Some(next) = (cur + 1..=k).find(|&c| !self.used[c]) {
                self.current[i] = next as u32;
                self.used[next] = true;
                let mut fill = i + 1;
                let mut c = 1;
                while fill < n {
                    if !self.used[c] {
                        self.current[fill] = c as u32;
                        self.used[c] = true;
                        fill += 1;
                    }
                    c += 1;
                }
                return Some(Code::from_vec_unchecked(self.current.clone()));
            }
        }
        self.done = true;
        None
    }
}

/// Number of secrets consistent with every recorded guess/answer pair.
pub fn count_consistent(
    config: GameConfig,
    entries: &[TranscriptEntry],
    cap: u64,
) -> Result<u64, AnalysisError> {
    let mut count = 0u64;
    for candidate in enumerate_secrets(config, cap)? {
        let consistent = entries
            .iter()
            .all(|e| black(&e.guess, &candidate).map(|b| b == e.black).unwrap_or(false));
        if consistent {
            count += 1;
        }
    }
    Ok(count)
}

/// Exact factorial; supported up to 33! (fits in u128).
pub fn factorial(n: usize) -> u128 {
    assert!(n <= 33, "factorial overflows u128 beyond 33");
    (1..=n as u128).product()
}

/// Exact subfactorial (derangement count), via the recurrence
/// `D(n) = (n-1) * (D(n-1) + D(n-2))`.
pub fn subfactorial(n: usize) -> u128 {
    assert!(n <= 33, "subfactorial overflows u128 beyond 33");
    match n {
        0 => 1,
        1 => 0,
        _ => {
            let (mut prev2, mut prev1) = (1u128, 0u128);
            for m in 2..=n as u128 {
                let next = (m - 1) * (prev1 + prev2);
                prev2 = prev1;
                prev1 = next;
            }
            prev1
        }
    }
}

fn binomial(n: usize, b: usize) -> u128 {
    factorial(n) / (factorial(b) * factorial(n - b))
}

/// Count of permutations of `n` elements with exactly `b` fixed points, for
/// `b = 0..=n`: `C(n, b) * D(n - b)`. Exact for `n <= 20`.
pub fn fixed_point_distribution(n: usize) -> Vec<u128> {
    assert!(n <= 20, "exact distribution supported up to n = 20");
    (0..=n).map(|b| binomial(n, b) * subfactorial(n - b)).collect()
}

/// Smallest `l` with `2^l >= n`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Worst-case query bounds for a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QueryBounds {
    /// The strategy's published worst case: `(n-3)*ceil(log2 n) + floor(5n/2) - 1`
    /// for `k = n`, and `(n-1)*ceil(log2 n) + k + n - 2` for `k > n`.
    pub paper: u64,
    /// The envelope this implementation never exceeds. It differs from the
    /// published bound where the first-position search may cost
    /// `2*ceil(log2 n)` instead of `n/2 + 1` (small `n`) and where the
    /// pivot-less fallback can replace the cheaper pivot search (`k > n`).
    pub implementation: u64,
}

pub fn bounds(config: GameConfig) -> QueryBounds {
    let (n, k) = (config.n as i64, config.k as i64);
    let log = ceil_log2(config.n) as i64;
    if config.k == config.n {
        let paper = ((n - 3) * log + (5 * n) / 2 - 1).max(1) as u64;
        let implementation = if n <= 3 {
            (2 * n) as u64
        } else {
            ((n - 1) + (n / 2 + 1).max(2 * log) + (n - 3) * (1 + log) + 2) as u64
        };
        QueryBounds {
            paper,
            implementation,
        }
    } else {
        let paper = ((n - 1) * log + k + n - 2) as u64;
        let implementation = if n == 1 {
            // k-1 sweep guesses plus the one forced endgame guess.
            k as u64
        } else {
            paper + ((n - 3).max(0) * (log - 1).max(0)) as u64
        };
        QueryBounds {
            paper,
            implementation,
        }
    }
}

/// One incorrectly handled secret.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationFailure {
    pub secret: Code,
    pub reason: String,
}

/// Outcome of running the solver against a set of secrets.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config: GameConfig,
    pub secrets_tested: u64,
    pub failures: Vec<VerificationFailure>,
    pub min_queries: u64,
    pub max_queries: u64,
    pub mean_queries: f64,
    /// Implementation envelope that must never be exceeded.
    pub bound: u64,
    pub bound_violations: u64,
    pub paper_bound: u64,
    /// Games that exceeded the published bound (possible for small `n` and
    /// in fallback-heavy `k > n` games; always zero where the two bounds
    /// coincide).
    pub paper_bound_violations: u64,
    pub max_paper_excess: u64,
    pub fallback_invocations: u64,
}

pub const STATS_CSV_HEADER: &str =
    "n,k,trials,min,mean,max,paper_bound,impl_bound,violations,fallbacks";

impl VerificationReport {
    pub fn all_solved(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.3},{},{},{},{},{}",
            self.config.n,
            self.config.k,
            self.secrets_tested,
            self.min_queries,
            self.mean_queries,
            self.max_queries,
            self.paper_bound,
            self.bound,
            self.bound_violations,
            self.fallback_invocations
        )
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n={} k={}: {} secrets, queries {}..{} (mean {:.3}), \
             impl bound {} ({} violations), paper bound {} ({} over, max excess {}), \
             {} fallbacks, {} failures",
            self.config.n,
            self.config.k,
            self.secrets_tested,
            self.min_queries,
            self.max_queries,
            self.mean_queries,
            self.bound,
            self.bound_violations,
            self.paper_bound,
            self.paper_bound_violations,
            self.max_paper_excess,
            self.fallback_invocations,
            self.failures.len()
        )
    }
}

struct GameStats {
    queries: u64,
    fallbacks: u64,
    failure: Option<String>,
}

fn play_one(config: GameConfig, secret: &Code, budget: Option<u64>) -> GameStats {
    let maker = StaticCodemaker::new(config, secret.clone()).expect("enumerated secrets are valid");
    let opts = || SolveOptions {
        record_transcript: false,
        trace: None,
        observer: None,
    };
    let run = match budget {
        Some(limit) => {
            let mut guarded = Guarded::new(maker, QueryBudget::limited(limit), false);
            solve_with(&mut guarded, opts())
        }
        None => {
            let mut maker = maker;
            solve_with(&mut maker, opts())
        }
    };
    let failure = if let Some(e) = run.error {
        Some(format!("solver error: {e}"))
    } else if !run.solved {
        Some("terminated without solving".into())
    } else if run.secret.as_ref() != Some(secret) {
        Some(format!(
            "final guess {} differs from the secret",
            run.secret.map(|c| c.to_string()).unwrap_or_default()
        ))
    } else {
        None
    };
    GameStats {
        queries: run.queries,
        fallbacks: run.fallback_invocations as u64,
        failure,
    }
}

fn fold_report(
    config: GameConfig,
    games: impl Iterator<Item = (Code, GameStats)>,
) -> VerificationReport {
    let b = bounds(config);
    let mut report = VerificationReport {
        config,
        secrets_tested: 0,
        failures: Vec::new(),
        min_queries: u64::MAX,
        max_queries: 0,
        mean_queries: 0.0,
        bound: b.implementation,
        bound_violations: 0,
        paper_bound: b.paper,
        paper_bound_violations: 0,
        max_paper_excess: 0,
        fallback_invocations: 0,
    };
    let mut total_queries = 0u64;
    for (secret, stats) in games {
        report.secrets_tested += 1;
        total_queries += stats.queries;
        report.min_queries = report.min_queries.min(stats.queries);
        report.max_queries = report.max_queries.max(stats.queries);
        if stats.queries > b.implementation {
            report.bound_violations += 1;
        }
        if stats.queries > b.paper {
            report.paper_bound_violations += 1;
            report.max_paper_excess = report.max_paper_excess.max(stats.queries - b.paper);
        }
        report.fallback_invocations += stats.fallbacks;
        if let Some(reason) = stats.failure {
            report.failures.push(VerificationFailure { secret, reason });
        }
    }
    if report.secrets_tested > 0 {
        report.mean_queries = total_queries as f64 / report.secrets_tested as f64;
    } else {
        report.min_queries = 0;
    }
    report
}

const VERIFY_BATCH: usize = 4096;

/// Runs the solver against every secret of the configuration and reports
/// correctness, query statistics and bound adherence. Secrets are played in
/// parallel; the report is deterministic.
pub fn verify_exhaustive(
    config: GameConfig,
    cap: u64,
    budget: Option<u64>,
) -> Result<VerificationReport, AnalysisError> {
    let mut secrets = enumerate_secrets(config, cap)?;
    let mut games: Vec<(Code, GameStats)> = Vec::new();
    loop {
        let batch: Vec<Code> = secrets.by_ref().take(VERIFY_BATCH).collect();
        if batch.is_empty() {
            break;
        }
        games.extend(
            batch
                .into_par_iter()
                .map(|secret| {
                    let stats = play_one(config, &secret, budget);
                    (secret, stats)
                })
                .collect::<Vec<_>>(),
        );
    }
    Ok(fold_report(config, games.into_iter()))
}

/// Splitmix64; used to derive independent per-trial seeds.
fn mix_seed(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Like [`verify_exhaustive`] but over `trials` seeded random secrets.
pub fn verify_sampled(
    config: GameConfig,
    trials: u64,
    seed: u64,
    budget: Option<u64>,
) -> VerificationReport {
    let games: Vec<(Code, GameStats)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha12Rng::seed_from_u64(mix_seed(seed ^ mix_seed(trial)));
            let secret = random_code(config, &mut rng);
            let stats = play_one(config, &secret, budget);
            (secret, stats)
        })
        .collect();
    fold_report(config, games.into_iter())
}

/// How the second query of the depth-2 reduction experiment is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondQueryMode {
    /// The strategy's own opening: the second query is the first cyclic
    /// shift of the identity.
    Opening,
    /// The codebreaker picks the best second query after seeing the first
    /// answer (maximin).
    Adaptive,
    /// The codebreaker commits one second query before any answer.
    Committed,
}

/// Result of the search-space-reduction experiment: how much the set of
/// consistent secrets is guaranteed to shrink after the first one or two
/// answers, assuming answers that keep the set as large as possible.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionResult {
    pub n: usize,
    pub depth: u8,
    /// Depth 2 only: how the second query was chosen.
    pub second_query: SecondQueryMode,
    /// Total number of secrets (`n!`).
    pub total: u128,
    /// Largest consistent set the answers can preserve under best play.
    pub worst_survivors: u128,
    pub factor_numerator: u128,
    pub factor_denominator: u128,
    /// `total / worst_survivors` as a float.
    pub factor: f64,
    /// Answer sequence attaining the worst case.
    pub witness_answers: Vec<u32>,
    /// Depth 2 only: the second guess used by the witness.
    pub witness_second_guess: Option<Code>,
}

impl ReductionResult {
    pub fn exact_factor(&self) -> Ratio<u128> {
        Ratio::new(self.total, self.worst_survivors)
    }

    fn build(
        n: usize,
        depth: u8,
        second_query: SecondQueryMode,
        total: u128,
        worst_survivors: u128,
        witness_answers: Vec<u32>,
        witness_second_guess: Option<Code>,
    ) -> Self {
        let g = total.gcd(&worst_survivors);
        ReductionResult {
            n,
            depth,
            second_query,
            total,
            worst_survivors,
            factor_numerator: total / g,
            factor_denominator: worst_survivors / g,
            factor: total as f64 / worst_survivors as f64,
            witness_answers,
            witness_second_guess,
        }
    }
}

/// Guaranteed search-space reduction for `k = n` after `depth` (1 or 2)
/// queries, with the first query fixed to the identity code (all first
/// queries are equivalent under color/position relabeling).
///
/// Depth 1 uses the exact fixed-point distribution: the adversary concedes
/// the smallest reduction by answering with the largest feedback class.
/// Depth 2 enumerates second guesses per [`SecondQueryMode`]; in every mode
/// the adversary answers so as to keep the consistent set largest.
pub fn reduction_factor(
    n: usize,
    depth: u8,
    mode: SecondQueryMode,
    cap: u64,
) -> Result<ReductionResult, AnalysisError> {
    assert!(depth == 1 || depth == 2, "depth must be 1 or 2");
    let total = factorial(n);
    if depth == 1 {
        let distribution = fixed_point_distribution(n);
        let (witness, survivors) = distribution
            .iter()
            .enumerate()
            .max_by_key(|&(b, count)| (*count, std::cmp::Reverse(b)))
            .expect("distribution is never empty");
        return Ok(ReductionResult::build(
            n,
            1,
            mode,
            total,
            *survivors,
            vec![witness as u32],
            None,
        ));
    }

    let config = GameConfig::new(n, n)?;
    let perms: Vec<Code> = enumerate_secrets(config, cap)?.collect();
    let identity = &perms[0];
    // Partition by the first answer.
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (idx, y) in perms.iter().enumerate() {
        let b = black(identity, y).expect("same length") as usize;
        classes[b].push(idx);
    }

    if mode == SecondQueryMode::Opening {
        // The strategy's own second guess: the first right shift of the
        // identity. The worst case is simply the largest joint answer class.
        let shift = crate::codes::shift_family(config).code(1);
        let mut worst: Option<(u64, u32, u32)> = None;
        for (b1, class) in classes.iter().enumerate() {
            if class.is_empty() {
                continue;
            }
            let mut histogram = vec![0u64; n + 1];
            for &idx in class {
                histogram[black(&shift, &perms[idx]).expect("same length") as usize] += 1;
            }
            for (b2, &count) in histogram.iter().enumerate() {
                if worst.map_or(true, |(c, ..)| count > c) {
                    worst = Some((count, b1 as u32, b2 as u32));
                }
            }
        }
        let (survivors, b1, b2) = worst.expect("some class is nonempty");
        return Ok(ReductionResult::build(
            n,
            2,
            mode,
            total,
            survivors as u128,
            vec![b1, b2],
            Some(shift),
        ));
    }

    // Adversary's best reply to one second guess against one class: the
    // answer preserving the most candidates.
    let worst_reply = |class: &[usize], second: &Code| -> (u32, u64) {
        let mut histogram = vec![0u64; n + 1];
        for &idx in class {
            let b = black(second, &perms[idx]).expect("same length") as usize;
            histogram[b] += 1;
        }
        let (b2, count) = histogram
            .iter()
            .enumerate()
            .max_by_key(|&(b, count)| (*count, std::cmp::Reverse(b)))
            .expect("histogram is never empty");
        (b2 as u32, *count)
    };

    // Codebreaker's best second guess against one class.
    let best_second = |class: &[usize]| -> (usize, u32, u64) {
        let mut best: Option<(usize, u32, u64)> = None;
        for (guess_idx, second) in perms.iter().enumerate() {
            let (b2, count) = worst_reply(class, second);
            if best.map_or(true, |(_, _, c)| count < c) {
                best = Some((guess_idx, b2, count));
            }
        }
        best.expect("at least one second guess exists")
    };

    let mut worst: Option<(u64, u32, u32, usize)> = None; // survivors, b1, b2, guess
    if mode == SecondQueryMode::Adaptive {
        for (b1, class) in classes.iter().enumerate() {
            if class.is_empty() {
                continue;
            }
            let (guess_idx, b2, survivors) = best_second(class);
            if worst.map_or(true, |(s, ..)| survivors > s) {
                worst = Some((survivors, b1 as u32, b2, guess_idx));
            }
        }
    } else {
        // One committed second guess; the adversary then picks both answers.
        let mut best: Option<(u64, u32, u32, usize)> = None;
        for (guess_idx, second) in perms.iter().enumerate() {
            let mut guess_worst: Option<(u64, u32, u32)> = None;
            for (b1, class) in classes.iter().enumerate() {
                if class.is_empty() {
                    continue;
                }
                let (b2, count) = worst_reply(class, second);
                if guess_worst.map_or(true, |(c, ..)| count > c) {
                    guess_worst = Some((count, b1 as u32, b2));
                }
            }
            let (count, b1, b2) = guess_worst.expect("classes are never all empty");
            if best.map_or(true, |(c, ..)| count < c) {
                best = Some((count, b1, b2, guess_idx));
            }
        }
        worst = best;
    }

    let (survivors, b1, b2, guess_idx) = worst.expect("n >= 1 always yields a class");
    Ok(ReductionResult::build(
        n,
        2,
        mode,
        total,
        survivors as u128,
        vec![b1, b2],
        Some(perms[guess_idx].clone()),
    ))
}
