//! Seeded trial loops, optionally spread over a thread pool.
//!
//! Each trial draws from its own ChaCha stream (`seed`, stream = trial
//! index), so results never depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const THREADS_VAR: &str = "NILCOMMUTE_THREADS";

/// RNG for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Thread cap from the environment; `None` means run serially.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 1)
}

/// Runs `body` for trials `0..trials` and returns the results in trial order.
pub fn map_trials<T, F>(trials: u64, seed: u64, body: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync + Send,
{
    let run = |t: u64| body(t, &mut trial_rng(seed, t));
    match thread_cap() {
        None => (0..trials).map(run).collect(),
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| (0..trials).into_par_iter().map(run).collect()),
            Err(_) => (0..trials).map(run).collect(),
        },
    }
}
