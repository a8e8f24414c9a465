//! Chunked map-reduce over index ranges: rayon work stealing when the
//! `parallel` feature is on, a plain loop otherwise or on request.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use crate::error::Result;

/// Scheduling options shared by every enumeration.
#[derive(Clone, Debug, Default)]
pub struct ExecConfig {
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Force the single-threaded path even when built with `parallel`.
    pub sequential: bool,
    /// Report progress to stderr at this interval.
    pub progress: Option<Duration>,
}

impl ExecConfig {
    pub fn sequential() -> Self {
        ExecConfig {
            sequential: true,
            ..Default::default()
        }
    }

    /// Whether work actually runs on more than one thread.
    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && !self.sequential && self.threads != Some(1)
    }
}

struct Progress<'a> {
    label: &'a str,
    total: u64,
    done: AtomicU64,
    start: Instant,
    last_ms: AtomicU64,
    interval: Option<Duration>,
}

impl Progress<'_> {
    fn tick(&self, n: u64) {
        let done = self.done.fetch_add(n, Ordering::Relaxed) + n;
        let Some(interval) = self.interval else { return };
        let now = self.start.elapsed().as_millis() as u64;
        let last = self.last_ms.load(Ordering::Relaxed);
        if now.saturating_sub(last) >= interval.as_millis() as u64
            && self
                .last_ms
                .compare_exchange(last, now, Ordering::Relaxed, Ordering::Relaxed)
                .is_ok()
        {
            eprintln!(
                "[{}] {}/{} ({:.1}%) {:.1}s",
                self.label,
                done,
                self.total,
                100.0 * done as f64 / self.total.max(1) as f64,
                now as f64 / 1000.0
            );
        }
    }
}

fn chunks(total: u64, pieces: u64) -> Vec<Range<u64>> {
    let size = total.div_ceil(pieces.max(1)).max(1 << 12);
    (0..total.div_ceil(size))
        .map(|i| i * size..((i + 1) * size).min(total))
        .collect()
}

/// Folds `work` over `0..total` in contiguous chunks and merges the partial
/// results. `merge` must be associative and commutative for the result to be
/// independent of scheduling.
pub fn map_reduce<T, I, W, M>(cfg: &ExecConfig, label: &str, total: u64, init: I, work: W, merge: M) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    W: Fn(&mut T, Range<u64>) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    let progress = Progress {
        label,
        total,
        done: AtomicU64::new(0),
        start: Instant::now(),
        last_ms: AtomicU64::new(0),
        interval: cfg.progress,
    };
    let run_chunk = |r: Range<u64>| {
        let mut acc = init();
        let n = r.end - r.start;
        work(&mut acc, r);
        progress.tick(n);
        acc
    };

    #[cfg(feature = "parallel")]
    if cfg.is_parallel() {
        use rayon::prelude::*;
        let go = || {
            let pieces = 64 * rayon::current_num_threads() as u64;
            chunks(total, pieces)
                .into_par_iter()
                .map(&run_chunk)
                .reduce(&init, &merge)
        };
        return match cfg.threads {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
                Ok(pool.install(go))
            }
            None => Ok(go()),
        };
    }

    #[cfg(not(feature = "parallel"))]
    if cfg.threads.is_some_and(|n| n > 1) {
        log::warn!("built without the `parallel` feature; ignoring the thread count");
    }
    let pieces = if cfg.progress.is_some() { 256 } else { 1 };
    Ok(chunks(total, pieces).into_iter().map(run_chunk).fold(init(), &merge))
}

/// Applies `f` to every item, in parallel when enabled, keeping input order.
pub fn par_map<T, R, F>(cfg: &ExecConfig, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if cfg.is_parallel() {
        use rayon::prelude::*;
        let go = || items.par_iter().map(&f).collect();
        if let Some(n) = cfg.threads {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                return pool.install(go);
            }
        }
        return go();
    }
    let _ = cfg;
    items.iter().map(f).collect()
}
