//! Small shared helpers: compensated summation, deterministic fan-out over
//! index ranges, and the worker-count resolution used by grid sweeps.

/// Kahan-compensated sum. Panel and grid contributions are accumulated in a
/// fixed order so results are reproducible bit-for-bit.
pub fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Maps `f` over `0..n` on up to `threads` scoped workers, preserving index
/// order in the output. Chunks are contiguous, so the result is identical to
/// the sequential map regardless of the worker count.
pub fn par_map<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.max(1).min(n.max(1));
    if threads <= 1 || n < 2 {
        return (0..n).map(f).collect();
    }
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(threads);
    std::thread::scope(|scope| {
        for (i, slots) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            let start = i * chunk;
            scope.spawn(move || {
                for (j, slot) in slots.iter_mut().enumerate() {
                    *slot = Some(f(start + j));
                }
            });
        }
    });
    out.into_iter()
        .map(|s| s.expect("worker filled slot"))
        .collect()
}

/// Resolves the worker count: an explicit request wins, then the
/// `TAUBERKIT_THREADS` environment variable, then the machine parallelism.
pub fn worker_threads(requested: Option<usize>) -> usize {
    if let Some(n) = requested {
        return n.max(1);
    }
    if let Ok(v) = std::env::var("TAUBERKIT_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        num += (xi - mx) * (yi - my);
        den += (xi - mx) * (xi - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_matches_sequential_for_any_thread_count() {
        let f = |i: usize| (i as f64).sqrt() * 3.0 - 1.0;
        let seq: Vec<f64> = (0..97).map(f).collect();
        for threads in [1, 2, 3, 8, 200] {
            assert_eq!(par_map(97, threads, f), seq);
        }
        assert!(par_map(0, 4, f).is_empty());
    }

    #[test]
    fn slope_of_exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 3.0).collect();
        assert!((ls_slope(&x, &y) - 2.5).abs() < 1e-12);
    }
}
