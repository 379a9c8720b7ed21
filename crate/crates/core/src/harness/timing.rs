use std::time::Instant;

/// Estimated cost growth when refining a `dimension`-dimensional grid by `factor`.
pub fn time_scaling(factor: f64, dimension: u32) -> f64 {
    factor.powi(dimension as i32)
}

/// Runs `body` once and returns its result with the elapsed wall time in seconds.
pub fn timed<T>(body: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = body();
    (out, start.elapsed().as_secs_f64())
}

/// Runs `body` `reps` times (at least once) and reports the median wall time
/// together with the last result.
pub fn timed_median<T>(reps: usize, mut body: impl FnMut() -> T) -> (T, f64) {
    let reps = reps.max(1);
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let (out, secs) = timed(&mut body);
        times.push(secs);
        last = Some(out);
    }
    (last.expect("at least one repetition"), median(&mut times))
}

/// Median of a nonempty slice (mean of the middle pair for even lengths).
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}
