//! Small numerical kernels shared by the other modules.

/// Below this length [`pairwise_sum`] falls back to a straight loop.
const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (tree) summation with a split shape that depends only on the
/// slice length, so the result is reproducible no matter how the values were
/// produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Arithmetic mean via [`pairwise_sum`]. Returns NaN for an empty slice.
pub fn pairwise_mean(values: &[f64]) -> f64 {
    pairwise_sum(values) / values.len() as f64
}

/// Composite Simpson weights for `nodes` equispaced points on an interval of
/// length `width`.
///
/// An even number of intervals uses plain Simpson; an odd number closes with
/// the 3/8 rule on the last three intervals. Two nodes degrade to the
/// trapezoid rule. Panics if `nodes < 2`.
pub fn simpson_weights(nodes: usize, width: f64) -> Vec<f64> {
    assert!(nodes >= 2, "Simpson weights need at least two nodes");
    let intervals = nodes - 1;
    let h = width / intervals as f64;
    let mut w = vec![0.0; nodes];
    if intervals == 1 {
        w[0] = h / 2.0;
        w[1] = h / 2.0;
        return w;
    }
    let simpson_intervals = if intervals % 2 == 0 {
        intervals
    } else {
        intervals - 3
    };
    for i in (0..simpson_intervals).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if simpson_intervals != intervals {
        let s = simpson_intervals;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    w
}

/// Integrates `f` over `[a, b]` with composite Simpson on `intervals`
/// subintervals (rounded up to an even count).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let intervals = (intervals.max(2) + 1) & !1;
    let h = (b - a) / intervals as f64;
    let terms: Vec<f64> = (0..=intervals)
        .map(|i| {
            let weight = if i == 0 || i == intervals {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            weight * f(a + i as f64 * h)
        })
        .collect();
    pairwise_sum(&terms) * h / 3.0
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns `(argmax, max)` after `iterations` bracket reductions.
pub fn golden_section_max<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    iterations: usize,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iterations {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
