//! One-dimensional maximization and peak detection on sampled series.

/// `(√5 − 1)/2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..500 {
        if hi - lo <= xtol {
            break;
        }
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Golden-section search followed by bisection on the sign of the
/// central-difference slope.
///
/// Near a smooth maximum the function values are flat to roundoff within
/// `~√ε` of the argmax, which caps plain golden-section accuracy; the slope
/// changes sign linearly there and resolves the argmax much more finely.
pub fn maximize_refined<F>(f: F, lo: f64, hi: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    // The golden-section tolerance is relative to the bracket, so a peak within
    // a few tolerances of an end is unresolved: zoom in around it and repeat.
    let (mut a, mut b) = (lo, hi);
    let mut x0;
    loop {
        let tol = 1e-12 * (b - a).abs().max(f64::MIN_POSITIVE);
        x0 = golden_section_max(&f, a, b, tol).0;
        if (x0 - lo).min(hi - x0) > 1e3 * tol {
            break;
        }
        let (na, nb) = ((x0 - 10.0 * tol).max(lo), (x0 + 10.0 * tol).min(hi));
        if !(nb - na < 0.5 * (b - a)) {
            break;
        }
        (a, b) = (na, nb);
    }
    // Local length scale: distance to the nearer end. A fixed fraction of the
    // bracket would bias the slope when the peak hugs an end.
    let scale = (x0 - lo).min(hi - x0);
    if !(scale > 0.0) {
        return (x0, f(x0));
    }
    let h = 1e-6 * scale;
    let slope = |x: f64| f(x + h) - f(x - h);
    // The golden-section error is absolute, so a peak near an end may sit
    // outside a small relative window: widen until the slope changes sign.
    let mut delta = 1e-5 * scale;
    let (mut left, mut right) = loop {
        let (l, r) = (x0 - delta, x0 + delta);
        if slope(l) > 0.0 && slope(r) < 0.0 {
            break (l, r);
        }
        if delta >= 0.5 * scale {
            return (x0, f(x0));
        }
        delta = (4.0 * delta).min(0.5 * scale);
    };
    for _ in 0..200 {
        let mid = 0.5 * (left + right);
        if mid <= left || mid >= right {
            break;
        }
        if slope(mid) > 0.0 {
            left = mid;
        } else {
            right = mid;
        }
    }
    let x = 0.5 * (left + right);
    (x, f(x))
}

/// Indices of strict 3-point local maxima. Samples below
/// `noise_floor · max(values)` are treated as zero so that underflow jitter
/// in strongly damped series does not register as peaks.
pub fn strict_local_maxima(values: &[f64], noise_floor: f64) -> Vec<usize> {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = if top > 0.0 { noise_floor * top } else { 0.0 };
    let clean = |v: f64| if v.abs() < floor { 0.0 } else { v };
    (1..values.len().saturating_sub(1))
        .filter(|&i| {
            let v = clean(values[i]);
            v > clean(values[i - 1]) && v > clean(values[i + 1])
        })
        .collect()
}

/// Relative floor used by [`strict_local_maxima`] callers in this crate.
pub const PEAK_NOISE_FLOOR: f64 = 1e-12;

/// Refines a grid peak at `grid[i]` by golden-section search between its neighbours.
pub fn refine_peak<F>(f: F, grid: &[f64], i: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    golden_section_max(f, lo, hi, 1e-10 * (hi - lo).max(f64::MIN_POSITIVE))
}

/// Uniform grid of `n` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn refined_search_beats_flatness_limit() {
        let x_star = 0.123_456_789_012;
        let (x, _) = maximize_refined(|x| 5.0 - 40.0 * (x - x_star).powi(2), 0.0, 1.0);
        assert!((x - x_star).abs() < 1e-11, "{}", (x - x_star).abs());
    }

    #[test]
    fn refined_search_resolves_peak_hugging_an_end() {
        let x_star = 1.2e-13;
        let (x, _) = maximize_refined(|x| -(x - x_star).powi(2) / (x_star * x_star), 0.0, 1.0);
        assert!((x / x_star - 1.0).abs() < 1e-6, "{x}");
    }

    #[test]
    fn peaks_on_two_bump_series() {
        let grid = linspace(0.0, 10.0, 1001);
        let v: Vec<f64> = grid
            .iter()
            .map(|&t| (-(t - 3.0).powi(2)).exp() + 0.5 * (-(t - 7.0).powi(2)).exp())
            .collect();
        let peaks = strict_local_maxima(&v, PEAK_NOISE_FLOOR);
        assert_eq!(peaks.len(), 2);
        let (tp, _) = refine_peak(
            |t| (-(t - 3.0f64).powi(2)).exp() + 0.5 * (-(t - 7.0f64).powi(2)).exp(),
            &grid,
            peaks[0],
        );
        assert!((tp - 3.0).abs() < 1e-3);
    }

    #[test]
    fn plateau_is_not_a_strict_peak() {
        assert!(strict_local_maxima(&[0.0, 1.0, 1.0, 0.0], 0.0).is_empty());
    }

    #[test]
    fn noise_floor_suppresses_underflow_jitter() {
        let v = [0.0, 1.0, 0.5, 1e-40, 3e-40, 1e-41, 0.0];
        assert_eq!(strict_local_maxima(&v, PEAK_NOISE_FLOOR), vec![1]);
        assert_eq!(strict_local_maxima(&v, 0.0), vec![1, 4]);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.025, 50.0, 2000);
        assert_eq!(g.len(), 2000);
        assert_eq!(g[0], 0.025);
        assert_eq!(g[1999], 50.0);
    }
}
