//! One-dimensional search helpers: log-spaced grids and golden-section
//! refinement on a bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `n` points log-spaced from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Golden-section minimization of `f` on `[a, b]` until the bracket is
/// narrower than `tol`. Returns `(x, f(x))` for the best point seen.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Index of the grid minimum with ties resolved toward the lower index,
/// plus the bracket `[i-1, i+1]` clipped to the grid.
pub(crate) fn bracket_of_min(values: &[f64]) -> (usize, usize, usize) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    let lo = best.saturating_sub(1);
    let hi = (best + 1).min(values.len() - 1);
    (lo, best, hi)
}
