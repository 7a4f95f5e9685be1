//! One-dimensional grid search with golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal `f` on `[lo, hi]` to an interval width of `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
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
    // Endpoints are candidates too; golden section never evaluates them.
    [(lo, f(lo)), (hi, f(hi)), (c, fc), (d, fd)]
        .into_iter()
        .fold((c, fc), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Evaluates `f` on `grid_points` evenly spaced points of `[lo, hi]`
/// (endpoints included), then refines around the best grid point by golden
/// section on the bracketing cells.
pub fn grid_golden_max(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_points: usize,
    tol: f64,
) -> (f64, f64) {
    assert!(grid_points >= 2, "grid needs at least two points");
    let step = (hi - lo) / (grid_points - 1) as f64;
    let at = |i: usize| if i == grid_points - 1 { hi } else { lo + step * i as f64 };
    let (best_i, best_f) = (0..grid_points)
        .map(|i| (i, f(at(i))))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let a = at(best_i.saturating_sub(1));
    let b = at((best_i + 1).min(grid_points - 1));
    let (x, fx) = golden_section_max(&f, a, b, tol);
    if fx >= best_f {
        (x, fx)
    } else {
        (at(best_i), best_f)
    }
}

pub fn grid_golden_min(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_points: usize,
    tol: f64,
) -> (f64, f64) {
    let (x, fx) = grid_golden_max(|t| -f(t), lo, hi, grid_points, tol);
    (x, -fx)
}
