//! Global maximization of smooth periodic functions of one angle.

/// Golden-section refinement stops once the bracket is narrower than this.
pub const ANGLE_TOLERANCE: f64 = 1e-8;

/// Values closer than this (relative) count as a tie.
const TIE: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes `f` over one period `[lo, lo + period)`.
///
/// A uniform grid of `grid` points locates every local maximum, each of which is
/// refined by golden-section search on its neighbouring grid cells. Ties are
/// broken in favour of the argument with the smallest magnitude.
pub fn maximize_periodic<F>(f: F, lo: f64, period: f64, grid: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    assert!(grid >= 3, "grid needs at least three points");
    let step = period / grid as f64;
    let xs: Vec<f64> = (0..grid).map(|i| lo + i as f64 * step).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let mut best = (xs[0], ys[0]);
    for i in 0..grid {
        let prev = ys[(i + grid - 1) % grid];
        let next = ys[(i + 1) % grid];
        if ys[i] < prev || ys[i] < next {
            continue;
        }
        let (x, y) = golden_max(&f, xs[i] - step, xs[i] + step);
        let (x, y) = if y >= ys[i] { (x, y) } else { (xs[i], ys[i]) };
        let x = wrap(x, lo, period);
        if better((x, y), best) {
            best = (x, y);
        }
    }
    best
}

fn better(candidate: (f64, f64), incumbent: (f64, f64)) -> bool {
    let scale = candidate.1.abs().max(incumbent.1.abs()).max(1.0);
    if candidate.1 > incumbent.1 + TIE * scale {
        true
    } else if candidate.1 >= incumbent.1 - TIE * scale {
        candidate.0.abs() < incumbent.0.abs()
    } else {
        false
    }
}

fn wrap(x: f64, lo: f64, period: f64) -> f64 {
    lo + (x - lo).rem_euclid(period)
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max<F>(f: &F, mut a: f64, mut b: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > ANGLE_TOLERANCE {
        if fc > fd {
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
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Uniform grid of `count` points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (count - 1) as f64;
            (0..count)
                .map(|i| {
                    if i + 1 == count {
                        hi
                    } else {
                        lo + i as f64 * step
                    }
                })
                .collect()
        }
    }
}
