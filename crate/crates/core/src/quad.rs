//! One-dimensional quadrature building blocks shared by the weight, covering
//! and truncation machinery: adaptive Simpson with breakpoint support, dyadic
//! refinement toward integrable endpoint singularities, Gauss-Legendre rules,
//! and a monotone bisection helper.

/// Hard cap on adaptive recursion depth. Hitting it means the integrand is
/// rougher than an integrable singularity allows.
const MAX_DEPTH: u32 = 48;

/// Levels of dyadic shrinking toward a singular endpoint before giving up.
const MAX_DYADIC_LEVELS: u32 = 200;

#[derive(Debug, Clone, PartialEq)]
pub enum QuadError {
    /// Adaptive refinement exhausted its depth budget without meeting the
    /// requested tolerance.
    NotConverged { interval: (f64, f64), estimate: f64 },
    /// Dyadic refinement toward an endpoint kept producing non-decaying
    /// contributions (non-integrable singularity).
    EndpointDiverges { endpoint: f64 },
}

impl std::fmt::Display for QuadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuadError::NotConverged { interval, estimate } => write!(
                f,
                "adaptive quadrature failed to converge on [{}, {}] (last estimate {})",
                interval.0, interval.1, estimate
            ),
            QuadError::EndpointDiverges { endpoint } => {
                write!(f, "integrand appears non-integrable near {endpoint}")
            }
        }
    }
}

impl std::error::Error for QuadError {}

fn simpson(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fa, fm, fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_rec(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (b - a) < 1e-15 * (a.abs() + b.abs() + 1.0) {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(QuadError::NotConverged {
            interval: (a, b),
            estimate: left + right,
        });
    }
    let l = adaptive_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let r = adaptive_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`. The integrand must be finite on the closed interval.
pub fn adaptive_simpson(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    let (whole, fa, fm, fb) = simpson(&mut f, a, b);
    adaptive_rec(&mut f, a, b, fa, fm, fb, whole, tol, 0)
}

/// Integrates `f` over `[a, b]` splitting first at the given interior
/// breakpoints (sorted or not; points outside the interval are ignored).
pub fn adaptive_simpson_with_breakpoints(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<f64, QuadError> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);
    let n = edges.len() - 1;
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += adaptive_simpson(&mut f, w[0], w[1], tol / n as f64)?;
    }
    Ok(total)
}

/// Integrates `f` over `(a, b]` where `f` may have an integrable singularity
/// at the left endpoint `a`. Dyadic intervals shrink toward `a`; iteration
/// stops once contributions fall below the tolerance share, and errors out if
/// they fail to decay.
pub fn integrate_left_singular(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, QuadError> {
    if b <= a {
        return Ok(0.0);
    }
    let len = b - a;
    // Smooth outer half first, then dyadic pieces toward `a`.
    let mut total = adaptive_simpson(&mut f, a + 0.5 * len, b, 0.5 * tol)?;
    let mut hi = 0.5 * len;
    for level in 0..MAX_DYADIC_LEVELS {
        let lo = 0.5 * hi;
        let piece = adaptive_simpson(&mut f, a + lo, a + hi, 0.25 * tol)?;
        total += piece;
        if piece.abs() < 0.25 * tol && level > 2 {
            return Ok(total);
        }
        if level == MAX_DYADIC_LEVELS - 1 {
            break;
        }
        hi = lo;
    }
    Err(QuadError::EndpointDiverges { endpoint: a })
}

/// Mirror image of [`integrate_left_singular`]: the integrable singularity
/// sits at the right endpoint `b`.
pub fn integrate_right_singular(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, QuadError> {
    let flipped = integrate_left_singular(|x| f(a + b - x), a, b, tol)?;
    Ok(flipped)
}

/// Integrates `f` over `[lo, hi]` when the integrand may blow up (integrably)
/// on the circles listed in `singular`, splitting additionally at the smooth
/// `breakpoints`. Panels touching a singular value are handled by dyadic
/// refinement toward that endpoint; interior panels use plain adaptive
/// Simpson.
pub fn integrate_with_singular_radii(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    singular: &[f64],
    breakpoints: &[f64],
    tol: f64,
) -> Result<f64, QuadError> {
    if hi <= lo {
        return Ok(0.0);
    }
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    let mut edges: Vec<f64> = vec![lo, hi];
    edges.extend(singular.iter().copied().filter(|&x| x > lo && x < hi));
    edges.extend(breakpoints.iter().copied().filter(|&x| x > lo && x < hi));
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| close(*a, *b));
    let is_singular = |x: f64| singular.iter().any(|&s| close(s, x));
    let n = edges.len() - 1;
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let share = tol / n as f64;
        total += match (is_singular(a), is_singular(b)) {
            (false, false) => adaptive_simpson(&mut f, a, b, share)?,
            (true, false) => integrate_left_singular(&mut f, a, b, share)?,
            (false, true) => integrate_right_singular(&mut f, a, b, share)?,
            (true, true) => {
                let m = 0.5 * (a + b);
                integrate_left_singular(&mut f, a, m, 0.5 * share)?
                    + integrate_right_singular(&mut f, m, b, 0.5 * share)?
            }
        };
    }
    Ok(total)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[a, b]`.
///
/// Computed by Newton iteration on Legendre polynomials; accurate to close to
/// machine precision for the orders used here (n <= 512).
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Initial guess (Tricomi) then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        rule.push((mid + half * x, half * w));
    }
    rule.sort_by(|p, q| p.0.total_cmp(&q.0));
    rule
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Finds `t` in `(lo, hi]` with `g(t) = target` for a nondecreasing `g`,
/// by bisection to relative tolerance `rel_tol` on `t`.
///
/// Caller guarantees `g(lo) <= target <= g(hi)`.
pub fn bisect_monotone(
    mut g: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    rel_tol: f64,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * hi.abs().max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}
