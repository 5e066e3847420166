//! Scalar root finding shared by the shock relations and the star-state solve.

/// Outcome of a bracketed Newton iteration.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Root {
    pub x: f64,
    pub converged: bool,
}

/// Newton's method kept inside a sign-change bracket, falling back to bisection
/// whenever the Newton step leaves the bracket or stops halving the error.
///
/// `f` returns the value and derivative. `f(lo)` and `f(hi)` must differ in sign.
/// Converges when the step drops below `rel_tol * |x|`, the residual drops to
/// `f_tol`, or the bracket collapses to adjacent floats.
pub(crate) fn safeguarded_newton<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    rel_tol: f64,
    f_tol: f64,
    max_iter: usize,
) -> Root
where
    F: Fn(f64) -> (f64, f64),
{
    let lo_negative = f(lo).0 < 0.0;
    let mut x = if x0 > lo && x0 < hi { x0 } else { 0.5 * (lo + hi) };
    let mut dx_old = hi - lo;
    let mut dx = dx_old;

    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx.abs() <= f_tol {
            return Root { x, converged: true };
        }
        if (fx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }

        let newton = x - fx / dfx;
        let newton_ok = newton.is_finite()
            && newton > lo
            && newton < hi
            && (2.0 * fx).abs() <= (dx_old * dfx).abs();
        dx_old = dx;
        let next = if newton_ok {
            newton
        } else {
            lo + 0.5 * (hi - lo)
        };
        dx = next - x;

        if dx.abs() <= rel_tol * next.abs() {
            return Root {
                x: next,
                converged: true,
            };
        }
        // Bracket collapsed to neighbouring floats.
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return Root {
                x: next,
                converged: true,
            };
        }
        x = next;
    }
    Root {
        x,
        converged: false,
    }
}

/// Bisection on a sign change until the bracket cannot shrink further.
/// Returns the endpoint with the smaller absolute residual.
pub(crate) fn bisect<F>(f: F, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    for _ in 0..2000 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    if f_lo.abs() <= f_hi.abs() {
        lo
    } else {
        hi
    }
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
pub(crate) fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_cube_root() {
        let r = safeguarded_newton(|x| (x * x * x - 2.0, 3.0 * x * x), 0.0, 2.0, 1.0, 1e-15, 0.0, 100);
        assert!(r.converged);
        assert!((r.x - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn newton_survives_bad_start() {
        // Flat derivative at the start point forces bisection.
        let r = safeguarded_newton(|x| (x.powi(3), 3.0 * x * x), -1.0, 3.0, 0.0 + 1e-300, 1e-15, 0.0, 400);
        assert!(r.x.abs() < 1e-10);
    }

    #[test]
    fn bisect_and_golden() {
        let x = bisect(|x| x.sin(), 3.0, 3.5);
        assert!((x - std::f64::consts::PI).abs() < 1e-15);
        let m = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((m - 0.3).abs() < 1e-9);
    }
}
