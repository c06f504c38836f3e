//! Adaptive Simpson quadrature.

use crate::{Error, Result, Scalar};

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Each panel is split until the Richardson error estimate
/// `|S(left) + S(right) - S(whole)| / 15` is below its share of `tol`.
/// Panels that hit the recursion cap are accepted anyway and their
/// estimated errors summed; if that sum exceeds `tol` the call fails with
/// the residual estimate.
pub fn adaptive_simpson<T: Scalar>(f: impl Fn(T) -> T, a: T, b: T, tol: T) -> Result<T> {
    let fa = f(a);
    let fb = f(b);
    let m = (a + b) * T::lit(0.5);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut unresolved = T::zero();
    let value = recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut unresolved);
    if !value.is_finite() {
        return Err(Error::Quadrature { estimate: f64::NAN });
    }
    if unresolved > tol {
        return Err(Error::Quadrature {
            estimate: unresolved.to_f64_lossy(),
        });
    }
    Ok(value)
}

fn simpson<T: Scalar>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Scalar>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
    unresolved: &mut T,
) -> T {
    let half = T::lit(0.5);
    let m = (a + b) * half;
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let fifteen = T::lit(15.0);
    if delta.abs() <= fifteen * tol {
        return left + right + delta / fifteen;
    }
    if depth == 0 {
        *unresolved = *unresolved + delta.abs() / fifteen;
        return left + right + delta / fifteen;
    }
    recurse(f, a, m, fa, flm, fm, left, tol * half, depth - 1, unresolved)
        + recurse(f, m, b, fm, frm, fb, right, tol * half, depth - 1, unresolved)
}
