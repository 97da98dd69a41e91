//! Bracketing root refinement after Brent (inverse quadratic interpolation
//! with bisection fallback), plus a coarse sign-change scanner that produces
//! the brackets.

use crate::error::{Error, Result};

/// A sign-change interval [a, b] with f(a)·f(b) ≤ 0.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub a: f64,
    pub b: f64,
    pub fa: f64,
    pub fb: f64,
}

/// Scan f on a uniform grid of `steps` intervals over [lo, hi] and collect
/// every bracket where the sign changes. Non-finite samples are skipped, so
/// a function with gaps in its domain still yields the brackets that lie
/// inside it.
pub fn scan_sign_changes<F: FnMut(f64) -> Option<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    steps: usize,
) -> Vec<Bracket> {
    let mut brackets = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=steps {
        let x = lo + (hi - lo) * k as f64 / steps as f64;
        let y = match f(x) {
            Some(v) if v.is_finite() => v,
            _ => {
                prev = None;
                continue;
            }
        };
        if let Some((xp, yp)) = prev {
            // A node landing exactly on a root closes one bracket; the
            // following pair starts from zero and must not re-count it.
            if yp != 0.0 && (y == 0.0 || yp.signum() != y.signum()) {
                brackets.push(Bracket { a: xp, b: x, fa: yp, fb: y });
            }
        }
        prev = Some((x, y));
    }
    brackets
}

/// Refine a bracketed root of f to |x-tolerance| `tol_x`. Follows the
/// Numerical Recipes formulation of Brent's method.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: Bracket,
    tol_x: f64,
    max_iter: usize,
) -> Result<f64> {
    let eps = f64::EPSILON.sqrt();
    let (mut a, mut b) = (bracket.a, bracket.b);
    let (mut fa, mut fb) = (bracket.fa, bracket.fb);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootFind(format!(
            "root not bracketed on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * eps * b.abs() + 0.5 * tol_x;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(Error::RootFind("brent: max iterations exceeded".into()))
}
