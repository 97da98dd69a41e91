//! Small numerical toolbox: bracketing root refinement (Brent), sign-change
//! scanning, golden-section maximization, one-sided Jacobi SVD, and
//! trapezoidal quadrature weights.

mod brent;
mod svd;

pub use brent::{brent, scan_sign_changes, Bracket};
pub use svd::{singular_values, singular_values_complex};

/// Golden-section search for the maximum of a unimodal function on [a, b].
///
/// Returns (x*, f(x*)) together with all evaluated samples as (x, f) pairs
/// sorted by x. `iterations` of ~40 pin x* to ~1e-8·(b−a).
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    iterations: usize,
) -> (f64, f64, Vec<(f64, f64)>) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut samples = Vec::with_capacity(iterations + 2);
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    samples.push((x1, f1));
    samples.push((x2, f2));
    for _ in 0..iterations {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            samples.push((x2, f2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            samples.push((x1, f1));
        }
    }
    let (x_best, f_best) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    samples.sort_by(|p, q| p.0.total_cmp(&q.0));
    (x_best, f_best, samples)
}

/// Trapezoidal quadrature weights for (possibly non-uniform) sorted nodes.
pub fn trapezoid_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    if n < 2 {
        return vec![1.0; n];
    }
    let mut w = vec![0.0; n];
    for j in 0..n - 1 {
        let h = nodes[j + 1] - nodes[j];
        w[j] += 0.5 * h;
        w[j + 1] += 0.5 * h;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        // A smooth maximum is only locatable to ~√ε in f64; ask for 1e-6.
        let (x, fx, samples) = golden_section_max(|x| 3.0 - (x - 1.3) * (x - 1.3), 0.0, 4.0, 60);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((fx - 3.0).abs() < 1e-12);
        assert!(samples.len() >= 60);
        assert!(samples.windows(2).all(|w| w[0].0 <= w[1].0));
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let nodes: Vec<f64> = vec![0.0, 0.5, 1.25, 2.0, 3.0];
        let w = trapezoid_weights(&nodes);
        let integral: f64 = nodes.iter().zip(&w).map(|(x, w)| (2.0 * x + 1.0) * w).sum();
        // ∫₀³ (2x+1) dx = 12.
        assert!((integral - 12.0).abs() < 1e-12);
    }
}
