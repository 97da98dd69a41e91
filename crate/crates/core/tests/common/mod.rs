//! Shared test helpers, including an independent purity oracle that never
//! touches the library's SVD: purity from the eigenvalues of the Gram
//! matrix G = FᵀF via a classical two-sided Jacobi eigensolver.

#![allow(clippy::needless_range_loop)]

use biborate::jsa::JsaGrid;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p][q].abs());
            }
        }
        if off < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|k| a[k][k]).collect()
}

/// Purity from the Gram-matrix eigenvalue route: with μ_k the eigenvalues of
/// G = FᵀF (quadrature-weighted), P = Σμ² / (Σμ)².
pub fn gram_purity(grid: &JsaGrid) -> f64 {
    assert!(grid.is_real(), "gram oracle expects the flat-phase real amplitude");
    let (ws, wi) = grid.weights();
    let (ns, ni) = grid.amplitude.dim();
    // Weighted kernel, then the smaller Gram side.
    let mut f = vec![vec![0.0; ni]; ns];
    for s in 0..ns {
        for i in 0..ni {
            f[s][i] = grid.amplitude[[s, i]].re * (ws[s] * wi[i]).sqrt();
        }
    }
    let (rows, cols) = (ns, ni);
    let gram_dim = rows.min(cols);
    let mut gram = vec![vec![0.0; gram_dim]; gram_dim];
    for a in 0..gram_dim {
        for b in a..gram_dim {
            let mut acc = 0.0;
            if rows <= cols {
                for k in 0..cols {
                    acc += f[a][k] * f[b][k];
                }
            } else {
                for k in 0..rows {
                    acc += f[k][a] * f[k][b];
                }
            }
            gram[a][b] = acc;
            gram[b][a] = acc;
        }
    }
    let eig = symmetric_eigenvalues(gram);
    let total: f64 = eig.iter().sum();
    eig.iter().map(|mu| (mu / total).powi(2)).sum()
}
