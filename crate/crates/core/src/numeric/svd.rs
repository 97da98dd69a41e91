//! Singular values by one-sided Jacobi orthogonalization.
//!
//! The Schmidt analysis only needs singular values (Schmidt coefficients),
//! not the vectors, so a compact cyclic one-sided Jacobi on the matrix
//! columns is enough: rotate column pairs until all are mutually orthogonal;
//! the singular values are the final column norms. Quadratic convergence,
//! and comfortably fast for the ≤ 401² grids used here.

// Index loops mirror the paired-column rotations; iterator forms obscure them.
#![allow(clippy::needless_range_loop)]

use ndarray::Array2;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 60;
const TOL: f64 = 1e-13;

/// Singular values of a real matrix, descending.
pub fn singular_values(matrix: &Array2<f64>) -> Vec<f64> {
    // Work on the transpose when that gives fewer columns to orthogonalize.
    let a = if matrix.nrows() < matrix.ncols() { matrix.t().to_owned() } else { matrix.clone() };
    let (rows, cols) = a.dim();
    // Column-major buffer; each column contiguous.
    let mut col: Vec<Vec<f64>> = (0..cols).map(|j| a.column(j).to_vec()).collect();

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (mut app, mut aqq, mut apq) = (0.0, 0.0, 0.0);
                for r in 0..rows {
                    let (x, y) = (col[p][r], col[q][r]);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= TOL * (app * aqq).sqrt() {
                    continue;
                }
                off = off.max(apq.abs() / (app * aqq).sqrt().max(f64::MIN_POSITIVE));
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let (x, y) = (col[p][r], col[q][r]);
                    col[p][r] = c * x - s * y;
                    col[q][r] = s * x + c * y;
                }
            }
        }
        if off <= TOL {
            break;
        }
    }

    let mut sv: Vec<f64> = col
        .iter()
        .map(|column| column.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Singular values of a complex matrix, descending. Same one-sided Jacobi
/// with the complex rotation absorbing the phase of the inner product.
pub fn singular_values_complex(matrix: &Array2<Complex64>) -> Vec<f64> {
    let a = if matrix.nrows() < matrix.ncols() { matrix.t().to_owned() } else { matrix.clone() };
    let (rows, cols) = a.dim();
    let mut col: Vec<Vec<Complex64>> = (0..cols).map(|j| a.column(j).to_vec()).collect();

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (mut app, mut aqq) = (0.0, 0.0);
                let mut apq = Complex64::new(0.0, 0.0);
                for r in 0..rows {
                    let (x, y) = (col[p][r], col[q][r]);
                    app += x.norm_sqr();
                    aqq += y.norm_sqr();
                    apq += x.conj() * y;
                }
                let mag = apq.norm();
                if mag <= TOL * (app * aqq).sqrt() {
                    continue;
                }
                off = off.max(mag / (app * aqq).sqrt().max(f64::MIN_POSITIVE));
                // Absorb the phase of <p, q> into q, then rotate as in the
                // real case: the Gram block becomes [[app, mag], [mag, aqq]].
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let (x, y) = (col[p][r], col[q][r]);
                    col[p][r] = c * x - s * phase.conj() * y;
                    col[q][r] = s * phase * x + c * y;
                }
            }
        }
        if off <= TOL {
            break;
        }
    }

    let mut sv: Vec<f64> = col
        .iter()
        .map(|column| column.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn diagonal_matrix_singular_values() {
        let m = array![[3.0, 0.0], [0.0, -4.0]];
        let sv = singular_values(&m);
        assert!((sv[0] - 4.0).abs() < 1e-12);
        assert!((sv[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_outer_product() {
        let u = [1.0, 2.0, -1.0];
        let v = [0.5, 1.5];
        let mut m = Array2::<f64>::zeros((3, 2));
        for (i, &ui) in u.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                m[[i, j]] = ui * vj;
            }
        }
        let sv = singular_values(&m);
        let expect = (u.iter().map(|x| x * x).sum::<f64>()
            * v.iter().map(|x| x * x).sum::<f64>())
        .sqrt();
        assert!((sv[0] - expect).abs() < 1e-12);
        assert!(sv[1].abs() < 1e-12);
    }

    #[test]
    fn complex_agrees_with_real_on_real_input() {
        let m = array![[1.0, 0.3, -0.2], [0.0, 2.0, 0.7], [0.4, -0.5, 0.9]];
        let mc = m.mapv(|x| Complex64::new(x, 0.0));
        let sr = singular_values(&m);
        let sc = singular_values_complex(&mc);
        for (a, b) in sr.iter().zip(&sc) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn complex_phase_invariance() {
        let m = array![[1.0, 0.3], [-0.8, 2.0]];
        let mc = m.mapv(|x| Complex64::new(x, 0.0));
        let rotated = mc.mapv(|x| x * Complex64::from_polar(1.0, 0.7));
        let s1 = singular_values_complex(&mc);
        let s2 = singular_values_complex(&rotated);
        for (a, b) in s1.iter().zip(&s2) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn frobenius_norm_is_preserved() {
        // Σσ² = ‖A‖²_F.
        let m = array![
            [0.2, -1.0, 0.5, 0.1],
            [1.1, 0.4, -0.3, 0.9],
            [-0.7, 0.6, 0.8, -0.2]
        ];
        let sv = singular_values(&m);
        let frob: f64 = m.iter().map(|x| x * x).sum();
        let sum_sq: f64 = sv.iter().map(|s| s * s).sum();
        assert!((frob - sum_sq).abs() < 1e-12);
    }
}
