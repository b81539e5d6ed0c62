//! Symmetric eigendecomposition by cyclic Jacobi sweeps.
//!
//! Each Jacobi rotation annihilates one off-diagonal element; repeated sweeps
//! drive the whole off-diagonal mass to zero while the accumulated rotations
//! converge to the eigenvector basis. Unconditionally stable and adequate at
//! the matrix sizes this crate targets (up to a few hundred).

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Relative asymmetry admitted before an input is rejected; anything below
/// this is folded away by symmetrising `(S + Sᵀ)/2`.
pub const ASYMMETRY_TOL: f64 = 1e-8;

/// Sweeps stop once the off-diagonal Frobenius mass drops below this
/// fraction of `‖S‖`.
const OFF_DIAG_TOL: f64 = 1e-14;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) with the matching orthonormal eigenvectors:
/// column `i` of `vectors` pairs with `values[i]`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymEigen {
    /// `W · diag(values) · Wᵀ`, for residual checks.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.values[k] * self.vectors.get(i, k) * self.vectors.get(j, k))
                .sum()
        })
    }
}

/// Decomposes a square symmetric matrix. Inputs with relative asymmetry
/// above [`ASYMMETRY_TOL`] are rejected; below it they are symmetrised first.
///
/// Eigenvalues come back ascending. Each eigenvector is sign-fixed so that
/// its largest-magnitude entry (first such index on ties) is nonnegative,
/// making results reproducible up to eigenspace degeneracy.
pub fn sym_eigen(s: &Matrix) -> Result<SymEigen> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let norm = s.frobenius_norm();
    let asym = s.asymmetry();
    if norm > 0.0 && asym > ASYMMETRY_TOL * norm {
        return Err(Error::Asymmetric {
            relative: asym / norm,
            tolerance: ASYMMETRY_TOL,
        });
    }

    let n = s.rows();
    let sym = s.symmetrized();
    let mut a: Vec<f64> = sym.data().to_vec();
    // Rows of `vt` accumulate the eigenvectors so the inner rotation loop
    // stays contiguous; transposed into columns at the end.
    let mut vt = vec![0.0; n * n];
    for i in 0..n {
        vt[i * n + i] = 1.0;
    }

    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    if norm > 0.0 {
        'sweeps: for sweep in 0..MAX_SWEEPS {
            let mut off_sq = 0.0;
            let mut abs_sum = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    let x = a[p * n + q];
                    off_sq += x * x;
                    abs_sum += x.abs();
                }
            }
            if (2.0 * off_sq).sqrt() <= OFF_DIAG_TOL * norm {
                break 'sweeps;
            }
            // Skip negligible rotations early on (Numerical Recipes schedule).
            let thresh = if sweep < 3 {
                0.2 * abs_sum / ((n * n) as f64)
            } else {
                0.0
            };

            for p in 0..(n - 1) {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    let g = 100.0 * apq.abs();
                    // After a few sweeps, entries that no longer perturb the
                    // diagonal at machine precision are zeroed outright.
                    if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                        a[p * n + q] = 0.0;
                        continue;
                    }
                    if apq.abs() <= thresh {
                        continue;
                    }
                    let mut h = d[q] - d[p];
                    let t = if h.abs() + g == h.abs() {
                        apq / h
                    } else {
                        let theta = 0.5 * h / apq;
                        let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            t = -t;
                        }
                        t
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s_rot = t * c;
                    let tau = s_rot / (1.0 + c);
                    h = t * apq;
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    a[p * n + q] = 0.0;

                    let rot = |a: &mut [f64], i1: usize, j1: usize, i2: usize, j2: usize| {
                        let g = a[i1 * n + j1];
                        let h = a[i2 * n + j2];
                        a[i1 * n + j1] = g - s_rot * (h + g * tau);
                        a[i2 * n + j2] = h + s_rot * (g - h * tau);
                    };
                    for j in 0..p {
                        rot(&mut a, j, p, j, q);
                    }
                    for j in (p + 1)..q {
                        rot(&mut a, p, j, j, q);
                    }
                    for j in (q + 1)..n {
                        rot(&mut a, p, j, q, j);
                    }
                    // Rotate the eigenvector rows p and q.
                    for r in 0..n {
                        let g = vt[p * n + r];
                        let h = vt[q * n + r];
                        vt[p * n + r] = g - s_rot * (h + g * tau);
                        vt[q * n + r] = h + s_rot * (g - h * tau);
                    }
                }
            }
            for i in 0..n {
                b[i] += z[i];
                d[i] = b[i];
                z[i] = 0.0;
            }
        }
    }

    // Sort ascending, then apply the sign convention per eigenvector.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));

    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let row = &vt[src * n..(src + 1) * n];
        let mut pivot = 0;
        for (i, &x) in row.iter().enumerate() {
            if x.abs() > row[pivot].abs() {
                pivot = i;
            }
        }
        let flip = if row[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors.set(i, col, flip * row[i]);
        }
    }

    Ok(SymEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orthonormality_residual(w: &Matrix) -> f64 {
        let gram = w.transpose().mul(w);
        gram.sub(&Matrix::identity(w.cols())).frobenius_norm()
    }

    #[test]
    fn diagonal_matrix() {
        let s = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let eig = sym_eigen(&s).unwrap();
        assert!((eig.values[0] - 1.0).abs() <= 1e-12);
        assert!((eig.values[1] - 3.0).abs() <= 1e-12);
        // Eigenvectors are e2 and e1 up to sign; the convention makes the
        // largest entry nonnegative, so exactly e2 and e1.
        assert!((eig.vectors.get(1, 0) - 1.0).abs() <= 1e-12);
        assert!((eig.vectors.get(0, 1) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn off_diagonal_pair() {
        let s = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eig = sym_eigen(&s).unwrap();
        assert!((eig.values[0] + 1.0).abs() <= 1e-12);
        assert!((eig.values[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn random_symmetric_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let raw = Matrix::from_fn(5, 5, |_, _| rng.gen_range(-1.0..1.0));
        let s = raw.symmetrized();
        let eig = sym_eigen(&s).unwrap();
        let resid = eig.reconstruct().sub(&s).frobenius_norm();
        assert!(resid <= 1e-10 * s.frobenius_norm(), "residual {resid}");
        assert!(orthonormality_residual(&eig.vectors) <= 1e-10);
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn eigenpairs_satisfy_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = Matrix::from_fn(6, 6, |_, _| rng.gen_range(-2.0..2.0)).symmetrized();
        let eig = sym_eigen(&s).unwrap();
        for k in 0..6 {
            let v = eig.vectors.column(k);
            let sv = s.mul_vec(&v);
            let err: f64 = sv
                .iter()
                .zip(&v)
                .map(|(&a, &b)| (a - eig.values[k] * b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10 * s.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn zero_matrix() {
        let s = Matrix::zeros(4, 4);
        let eig = sym_eigen(&s).unwrap();
        assert!(eig.values.iter().all(|&v| v == 0.0));
        assert_eq!(eig.vectors, Matrix::identity(4));
    }

    #[test]
    fn rejects_non_square_and_asymmetric() {
        assert!(matches!(
            sym_eigen(&Matrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        let s = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eigen(&s), Err(Error::Asymmetric { .. })));
    }
}
