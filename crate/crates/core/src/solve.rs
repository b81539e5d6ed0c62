//! Symmetric positive-definite linear solves by Cholesky factorisation.
//!
//! Used everywhere the solvers apply `(I + λL)⁻¹`: the inverse is never
//! formed, each right-hand side goes through two triangular substitutions.

use crate::eigen::ASYMMETRY_TOL;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::par;

/// Lower-triangular Cholesky factor `C = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct SpdFactor {
    n: usize,
    l: Vec<f64>, // row-major n×n, upper part unused
}

/// Factors a symmetric positive-definite matrix. Breakdown (a nonpositive
/// pivot) reports the offending pivot index.
pub fn factor_spd(c: &Matrix) -> Result<SpdFactor> {
    if !c.is_square() {
        return Err(Error::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        });
    }
    let norm = c.frobenius_norm();
    let asym = c.asymmetry();
    if norm > 0.0 && asym > ASYMMETRY_TOL * norm {
        return Err(Error::Asymmetric {
            relative: asym / norm,
            tolerance: ASYMMETRY_TOL,
        });
    }

    let n = c.rows();
    let sym = c.symmetrized();
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut s = sym.get(j, j);
        for k in 0..j {
            s -= l[j * n + k] * l[j * n + k];
        }
        if s <= 0.0 {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let diag = s.sqrt();
        l[j * n + j] = diag;
        for i in (j + 1)..n {
            let mut s = sym.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / diag;
        }
    }
    Ok(SpdFactor { n, l })
}

impl SpdFactor {
    pub fn size(&self) -> usize {
        self.n
    }

    /// Solves `C x = b` for a single right-hand side.
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "right-hand side length mismatch");
        let n = self.n;
        let l = &self.l;
        // Forward: L y = b.
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        // Backward: Lᵀ x = y.
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        x
    }

    /// Solves `C X = B` column by column. Columns are independent, so the
    /// result is identical whether they run in parallel or sequentially.
    pub fn solve_matrix(&self, b: &Matrix) -> Matrix {
        assert_eq!(b.rows(), self.n, "right-hand side row count mismatch");
        let cols: Vec<Vec<f64>> = par::indexed_map(b.cols(), |j| self.solve_vec(&b.column(j)));
        let mut x = Matrix::zeros(self.n, b.cols());
        for (j, col) in cols.iter().enumerate() {
            x.set_column(j, col);
        }
        x
    }
}

/// Solves `C X = B` for symmetric positive-definite `C`.
pub fn spd_solve(c: &Matrix, b: &Matrix) -> Result<Matrix> {
    if b.rows() != c.rows() {
        return Err(Error::Dimensions {
            context: "spd_solve",
            details: format!(
                "C is {}x{} but B has {} rows",
                c.rows(),
                c.cols(),
                b.rows()
            ),
        });
    }
    Ok(factor_spd(c)?.solve_matrix(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularizer::build_second_difference;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solve_returns_rhs() {
        let b = Matrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 3.0], vec![4.0, 0.0]]).unwrap();
        let x = spd_solve(&Matrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let c = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let b = Matrix::column_vector(&[2.0, 4.0]);
        let x = spd_solve(&c, &b).unwrap();
        assert!((x.get(0, 0) - 1.0).abs() <= 1e-15);
        assert!((x.get(1, 0) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn shifted_second_difference_residual() {
        let n = 8;
        let d = build_second_difference(n).unwrap();
        let l = d.transpose().mul(&d);
        let c = Matrix::identity(n).add_scaled(&l, 0.7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = Matrix::from_fn(n, 3, |_, _| rng.gen_range(-1.0..1.0));
        let x = spd_solve(&c, &b).unwrap();
        let resid = c.mul(&x).sub(&b).frobenius_norm();
        assert!(resid <= 1e-10 * b.frobenius_norm());
    }

    #[test]
    fn recovers_known_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Matrix::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
        // GᵀG + I is comfortably positive-definite.
        let c = g.transpose().mul(&g).add(&Matrix::identity(6));
        let x0 = Matrix::from_fn(6, 2, |_, _| rng.gen_range(-1.0..1.0));
        let x = spd_solve(&c, &c.mul(&x0)).unwrap();
        assert!(x.sub(&x0).frobenius_norm() <= 1e-9 * x0.frobenius_norm());
    }

    #[test]
    fn indefinite_matrix_reports_pivot() {
        let c = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        match factor_spd(&c) {
            Err(Error::NotPositiveDefinite { pivot }) => assert_eq!(pivot, 1),
            other => panic!("expected breakdown, got {other:?}"),
        }
    }
}
