//! Baseline singular value decomposition via the smaller Gram matrix.
//!
//! `A = U Σ Vᵀ` is recovered by eigendecomposing `AᵀA` (or `AAᵀ`, whichever
//! is smaller), taking square roots of the eigenvalues and mapping the
//! eigenvectors through `A`. All `min(n, m)` singular values are reported,
//! zeros included; factor columns belonging to (near-)zero singular values
//! are completed to an orthonormal basis so `UᵀU = VᵀV = I` always holds.

use crate::eigen::sym_eigen;
use crate::error::{Error, Result};
use crate::matrix::{dot, norm, Matrix};

/// Singular values at or below `RANK_TOL · σ₁` do not count towards
/// [`SvdResult::rank`].
pub const RANK_TOL: f64 = 1e-12;

/// Gram eigenvalues below this fraction of the largest are rounding noise —
/// the Jacobi sweep only resolves the spectrum down to ~1e-14 of the matrix
/// norm — and are clamped to exactly zero before the square root, so exact
/// rank deficiencies come out as exact zero singular values.
const GRAM_EIG_FLOOR: f64 = 1e-13;

/// `A ≈ Σᵢ σᵢ uᵢ vᵢᵀ` with `σ₁ ≥ σ₂ ≥ … ≥ 0`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// `n × min(n,m)`, orthonormal columns.
    pub u: Matrix,
    /// All `min(n,m)` singular values, descending.
    pub sigma: Vec<f64>,
    /// `m × min(n,m)`, orthonormal columns.
    pub v: Matrix,
    /// Number of singular values above `RANK_TOL · σ₁`.
    pub rank: usize,
}

/// Decomposes an arbitrary dense matrix.
///
/// Sign convention: in each column of `V` the entry of largest magnitude
/// (first such index on ties) is made nonnegative, with the paired `U`
/// column flipped accordingly.
pub fn svd(a: &Matrix) -> SvdResult {
    let (n, m) = a.shape();
    if m <= n {
        let gram = gram_of_transpose(a); // AᵀA, m×m
        let eig = sym_eigen(&gram).expect("Gram matrix is square and exactly symmetric");
        // Ascending eigenvalues -> descending singular values.
        let floor = GRAM_EIG_FLOOR * eig.values.last().copied().unwrap_or(0.0).max(0.0);
        let order: Vec<usize> = (0..m).rev().collect();
        let sigma: Vec<f64> = order
            .iter()
            .map(|&i| {
                let lam = eig.values[i];
                if lam <= floor {
                    0.0
                } else {
                    lam.sqrt()
                }
            })
            .collect();
        let rank = effective_rank(&sigma);

        let mut v = Matrix::zeros(m, m);
        for (col, &src) in order.iter().enumerate() {
            v.set_column(col, &eig.vectors.column(src));
        }

        let mapped: Vec<Option<Vec<f64>>> = (0..m)
            .map(|j| {
                if j < rank {
                    let mut w = a.mul_vec(&v.column(j));
                    let inv = 1.0 / sigma[j];
                    for x in &mut w {
                        *x *= inv;
                    }
                    Some(w)
                } else {
                    None
                }
            })
            .collect();
        let u = orthonormalize_with_completion(mapped, n);

        let (u, v) = apply_sign_convention(u, v);
        SvdResult { u, sigma, v, rank }
    } else {
        // Mirror case: eigendecompose AAᵀ and map through Aᵀ.
        let t = svd(&a.transpose());
        SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
            rank: t.rank,
        }
    }
}

/// Rank-`k` truncation `A_k = Σ_{i≤k} σᵢ uᵢ vᵢᵀ`, the Frobenius-optimal
/// rank-`k` approximant.
pub fn truncate_svd(res: &SvdResult, k: usize) -> Result<Matrix> {
    let bound = res.sigma.len();
    if k == 0 || k > bound {
        return Err(Error::RankOutOfRange { k, bound });
    }
    let (n, m) = (res.u.rows(), res.v.rows());
    let mut out = Matrix::zeros(n, m);
    for t in 0..k {
        let s = res.sigma[t];
        if s == 0.0 {
            continue;
        }
        for i in 0..n {
            let ui = s * res.u.get(i, t);
            if ui == 0.0 {
                continue;
            }
            for j in 0..m {
                out[(i, j)] += ui * res.v.get(j, t);
            }
        }
    }
    Ok(out)
}

fn effective_rank(sigma: &[f64]) -> usize {
    let s1 = sigma.first().copied().unwrap_or(0.0);
    if s1 == 0.0 {
        return 0;
    }
    sigma.iter().take_while(|&&s| s > RANK_TOL * s1).count()
}

/// `AᵀA`, built from the upper triangle and mirrored so it is exactly
/// symmetric in floating point.
fn gram_of_transpose(a: &Matrix) -> Matrix {
    let m = a.cols();
    let mut g = Matrix::zeros(m, m);
    for r in 0..a.rows() {
        let row = a.row(r);
        for i in 0..m {
            let ri = row[i];
            if ri == 0.0 {
                continue;
            }
            for j in i..m {
                g[(i, j)] += ri * row[j];
            }
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            g[(j, i)] = g[(i, j)];
        }
    }
    g
}

/// Orthonormalises the given columns in order (modified Gram–Schmidt, two
/// passes) and fills `None` slots with orthonormal completions built from
/// standard basis vectors.
fn orthonormalize_with_completion(cols: Vec<Option<Vec<f64>>>, dim: usize) -> Matrix {
    let total = cols.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(total);
    let mut pending = 0usize;
    for col in cols {
        match col {
            Some(v) => {
                let w = mgs_residual(v, &out);
                let len = norm(&w);
                if len > 1e-8 {
                    out.push(w.iter().map(|&x| x / len).collect());
                } else {
                    pending += 1;
                }
            }
            None => pending += 1,
        }
    }
    for _ in 0..pending {
        out.push(completion_column(&out, dim));
    }
    let mut u = Matrix::zeros(dim, total);
    for (j, col) in out.iter().enumerate() {
        u.set_column(j, col);
    }
    u
}

fn mgs_residual(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Vec<f64> {
    for _ in 0..2 {
        for b in basis {
            let c = dot(&v, b);
            for (x, &bi) in v.iter_mut().zip(b) {
                *x -= c * bi;
            }
        }
    }
    v
}

fn completion_column(basis: &[Vec<f64>], dim: usize) -> Vec<f64> {
    // Pick the standard basis vector least represented in the current span;
    // its residual norm² is 1 − Σ_cols b[t]².
    let mut best_t = 0;
    let mut best_resid = f64::NEG_INFINITY;
    for t in 0..dim {
        let covered: f64 = basis.iter().map(|b| b[t] * b[t]).sum();
        let resid = 1.0 - covered;
        if resid > best_resid {
            best_resid = resid;
            best_t = t;
        }
    }
    let mut e = vec![0.0; dim];
    e[best_t] = 1.0;
    let w = mgs_residual(e, basis);
    let len = norm(&w);
    assert!(len > 1e-6, "orthonormal completion failed");
    w.iter().map(|&x| x / len).collect()
}

fn apply_sign_convention(mut u: Matrix, mut v: Matrix) -> (Matrix, Matrix) {
    for j in 0..v.cols() {
        let mut pivot = 0;
        let mut pivot_abs = v.get(0, j).abs();
        for i in 1..v.rows() {
            let a = v.get(i, j).abs();
            if a > pivot_abs {
                pivot = i;
                pivot_abs = a;
            }
        }
        if v.get(pivot, j) < 0.0 {
            for i in 0..v.rows() {
                let x = -v.get(i, j);
                v.set(i, j, x);
            }
            for i in 0..u.rows() {
                let x = -u.get(i, j);
                u.set(i, j, x);
            }
        }
    }
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reconstruction_residual(a: &Matrix, res: &SvdResult) -> f64 {
        let full = truncate_svd(res, res.sigma.len()).unwrap();
        full.sub(a).frobenius_norm()
    }

    fn gram_residual(w: &Matrix) -> f64 {
        w.transpose()
            .mul(w)
            .sub(&Matrix::identity(w.cols()))
            .frobenius_norm()
    }

    #[test]
    fn diagonal_case() {
        let a = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let res = svd(&a);
        assert!((res.sigma[0] - 2.0).abs() <= 1e-12);
        assert!((res.sigma[1] - 1.0).abs() <= 1e-12);
        // Sign convention pins U = V = I here.
        assert!(res.v.sub(&Matrix::identity(2)).frobenius_norm() <= 1e-10);
        assert!(res.u.sub(&Matrix::identity(2)).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn rank_one_sigma_is_norm_product() {
        let u = [2.0, -1.0, 2.0]; // norm 3
        let v = [1.2, -1.6]; // norm 2
        let a = Matrix::from_fn(3, 2, |i, j| u[i] * v[j]);
        let res = svd(&a);
        assert!((res.sigma[0] - 6.0).abs() <= 1e-10);
        assert!(res.sigma[1].abs() <= 1e-10);
        assert_eq!(res.rank, 1);
        assert!(gram_residual(&res.u) <= 1e-10);
        assert!(gram_residual(&res.v) <= 1e-10);
    }

    #[test]
    fn random_rectangular_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Matrix::from_fn(8, 5, |_, _| rng.gen_range(-1.0..1.0));
        let res = svd(&a);
        assert!(reconstruction_residual(&a, &res) <= 1e-8 * a.frobenius_norm());
        assert!(gram_residual(&res.u) <= 1e-10);
        assert!(gram_residual(&res.v) <= 1e-10);
        for w in res.sigma.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn wide_matrix_goes_through_mirror_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = Matrix::from_fn(4, 7, |_, _| rng.gen_range(-1.0..1.0));
        let res = svd(&a);
        assert_eq!(res.u.shape(), (4, 4));
        assert_eq!(res.v.shape(), (7, 4));
        assert!(reconstruction_residual(&a, &res) <= 1e-8 * a.frobenius_norm());
        assert!(gram_residual(&res.v) <= 1e-10);
    }

    #[test]
    fn truncation_of_diagonal() {
        let a = Matrix::from_fn(3, 3, |i, j| if i == j { (3 - i) as f64 } else { 0.0 });
        let res = svd(&a);
        let a2 = truncate_svd(&res, 2).unwrap();
        let expect = Matrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(a2.sub(&expect).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn full_truncation_reproduces_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Matrix::from_fn(6, 4, |_, _| rng.gen_range(-2.0..2.0));
        let res = svd(&a);
        let full = truncate_svd(&res, 4).unwrap();
        assert!(full.sub(&a).frobenius_norm() <= 1e-8 * a.frobenius_norm());
    }

    #[test]
    fn residual_energy_matches_tail_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = Matrix::from_fn(6, 4, |_, _| rng.gen_range(-1.0..1.0));
        let res = svd(&a);
        let a2 = truncate_svd(&res, 2).unwrap();
        let lhs = a.sub(&a2).frobenius_norm_sq();
        let rhs = res.sigma[2] * res.sigma[2] + res.sigma[3] * res.sigma[3];
        assert!((lhs - rhs).abs() <= 1e-8 * a.frobenius_norm_sq());
    }

    #[test]
    fn truncation_rank_bounds() {
        let a = Matrix::identity(3);
        let res = svd(&a);
        assert!(matches!(
            truncate_svd(&res, 0),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(matches!(
            truncate_svd(&res, 4),
            Err(Error::RankOutOfRange { .. })
        ));
    }
}
