//! Closed-form regularised PCA: `A ≈ P Qᵀ` with orthonormal `Q`.
//!
//! Minimises `‖A − PQᵀ‖² + λ‖DP‖² + μ‖GQ‖²` subject to `QᵀQ = I`. The
//! optimal `Q` stacks the eigenvectors of `K = Aᵀ(I + λL)⁻¹A − μM` for the
//! `k` algebraically largest eigenvalues, after which `P = (I + λL)⁻¹ A Q`.
//! Note the solve on the left factor: `P = AQ` alone is wrong for `λ > 0`.

use crate::eigen::sym_eigen;
use crate::error::{Error, Result};
use crate::matrix::{trace_quadratic_form, Matrix};
use crate::regularizer::RegularizerMatrix;
use crate::solve::spd_solve;

/// Eigenvalue gap below which the choice of the k-th eigenvector is
/// reported as degenerate.
const DEGENERACY_TOL: f64 = 1e-10;

/// A regularised PCA instance.
#[derive(Debug, Clone)]
pub struct PcaProblem {
    pub a: Matrix,
    pub k: usize,
    pub lambda: f64,
    pub mu: f64,
    pub l: RegularizerMatrix,
    pub m: RegularizerMatrix,
}

impl PcaProblem {
    pub fn new(
        a: Matrix,
        k: usize,
        lambda: f64,
        mu: f64,
        l: RegularizerMatrix,
        m: RegularizerMatrix,
    ) -> Result<Self> {
        let bound = a.rows().min(a.cols());
        if k == 0 || k > bound {
            return Err(Error::RankOutOfRange { k, bound });
        }
        if !(lambda >= 0.0 && lambda.is_finite()) || !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::InvalidConfig(
                "lambda and mu must be finite and nonnegative".into(),
            ));
        }
        if l.size() != a.rows() {
            return Err(Error::Dimensions {
                context: "PcaProblem",
                details: format!("L is {0}x{0} but A has {1} rows", l.size(), a.rows()),
            });
        }
        if m.size() != a.cols() {
            return Err(Error::Dimensions {
                context: "PcaProblem",
                details: format!("M is {0}x{0} but A has {1} columns", m.size(), a.cols()),
            });
        }
        Ok(Self {
            a,
            k,
            lambda,
            mu,
            l,
            m,
        })
    }

    /// `I + λL`, the matrix behind every left-factor solve.
    pub(crate) fn shifted_l(&self) -> Matrix {
        Matrix::identity(self.a.rows()).add_scaled(self.l.matrix(), self.lambda)
    }
}

/// Solution of a [`PcaProblem`].
#[derive(Debug, Clone)]
pub struct PcaSolution {
    pub p: Matrix,
    pub q: Matrix,
    /// Value of the regularised functional at `(P, Q)`.
    pub objective: f64,
    /// The `k` selected eigenvalues of `K`, descending.
    pub k_spectrum: Vec<f64>,
    /// True when the k-th and (k+1)-th eigenvalues of `K` tie within
    /// tolerance, in which case the returned subspace is one valid choice
    /// among many.
    pub degenerate: bool,
}

/// `K = Aᵀ (I + λL)⁻¹ A − μM`, symmetrised. The inverse is applied through
/// a Cholesky solve, never formed.
pub fn build_k_matrix(prob: &PcaProblem) -> Result<Matrix> {
    let y = spd_solve(&prob.shifted_l(), &prob.a)?;
    let k0 = prob.a.transpose().mul(&y);
    let k = if prob.mu == 0.0 {
        k0
    } else {
        k0.add_scaled(prob.m.matrix(), -prob.mu)
    };
    Ok(k.symmetrized())
}

/// Solves the regularised PCA problem in closed form.
pub fn solve_rpca(prob: &PcaProblem) -> Result<PcaSolution> {
    let m = prob.a.cols();
    let k_mat = build_k_matrix(prob)?;
    let eig = sym_eigen(&k_mat)?;

    // Eigenvalues come back ascending; the top of the spectrum sits at the
    // tail. Selection is by algebraic value: K can be indefinite for μ > 0
    // and the trace being maximised wants the largest values, not the
    // largest magnitudes.
    let mut q = Matrix::zeros(m, prob.k);
    let mut k_spectrum = Vec::with_capacity(prob.k);
    for t in 0..prob.k {
        let src = m - 1 - t;
        q.set_column(t, &eig.vectors.column(src));
        k_spectrum.push(eig.values[src]);
    }
    let degenerate = prob.k < m && {
        let scale = eig.values.iter().fold(0.0f64, |s, &v| s.max(v.abs())).max(1.0);
        (eig.values[m - prob.k] - eig.values[m - prob.k - 1]).abs() <= DEGENERACY_TOL * scale
    };

    let p = spd_solve(&prob.shifted_l(), &prob.a.mul(&q))?;
    let objective = rpca_objective(
        &prob.a,
        &p,
        &q,
        prob.lambda,
        prob.mu,
        prob.l.matrix(),
        prob.m.matrix(),
    )?;

    Ok(PcaSolution {
        p,
        q,
        objective,
        k_spectrum,
        degenerate,
    })
}

/// `‖A − PQᵀ‖² + λ·Tr(PᵀLP) + μ·Tr(QᵀMQ)`.
pub fn rpca_objective(
    a: &Matrix,
    p: &Matrix,
    q: &Matrix,
    lambda: f64,
    mu: f64,
    l: &Matrix,
    m: &Matrix,
) -> Result<f64> {
    if p.rows() != a.rows() || q.rows() != a.cols() || p.cols() != q.cols() {
        return Err(Error::Dimensions {
            context: "rpca_objective",
            details: format!(
                "A is {}x{}, P is {}x{}, Q is {}x{}",
                a.rows(),
                a.cols(),
                p.rows(),
                p.cols(),
                q.rows(),
                q.cols()
            ),
        });
    }
    if l.rows() != a.rows() || !l.is_square() || m.rows() != a.cols() || !m.is_square() {
        return Err(Error::Dimensions {
            context: "rpca_objective",
            details: "L must be n x n and M must be m x m".into(),
        });
    }
    let residual = a.sub(&p.mul(&q.transpose())).frobenius_norm_sq();
    let p_term = if lambda == 0.0 {
        0.0
    } else {
        lambda * trace_quadratic_form(p, l)
    };
    let q_term = if mu == 0.0 {
        0.0
    } else {
        mu * trace_quadratic_form(q, m)
    };
    Ok(residual + p_term + q_term)
}
