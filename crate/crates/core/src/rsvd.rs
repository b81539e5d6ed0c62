//! Iterative regularised SVD: `A ≈ P B Qᵀ` with orthonormal `Q`, unit-norm
//! columns in `P` and diagonal `B`.
//!
//! Minimises `‖A − PBQᵀ‖² + λ‖DP‖² + μ‖GQ‖²`. For a fixed `Q` the optimal
//! `P` and `B` are closed-form: column `i` of `P` is the eigenvector of
//! `S(qᵢ) = λL − (Aqᵢ)(Aqᵢ)ᵀ` for its smallest eigenvalue, and
//! `βᵢ = (PᵀAQ)ᵢᵢ`. The whole problem therefore reduces to minimising
//! `ψ(Q) = Σᵢ λ₁(S(qᵢ)) + μ qᵢᵀMqᵢ` over orthonormal `Q`, which runs on the
//! rotation-based descent engine; `P` and `B` are extracted once afterwards.
//!
//! Unlike standard SVD nothing forces the columns of `P` to be mutually
//! orthogonal here; `‖PᵀP − I‖` is reported as a diagnostic, never enforced.

use crate::descent::{minimize, orthonormality_residual, DescentConfig, ORTHONORMALITY_TOL};
use crate::eigen::sym_eigen;
use crate::error::{Error, Result};
use crate::matrix::{dot, norm, trace_quadratic_form, Matrix};
use crate::par;
use crate::regularizer::RegularizerMatrix;
use crate::svd::svd;

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

/// Unit-norm tolerance on single columns fed to [`s_matrix`].
pub const UNIT_TOL: f64 = 1e-10;

/// Gap below which the smallest eigenvalue of some `S(qᵢ)` counts as
/// degenerate; any eigenvector choice then attains the same ψ.
const DEGENERACY_TOL: f64 = 1e-10;

/// Choice of the starting point for the descent on ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialQ {
    /// The leading k right singular vectors of `A`; these already solve the
    /// unregularised problem, so the descent starts in the right basin.
    LeadingSingularVectors,
    /// A seeded random orthonormal frame, for robustness studies.
    RandomOrthonormal,
}

/// A regularised SVD instance.
#[derive(Debug, Clone)]
pub struct RsvdProblem {
    pub a: Matrix,
    pub k: usize,
    pub lambda: f64,
    pub mu: f64,
    pub l: RegularizerMatrix,
    pub m: RegularizerMatrix,
    pub descent: DescentConfig,
    pub init: InitialQ,
}

impl RsvdProblem {
    pub fn new(
        a: Matrix,
        k: usize,
        lambda: f64,
        mu: f64,
        l: RegularizerMatrix,
        m: RegularizerMatrix,
        descent: DescentConfig,
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
                context: "RsvdProblem",
                details: format!("L is {0}x{0} but A has {1} rows", l.size(), a.rows()),
            });
        }
        if m.size() != a.cols() {
            return Err(Error::Dimensions {
                context: "RsvdProblem",
                details: format!("M is {0}x{0} but A has {1} columns", m.size(), a.cols()),
            });
        }
        descent.validate()?;
        Ok(Self {
            a,
            k,
            lambda,
            mu,
            l,
            m,
            descent,
            init: InitialQ::LeadingSingularVectors,
        })
    }

    pub fn with_init(mut self, init: InitialQ) -> Self {
        self.init = init;
        self
    }
}

/// Numerical health indicators alongside an [`RsvdSolution`].
#[derive(Debug, Clone)]
pub struct RsvdDiagnostics {
    /// `‖PᵀP − I‖`; the factorisation does not promise orthogonal `P`.
    pub p_gram_residual: f64,
    /// The smallest eigenvalue of some `S(qᵢ)` tied with the next one.
    pub degenerate_smallest: bool,
}

/// Solution of an [`RsvdProblem`].
#[derive(Debug, Clone)]
pub struct RsvdSolution {
    /// `n × k`, unit-norm columns.
    pub p: Matrix,
    /// Diagonal of `B`, sign-fixed nonnegative.
    pub b: Vec<f64>,
    /// `m × k`, orthonormal columns.
    pub q: Matrix,
    /// ψ at the start plus after each accepted descent step; non-increasing.
    pub psi_trace: Vec<f64>,
    /// `F(P, Q, B)` at the returned factors.
    pub objective: f64,
    pub converged: bool,
    /// Accepted descent steps consumed.
    pub iterations: usize,
    pub diagnostics: RsvdDiagnostics,
}

/// `S(q) = λL − (Aq)(Aq)ᵀ`, exactly symmetric by construction.
pub fn s_matrix(q: &[f64], a: &Matrix, lambda: f64, l: &Matrix) -> Result<Matrix> {
    if q.len() != a.cols() {
        return Err(Error::Dimensions {
            context: "s_matrix",
            details: format!("q has length {} but A has {} columns", q.len(), a.cols()),
        });
    }
    if l.rows() != a.rows() || !l.is_square() {
        return Err(Error::Dimensions {
            context: "s_matrix",
            details: format!(
                "L is {}x{} but A has {} rows",
                l.rows(),
                l.cols(),
                a.rows()
            ),
        });
    }
    let len = norm(q);
    if (len - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit {
            index: 0,
            norm: len,
        });
    }
    Ok(s_matrix_unchecked(q, a, lambda, l))
}

fn s_matrix_unchecked(q: &[f64], a: &Matrix, lambda: f64, l: &Matrix) -> Matrix {
    let w = a.mul_vec(q);
    let n = a.rows();
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = lambda * l.get(i, j) - w[i] * w[j];
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    s
}

/// `ψ(Q) = Σᵢ λ₁(S(qᵢ)) + μ·qᵢᵀMqᵢ` for orthonormal-column `Q`.
///
/// The k eigendecompositions are independent and run concurrently under the
/// `parallel` feature; the sum is reduced in column order either way.
pub fn psi(
    q: &Matrix,
    a: &Matrix,
    lambda: f64,
    mu: f64,
    l: &Matrix,
    m: &Matrix,
) -> Result<f64> {
    check_psi_shapes(q, a, l, m)?;
    let residual = orthonormality_residual(q);
    if residual > ORTHONORMALITY_TOL {
        return Err(Error::NotOrthonormal {
            residual,
            tolerance: ORTHONORMALITY_TOL,
        });
    }
    Ok(psi_unchecked(q, a, lambda, mu, l, m))
}

fn check_psi_shapes(q: &Matrix, a: &Matrix, l: &Matrix, m: &Matrix) -> Result<()> {
    if q.rows() != a.cols() {
        return Err(Error::Dimensions {
            context: "psi",
            details: format!("Q has {} rows but A has {} columns", q.rows(), a.cols()),
        });
    }
    if l.rows() != a.rows() || !l.is_square() {
        return Err(Error::Dimensions {
            context: "psi",
            details: "L must be n x n".into(),
        });
    }
    if m.rows() != a.cols() || !m.is_square() {
        return Err(Error::Dimensions {
            context: "psi",
            details: "M must be m x m".into(),
        });
    }
    Ok(())
}

fn psi_unchecked(q: &Matrix, a: &Matrix, lambda: f64, mu: f64, l: &Matrix, m: &Matrix) -> f64 {
    let per_column: Vec<f64> = par::indexed_map(q.cols(), |i| {
        let qi = q.column(i);
        let s = s_matrix_unchecked(&qi, a, lambda, l);
        let eig = sym_eigen(&s).expect("S(q) is square and exactly symmetric");
        let penalty = if mu == 0.0 {
            0.0
        } else {
            mu * dot(&m.mul_vec(&qi), &qi)
        };
        eig.values[0] + penalty
    });
    per_column.iter().sum()
}

/// Left factor for a fixed `Q`: column `i` is the unit eigenvector of
/// `S(qᵢ)` for its smallest eigenvalue, sign-fixed so `βᵢ = pᵢᵀAqᵢ ≥ 0`.
pub fn extract_p(q: &Matrix, a: &Matrix, lambda: f64, l: &Matrix) -> Result<Matrix> {
    let (p, _) = extract_p_with_diagnostics(q, a, lambda, l)?;
    Ok(p)
}

fn extract_p_with_diagnostics(
    q: &Matrix,
    a: &Matrix,
    lambda: f64,
    l: &Matrix,
) -> Result<(Matrix, bool)> {
    if q.rows() != a.cols() {
        return Err(Error::Dimensions {
            context: "extract_p",
            details: format!("Q has {} rows but A has {} columns", q.rows(), a.cols()),
        });
    }
    let residual = orthonormality_residual(q);
    if residual > ORTHONORMALITY_TOL {
        return Err(Error::NotOrthonormal {
            residual,
            tolerance: ORTHONORMALITY_TOL,
        });
    }
    let n = a.rows();
    let columns: Vec<(Vec<f64>, bool)> = par::indexed_map(q.cols(), |i| {
        let qi = q.column(i);
        let s = s_matrix_unchecked(&qi, a, lambda, l);
        let eig = sym_eigen(&s).expect("S(q) is square and exactly symmetric");
        let mut p = eig.vectors.column(0);
        let beta = dot(&p, &a.mul_vec(&qi));
        if beta < 0.0 {
            for x in &mut p {
                *x = -*x;
            }
        }
        let scale = eig.values.iter().fold(0.0f64, |s, &v| s.max(v.abs())).max(1.0);
        let degenerate = n > 1 && (eig.values[1] - eig.values[0]).abs() <= DEGENERACY_TOL * scale;
        (p, degenerate)
    });
    let mut p = Matrix::zeros(n, q.cols());
    let mut degenerate = false;
    for (i, (col, deg)) in columns.iter().enumerate() {
        p.set_column(i, col);
        degenerate |= deg;
    }
    Ok((p, degenerate))
}

/// `βᵢ = (PᵀAQ)ᵢᵢ`, the optimal diagonal for fixed `P` and `Q`.
pub fn extract_b(p: &Matrix, a: &Matrix, q: &Matrix) -> Result<Vec<f64>> {
    if p.rows() != a.rows() || q.rows() != a.cols() || p.cols() != q.cols() {
        return Err(Error::Dimensions {
            context: "extract_b",
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
    Ok((0..p.cols())
        .map(|i| dot(&p.column(i), &a.mul_vec(&q.column(i))))
        .collect())
}

/// Reconstruction `P · diag(b) · Qᵀ`.
pub fn reconstruct(p: &Matrix, b: &[f64], q: &Matrix) -> Matrix {
    assert_eq!(p.cols(), b.len());
    assert_eq!(q.cols(), b.len());
    let mut out = Matrix::zeros(p.rows(), q.rows());
    for t in 0..b.len() {
        for i in 0..p.rows() {
            let c = b[t] * p.get(i, t);
            if c == 0.0 {
                continue;
            }
            for j in 0..q.rows() {
                out[(i, j)] += c * q.get(j, t);
            }
        }
    }
    out
}

/// Runs the descent on ψ from the configured start, then extracts `P` and
/// `B` once. The μ = 0 problem is the same code path with the `M`-term
/// dropped.
pub fn solve_rsvd(prob: &RsvdProblem) -> Result<RsvdSolution> {
    let q0 = initial_q(prob);
    let (a, l, m) = (&prob.a, prob.l.matrix(), prob.m.matrix());
    let (lambda, mu) = (prob.lambda, prob.mu);
    let psi_fn = move |q: &Matrix| psi_unchecked(q, a, lambda, mu, l, m);

    let run = minimize(&psi_fn, &q0, &prob.descent)?;
    let q = run.q;
    let (p, degenerate_smallest) = extract_p_with_diagnostics(&q, a, lambda, l)?;
    let b = extract_b(&p, a, &q)?;

    let residual = a.sub(&reconstruct(&p, &b, &q)).frobenius_norm_sq();
    let p_term = if lambda == 0.0 {
        0.0
    } else {
        lambda * trace_quadratic_form(&p, l)
    };
    let q_term = if mu == 0.0 {
        0.0
    } else {
        mu * trace_quadratic_form(&q, m)
    };
    let p_gram = p
        .transpose()
        .mul(&p)
        .sub(&Matrix::identity(p.cols()))
        .frobenius_norm();

    Ok(RsvdSolution {
        p,
        b,
        q,
        psi_trace: run.trace,
        objective: residual + p_term + q_term,
        converged: run.converged,
        iterations: run.accepted_steps,
        diagnostics: RsvdDiagnostics {
            p_gram_residual: p_gram,
            degenerate_smallest,
        },
    })
}

fn initial_q(prob: &RsvdProblem) -> Matrix {
    match prob.init {
        InitialQ::LeadingSingularVectors => {
            let dec = svd(&prob.a);
            let mut q = Matrix::zeros(prob.a.cols(), prob.k);
            for t in 0..prob.k {
                q.set_column(t, &dec.v.column(t));
            }
            q
        }
        InitialQ::RandomOrthonormal => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(prob.descent.seed);
            let raw = Matrix::from_fn(prob.a.cols(), prob.k, |_, _| {
                StandardNormal.sample(&mut rng)
            });
            crate::descent::orthonormalize_columns(&raw)
        }
    }
}
