//! Regularised PCA- and SVD-type matrix factorisations.
//!
//! Given a data matrix `A`, this crate computes two low-rank decompositions
//! that trade reconstruction error against smoothness (or graph-structure)
//! penalties on the factors:
//!
//! * **Regularised PCA** — `A ≈ P Qᵀ` with orthonormal `Q`, minimising
//!   `‖A − PQᵀ‖² + λ‖DP‖² + μ‖GQ‖²`. Solved in closed form through the
//!   eigenvectors of `K = Aᵀ(I + λL)⁻¹A − μM`; see [`rpca`].
//! * **Regularised SVD** — `A ≈ P B Qᵀ` with diagonal `B`, orthonormal `Q`
//!   and unit-norm columns in `P`, same penalties. Solved iteratively by
//!   descending the reduced objective `ψ(Q)` over the orthonormal-column
//!   constraint set with plane rotations from SO(m); see [`rsvd`] and
//!   [`descent`].
//!
//! Penalties enter only through the symmetric PSD Gram matrices `L = DᵀD`
//! and `M = GᵀG`, built by [`regularizer`]. The numerical substrate is a
//! dense row-major [`matrix::Matrix`] with a Jacobi eigensolver
//! ([`eigen`]), a Gram-matrix SVD ([`svd`]) and Cholesky solves
//! ([`solve`]) — no external linear-algebra backend.
//!
//! With the default `parallel` feature the embarrassingly parallel inner
//! loops (multi-column solves, per-column eigendecompositions, descent
//! direction probes) run on rayon; results are reduced in a fixed order, so
//! outputs are bitwise identical with and without the feature.

pub mod descent;
pub mod eigen;
mod error;
pub mod matrix;
mod par;
pub mod regularizer;
pub mod rpca;
pub mod rsvd;
pub mod solve;
pub mod svd;

pub use descent::{
    apply_rotation, directional_derivative, givens_rotation, minimize, orthonormality_residual,
    orthonormalize_columns, random_step, steepest_step, DescentConfig, MinimizeResult, SkewIndex,
    StepOutcome, Strategy,
};
pub use eigen::{sym_eigen, SymEigen};
pub use error::{Error, Result};
pub use matrix::{trace_quadratic_form, Matrix};
pub use regularizer::{
    build_graph_laplacian, build_second_difference, realize, RegularizerKind, RegularizerMatrix,
    RegularizerSpec,
};
pub use rpca::{build_k_matrix, rpca_objective, solve_rpca, PcaProblem, PcaSolution};
pub use rsvd::{
    extract_b, extract_p, psi, reconstruct, s_matrix, solve_rsvd, InitialQ, RsvdProblem,
    RsvdSolution,
};
pub use solve::{factor_spd, spd_solve, SpdFactor};
pub use svd::{svd, truncate_svd, SvdResult};
