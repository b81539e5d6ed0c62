//! Regulariser matrices: the Gram forms `L = DᵀD` / `M = GᵀG` the solvers
//! consume.
//!
//! The solvers never see `D` or `G` themselves — every formula they evaluate
//! goes through the symmetric positive semi-definite Gram matrix. Built-ins
//! cover the identity, the second-difference smoother and graph Laplacians;
//! anything else comes in as a user-supplied PSD matrix.

use crate::eigen::sym_eigen;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Tolerance on the smallest eigenvalue when admitting a custom matrix:
/// `λ_min ≥ −PSD_TOL · ‖L‖`.
pub const PSD_TOL: f64 = 1e-8;

/// Absolute symmetry tolerance for adjacency matrices.
pub const ADJACENCY_SYM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum RegularizerKind {
    /// No penalty: `L = 0`.
    None,
    /// `D = I`, hence `L = DᵀD = I`.
    Identity,
    /// Second-difference smoother, `L = DᵀD` with tridiagonal `D`.
    SecondDifference,
    /// Graph Laplacian `Degree − Adjacency`, used directly (it is already
    /// the PSD Gram of the incidence matrix).
    GraphLaplacian,
    /// Caller-provided symmetric PSD matrix, admitted after a spectral check.
    Custom,
}

impl RegularizerKind {
    pub fn name(&self) -> &'static str {
        match self {
            RegularizerKind::None => "none",
            RegularizerKind::Identity => "identity",
            RegularizerKind::SecondDifference => "second_difference",
            RegularizerKind::GraphLaplacian => "graph_laplacian",
            RegularizerKind::Custom => "custom",
        }
    }
}

/// Declarative recipe for one regulariser matrix.
#[derive(Debug, Clone)]
pub struct RegularizerSpec {
    pub kind: RegularizerKind,
    pub size: usize,
    /// Square symmetric nonnegative adjacency with zero diagonal
    /// (`GraphLaplacian` only).
    pub adjacency: Option<Matrix>,
    /// Symmetric PSD matrix (`Custom` only).
    pub custom: Option<Matrix>,
}

impl RegularizerSpec {
    pub fn none(size: usize) -> Self {
        Self {
            kind: RegularizerKind::None,
            size,
            adjacency: None,
            custom: None,
        }
    }

    pub fn identity(size: usize) -> Self {
        Self {
            kind: RegularizerKind::Identity,
            size,
            adjacency: None,
            custom: None,
        }
    }

    pub fn second_difference(size: usize) -> Self {
        Self {
            kind: RegularizerKind::SecondDifference,
            size,
            adjacency: None,
            custom: None,
        }
    }

    pub fn graph_laplacian(adjacency: Matrix) -> Self {
        Self {
            kind: RegularizerKind::GraphLaplacian,
            size: adjacency.rows(),
            adjacency: Some(adjacency),
            custom: None,
        }
    }

    pub fn custom(matrix: Matrix) -> Self {
        Self {
            kind: RegularizerKind::Custom,
            size: matrix.rows(),
            adjacency: None,
            custom: Some(matrix),
        }
    }
}

/// A realised regulariser: square, exactly symmetric, PSD within tolerance.
#[derive(Debug, Clone)]
pub struct RegularizerMatrix {
    matrix: Matrix,
    spec: RegularizerSpec,
}

impl RegularizerMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn spec(&self) -> &RegularizerSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }
}

/// The tridiagonal second-derivative extractor `D` (n ≥ 3): first row
/// `(−1, 1, 0, …)`, interior rows `(…, 1, −2, 1, …)`, last row
/// `(…, 0, 1, −1)`.
pub fn build_second_difference(n: usize) -> Result<Matrix> {
    if n < 3 {
        return Err(Error::TooSmall { n });
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        let diag = if i == 0 || i == n - 1 { -1.0 } else { -2.0 };
        if i == j {
            diag
        } else if j + 1 == i || i + 1 == j {
            1.0
        } else {
            0.0
        }
    }))
}

/// Graph Laplacian `Degree − Adjacency` for a symmetric nonnegative
/// adjacency with zero diagonal. Row sums vanish by construction.
pub fn build_graph_laplacian(adjacency: &Matrix) -> Result<Matrix> {
    validate_adjacency(adjacency)?;
    let n = adjacency.rows();
    let w = adjacency.symmetrized();
    let degrees: Vec<f64> = (0..n).map(|i| w.row(i).iter().sum()).collect();
    let mut lap = w.scale(-1.0);
    for i in 0..n {
        lap[(i, i)] = degrees[i];
    }
    Ok(lap)
}

fn validate_adjacency(adjacency: &Matrix) -> Result<()> {
    if !adjacency.is_square() {
        return Err(Error::NotSquare {
            rows: adjacency.rows(),
            cols: adjacency.cols(),
        });
    }
    let scale = adjacency.max_abs().max(1.0);
    for i in 0..adjacency.rows() {
        if adjacency.get(i, i).abs() > ADJACENCY_SYM_TOL {
            return Err(Error::InvalidRegularizer(format!(
                "adjacency diagonal entry ({i},{i}) must be zero"
            )));
        }
        for j in 0..adjacency.cols() {
            let a = adjacency.get(i, j);
            if a < 0.0 {
                return Err(Error::InvalidRegularizer(format!(
                    "adjacency entry ({i},{j}) is negative"
                )));
            }
            if (a - adjacency.get(j, i)).abs() > ADJACENCY_SYM_TOL * scale {
                return Err(Error::InvalidRegularizer(format!(
                    "adjacency is asymmetric at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}

/// Builds the regulariser matrix a spec describes.
pub fn realize(spec: &RegularizerSpec) -> Result<RegularizerMatrix> {
    if spec.size == 0 {
        return Err(Error::InvalidRegularizer("size must be positive".into()));
    }
    let matrix = match spec.kind {
        RegularizerKind::None => Matrix::zeros(spec.size, spec.size),
        RegularizerKind::Identity => Matrix::identity(spec.size),
        RegularizerKind::SecondDifference => {
            let d = build_second_difference(spec.size)?;
            gram(&d)
        }
        RegularizerKind::GraphLaplacian => {
            let adjacency = spec.adjacency.as_ref().ok_or_else(|| {
                Error::InvalidRegularizer("graph_laplacian spec needs an adjacency matrix".into())
            })?;
            if adjacency.rows() != spec.size {
                return Err(Error::InvalidRegularizer(format!(
                    "adjacency is {}x{} but spec size is {}",
                    adjacency.rows(),
                    adjacency.cols(),
                    spec.size
                )));
            }
            build_graph_laplacian(adjacency)?
        }
        RegularizerKind::Custom => {
            let custom = spec.custom.as_ref().ok_or_else(|| {
                Error::InvalidRegularizer("custom spec needs a matrix".into())
            })?;
            if custom.rows() != spec.size || custom.cols() != spec.size {
                return Err(Error::InvalidRegularizer(format!(
                    "custom matrix is {}x{} but spec size is {}",
                    custom.rows(),
                    custom.cols(),
                    spec.size
                )));
            }
            let eig = sym_eigen(custom)?;
            let min = eig.values[0];
            if min < -PSD_TOL * custom.frobenius_norm() {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                });
            }
            custom.symmetrized()
        }
    };
    Ok(RegularizerMatrix {
        matrix,
        spec: spec.clone(),
    })
}

/// `DᵀD`, exactly symmetric in floating point.
fn gram(d: &Matrix) -> Matrix {
    let n = d.cols();
    let mut g = Matrix::zeros(n, n);
    for r in 0..d.rows() {
        let row = d.row(r);
        for i in 0..n {
            let ri = row[i];
            if ri == 0.0 {
                continue;
            }
            for j in i..n {
                g[(i, j)] += ri * row[j];
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            g[(j, i)] = g[(i, j)];
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::trace_quadratic_form;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn second_difference_n3() {
        let d = build_second_difference(3).unwrap();
        let expect = Matrix::from_rows(&[
            vec![-1.0, 1.0, 0.0],
            vec![1.0, -2.0, 1.0],
            vec![0.0, 1.0, -1.0],
        ])
        .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn second_difference_n4() {
        let d = build_second_difference(4).unwrap();
        let expect = Matrix::from_rows(&[
            vec![-1.0, 1.0, 0.0, 0.0],
            vec![1.0, -2.0, 1.0, 0.0],
            vec![0.0, 1.0, -2.0, 1.0],
            vec![0.0, 0.0, 1.0, -1.0],
        ])
        .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn second_difference_annihilates_constants() {
        let d = build_second_difference(5).unwrap();
        let out = d.mul_vec(&[3.0; 5]);
        assert!(out.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn second_difference_rejects_small_n() {
        assert!(matches!(
            build_second_difference(2),
            Err(Error::TooSmall { n: 2 })
        ));
    }

    #[test]
    fn laplacian_single_edge() {
        let adj = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let lap = build_graph_laplacian(&adj).unwrap();
        let expect = Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        assert_eq!(lap, expect);
    }

    #[test]
    fn laplacian_empty_graph_is_zero() {
        let lap = build_graph_laplacian(&Matrix::zeros(3, 3)).unwrap();
        assert_eq!(lap, Matrix::zeros(3, 3));
    }

    #[test]
    fn laplacian_path_graph() {
        let mut adj = Matrix::zeros(4, 4);
        for i in 0..3 {
            adj[(i, i + 1)] = 1.0;
            adj[(i + 1, i)] = 1.0;
        }
        let lap = build_graph_laplacian(&adj).unwrap();
        for i in 0..4 {
            let sum: f64 = lap.row(i).iter().sum();
            assert_eq!(sum, 0.0);
        }
        let eig = sym_eigen(&lap).unwrap();
        assert!(eig.values[0].abs() <= 1e-10);
        assert!(eig.values.iter().all(|&v| v >= -1e-10));
    }

    #[test]
    fn laplacian_rejects_bad_adjacency() {
        let asym = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(build_graph_laplacian(&asym).is_err());
        let neg = Matrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(build_graph_laplacian(&neg).is_err());
    }

    #[test]
    fn realize_identity_and_none() {
        let id = realize(&RegularizerSpec::identity(3)).unwrap();
        assert_eq!(*id.matrix(), Matrix::identity(3));
        let none = realize(&RegularizerSpec::none(5)).unwrap();
        assert_eq!(*none.matrix(), Matrix::zeros(5, 5));
    }

    #[test]
    fn realize_second_difference_matches_explicit_gram() {
        let got = realize(&RegularizerSpec::second_difference(4)).unwrap();
        let d = build_second_difference(4).unwrap();
        let expect = d.transpose().mul(&d);
        assert!(got.matrix().sub(&expect).frobenius_norm() <= 1e-12);
        assert_eq!(got.matrix().asymmetry(), 0.0);
    }

    #[test]
    fn realize_custom_rejects_indefinite() {
        let bad = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(matches!(
            realize(&RegularizerSpec::custom(bad)),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn realize_requires_payload() {
        let mut spec = RegularizerSpec::none(3);
        spec.kind = RegularizerKind::GraphLaplacian;
        assert!(realize(&spec).is_err());
        spec.kind = RegularizerKind::Custom;
        assert!(realize(&spec).is_err());
    }

    #[test]
    fn penalty_equals_trace_form() {
        // ‖D P‖² = Tr(Pᵀ L P) for L = DᵀD.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = build_second_difference(6).unwrap();
        let l = realize(&RegularizerSpec::second_difference(6)).unwrap();
        let p = Matrix::from_fn(6, 2, |_, _| rng.gen_range(-1.0..1.0));
        let lhs = d.mul(&p).frobenius_norm_sq();
        let rhs = trace_quadratic_form(&p, l.matrix());
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(1.0));
    }

    #[test]
    fn gram_l_annihilates_constants() {
        let l = realize(&RegularizerSpec::second_difference(7)).unwrap();
        let out = l.matrix().mul_vec(&[1.0; 7]);
        assert!(out.iter().all(|&x| x.abs() <= 1e-12));
    }
}
