//! CSV matrix I/O and PGM image output.
//!
//! The matrix format is plain comma-separated numbers, one matrix row per
//! line, no header. Values are written with Rust's shortest round-trip
//! formatting, so a write-then-read cycle reproduces every entry bit for
//! bit. Images go out as ASCII PGM (P2) after min-max normalisation —
//! universally parseable and diff-friendly.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use regmf::Matrix;

/// Reads a rectangular numeric CSV into a matrix. Errors name the offending
/// 1-based line.
pub fn read_matrix_csv(path: &Path) -> Result<Matrix> {
    let content = fs::read_to_string(path)
        .with_context(|| format!("cannot read matrix file {}", path.display()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = 0usize;
    for (idx, raw_line) in content.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() {
            bail!("{}: line {lineno} is empty", path.display());
        }
        let mut row = Vec::new();
        for (field_idx, field) in line.split(',').enumerate() {
            let text = field.trim();
            let value: f64 = text.parse().with_context(|| {
                format!(
                    "{}: line {lineno}, field {}: not a number: {text:?}",
                    path.display(),
                    field_idx + 1
                )
            })?;
            if !value.is_finite() {
                bail!(
                    "{}: line {lineno}, field {}: non-finite value {text:?}",
                    path.display(),
                    field_idx + 1
                );
            }
            row.push(value);
        }
        if width == 0 {
            width = row.len();
        } else if row.len() != width {
            bail!(
                "{}: line {lineno} has {} fields, expected {width}",
                path.display(),
                row.len()
            );
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("{}: empty file", path.display());
    }
    Matrix::from_rows(&rows).with_context(|| format!("{}: invalid matrix", path.display()))
}

/// Writes a matrix as CSV with shortest round-trip decimals.
pub fn write_matrix_csv(matrix: &Matrix, path: &Path) -> Result<()> {
    let mut out = String::new();
    for i in 0..matrix.rows() {
        let row = matrix.row(i);
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes a vector as a single-column CSV.
pub fn write_vector_csv(v: &[f64], path: &Path) -> Result<()> {
    write_matrix_csv(&Matrix::column_vector(v), path)
}

/// Reads a vector from a CSV holding either a single column or a single row.
pub fn read_vector_csv(path: &Path) -> Result<Vec<f64>> {
    let m = read_matrix_csv(path)?;
    if m.cols() == 1 {
        Ok(m.column(0))
    } else if m.rows() == 1 {
        Ok(m.row(0).to_vec())
    } else {
        bail!(
            "{}: expected a vector (1 row or 1 column), got {}x{}",
            path.display(),
            m.rows(),
            m.cols()
        )
    }
}

/// Writes a min-max normalised grayscale rendering as ASCII PGM (P2).
pub fn write_pgm(matrix: &Matrix, path: &Path) -> Result<()> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in matrix.data() {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    let scale = if hi > lo { 255.0 / (hi - lo) } else { 0.0 };
    let mut out = format!("P2\n{} {}\n255\n", matrix.cols(), matrix.rows());
    for i in 0..matrix.rows() {
        let row: Vec<String> = matrix
            .row(i)
            .iter()
            .map(|&x| (((x - lo) * scale).round() as i64).clamp(0, 255).to_string())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use tempfile::tempdir;

    #[test]
    fn parses_basic_matrix() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("a.csv");
        fs::write(&path, "1,2\n3,4\n").unwrap();
        let m = read_matrix_csv(&path).unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m.row(0), &[1.0, 2.0]);
        assert_eq!(m.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn roundtrip_is_bit_identical() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("a.csv");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = Matrix::from_fn(7, 3, |_, _| rng.gen_range(-1.0..1.0));
        write_matrix_csv(&m, &path).unwrap();
        let back = read_matrix_csv(&path).unwrap();
        for (a, b) in m.data().iter().zip(back.data()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        // A second write of the parsed matrix is byte-identical.
        let path2 = dir.path().join("b.csv");
        write_matrix_csv(&back, &path2).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
    }

    #[test]
    fn ragged_rows_name_the_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("a.csv");
        fs::write(&path, "1,2\n3\n").unwrap();
        let err = read_matrix_csv(&path).unwrap_err().to_string();
        assert!(err.contains("line 2"), "message was: {err}");
    }

    #[test]
    fn non_numeric_field_names_the_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("a.csv");
        fs::write(&path, "1,2\n3,x\n").unwrap();
        let err = format!("{:#}", read_matrix_csv(&path).unwrap_err());
        assert!(err.contains("line 2"), "message was: {err}");
    }

    #[test]
    fn empty_file_is_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("a.csv");
        fs::write(&path, "").unwrap();
        let err = read_matrix_csv(&path).unwrap_err().to_string();
        assert!(err.contains("empty"), "message was: {err}");
    }

    #[test]
    fn pgm_header_and_range() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        let m = Matrix::from_rows(&[vec![0.0, 0.5], vec![1.0, 0.25]]).unwrap();
        write_pgm(&m, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("P2"));
        assert_eq!(lines.next(), Some("2 2"));
        assert_eq!(lines.next(), Some("255"));
        assert_eq!(lines.next(), Some("0 128"));
        assert_eq!(lines.next(), Some("255 64"));
    }

    #[test]
    fn constant_image_renders_zero() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("img.pgm");
        write_pgm(&Matrix::from_fn(2, 2, |_, _| 3.0), &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.ends_with("0 0\n0 0\n"));
    }
}
