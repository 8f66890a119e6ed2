use std::ops::{Add, Index, IndexMut, Mul, Sub};

use super::LinalgError;

/// Dense real matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for (idx, &v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(LinalgError::NonFiniteEntry {
                    row: idx / cols,
                    col: idx % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        if r == 0 {
            return Err(LinalgError::DimensionMismatch("empty matrix".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch(
                "ragged rows in matrix literal".into(),
            ));
        }
        Self::new(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Symmetrize a square matrix: (M + Mᵀ)/2.
    pub fn symmetric_part(&self) -> SymmetricMatrix {
        assert!(self.is_square(), "symmetric_part of non-square matrix");
        SymmetricMatrix::symmetrize(self)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }
}

/// Symmetric n×n matrix with full square storage; entries are exactly
/// symmetric by construction (symmetrized on entry).
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    mat: Matrix,
}

impl SymmetricMatrix {
    /// Build from a square matrix by averaging with its transpose.
    pub fn symmetrize(m: &Matrix) -> Self {
        assert!(m.is_square(), "symmetrize of non-square matrix");
        let n = m.rows();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        Self { mat: out }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let m = Matrix::from_rows(rows)?;
        if !m.is_square() {
            return Err(LinalgError::DimensionMismatch(
                "symmetric matrix must be square".into(),
            ));
        }
        Ok(Self::symmetrize(&m))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            mat: Matrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: Matrix::identity(n),
        }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Matrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Self { mat: m }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    pub fn scale(&self, s: f64) -> SymmetricMatrix {
        Self {
            mat: self.mat.scale(s),
        }
    }

    pub fn add(&self, other: &SymmetricMatrix) -> SymmetricMatrix {
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &SymmetricMatrix) -> SymmetricMatrix {
        Self {
            mat: &self.mat - &other.mat,
        }
    }

    pub fn norm_fro(&self) -> f64 {
        self.mat.norm_fro()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    /// Quadratic form xᵀSx.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.mat
            .matvec(x)
            .iter()
            .zip(x)
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl Index<(usize, usize)> for SymmetricMatrix {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.mat[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_identity() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let i = Matrix::identity(2);
        assert_eq!(&a * &i, a);
    }

    #[test]
    fn symmetrize_averages() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        let s = SymmetricMatrix::symmetrize(&m);
        assert_eq!(s[(0, 1)], 1.0);
        assert_eq!(s[(1, 0)], 1.0);
    }

    #[test]
    fn rejects_non_finite() {
        let err = Matrix::new(1, 2, vec![1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, LinalgError::NonFiniteEntry { row: 0, col: 1 }));
    }

    #[test]
    fn norms() {
        let m = Matrix::from_rows(&[vec![3.0, 4.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(m.norm_fro(), 5.0);
        assert_eq!(m.norm_inf(), 7.0);
    }
}
