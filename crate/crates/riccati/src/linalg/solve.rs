use super::{LinalgError, Matrix};

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// A pivot whose magnitude falls below 1e-14 times its row scale is
/// reported as singular.
pub fn solve_dense(a: &Matrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch(
            "solve_dense needs a square matrix".into(),
        ));
    }
    let n = a.rows();
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "rhs length {} for {}x{} system",
            b.len(),
            n,
            n
        )));
    }

    let mut m = a.clone();
    let mut x = b.to_vec();
    let row_scale: Vec<f64> = (0..n)
        .map(|i| m.row(i).iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1e-300))
        .collect();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                let a_ = m[(i, col)].abs() / row_scale[i];
                let b_ = m[(j, col)].abs() / row_scale[j];
                a_.partial_cmp(&b_).unwrap()
            })
            .unwrap();
        if m[(pivot_row, col)].abs() < 1e-14 * row_scale[pivot_row] {
            return Err(LinalgError::SingularMatrix { pivot: col });
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot_row, j)];
                m[(pivot_row, j)] = tmp;
            }
            x.swap(col, pivot_row);
        }
        let pivot = m[(col, col)];
        for i in col + 1..n {
            let factor = m[(i, col)] / pivot;
            if factor == 0.0 {
                continue;
            }
            m[(i, col)] = 0.0;
            for j in col + 1..n {
                m[(i, j)] -= factor * m[(col, j)];
            }
            x[i] -= factor * x[col];
        }
    }

    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (x[i] - s) / m[(i, i)];
    }
    Ok(x)
}
