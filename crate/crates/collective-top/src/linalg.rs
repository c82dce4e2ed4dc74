//! Small fixed-size dense linear algebra for the Newton solves.
//!
//! States here are at most 8-dimensional, so a direct Gaussian elimination
//! with partial pivoting is all that is needed.

/// Solve `A x = b` in place for a small dense system.
///
/// Returns `None` if a pivot is smaller than `1e-300` in magnitude.
pub fn solve<const N: usize>(a: &[[f64; N]; N], b: &[f64; N]) -> Option<[f64; N]> {
    let mut m = *a;
    let mut x = *b;
    for col in 0..N {
        let mut pivot = col;
        for row in col + 1..N {
            if m[row][col].abs() > m[pivot][col].abs() {
                pivot = row;
            }
        }
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        x.swap(col, pivot);
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] -= f * m[col][k];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..N).rev() {
        for row in 0..col {
            let f = m[row][col] / m[col][col];
            x[row] -= f * x[col];
        }
        x[col] /= m[col][col];
    }
    Some(x)
}

pub fn matvec<const M: usize, const N: usize>(a: &[[f64; N]; M], x: &[f64; N]) -> [f64; M] {
    let mut out = [0.0; M];
    for i in 0..M {
        for j in 0..N {
            out[i] += a[i][j] * x[j];
        }
    }
    out
}

pub fn inf_norm<const N: usize>(x: &[f64; N]) -> f64 {
    x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}
