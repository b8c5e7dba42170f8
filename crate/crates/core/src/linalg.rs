//! Small dense helpers: vector kernels plus an LU solve used by the
//! vertex-enumeration oracle. Deliberately minimal; the sparse kernels that
//! matter for performance live in [`crate::lp::SparseMatrix`].

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Solves `a * x = b` for a dense row-major `n x n` matrix via LU with
/// partial pivoting. Returns `None` when a pivot falls below `tol`.
pub fn solve_dense(a: &[f64], b: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        let mut piv = col;
        let mut best = m[perm[col] * n + col].abs();
        for (k, &row) in perm.iter().enumerate().skip(col + 1) {
            let v = m[row * n + col].abs();
            if v > best {
                best = v;
                piv = k;
            }
        }
        if best < tol {
            return None;
        }
        perm.swap(col, piv);
        let prow = perm[col];
        let pval = m[prow * n + col];
        for &row in perm.iter().skip(col + 1) {
            let factor = m[row * n + col] / pval;
            if factor != 0.0 {
                m[row * n + col] = 0.0;
                for j in col + 1..n {
                    m[row * n + j] -= factor * m[prow * n + j];
                }
                x[row] -= factor * x[prow];
            }
        }
    }

    // Back substitution in permuted order.
    let mut out = vec![0.0; n];
    for col in (0..n).rev() {
        let row = perm[col];
        let mut v = x[row];
        for j in col + 1..n {
            v -= m[row * n + j] * out[j];
        }
        out[col] = v / m[row * n + col];
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [2 1; 1 3] x = [3; 5] -> x = (4/5, 7/5)
        let a = [2.0, 1.0, 1.0, 3.0];
        let b = [3.0, 5.0];
        let x = solve_dense(&a, &b, 2, 1e-12).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12);
        assert!((x[1] - 1.4).abs() < 1e-12);
    }

    #[test]
    fn rejects_singular() {
        let a = [1.0, 2.0, 2.0, 4.0];
        let b = [1.0, 2.0];
        assert!(solve_dense(&a, &b, 2, 1e-9).is_none());
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let a = [0.0, 1.0, 1.0, 0.0];
        let b = [2.0, 3.0];
        let x = solve_dense(&a, &b, 2, 1e-12).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12);
        assert!((x[1] - 2.0).abs() < 1e-12);
    }
}
