//! Small dense linear algebra used by the LP solver and the least-squares
//! fits. Matrices are row-major `Vec<Vec<f64>>`.

use alloc::vec::Vec;

/// LU factorization with partial pivoting of a square matrix.
#[derive(Debug, Clone)]
pub(crate) struct Lu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl Lu {
    /// Returns `None` when a pivot falls below `tiny` (numerically singular).
    pub(crate) fn factor(mut a: Vec<Vec<f64>>, tiny: f64) -> Option<Lu> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (pivot, best) = (col..n)
                .map(|r| (r, a[r][col].abs()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= tiny {
                return None;
            }
            a.swap(col, pivot);
            perm.swap(col, pivot);
            let p = a[col][col];
            for r in col + 1..n {
                let factor = a[r][col] / p;
                if factor != 0.0 {
                    a[r][col] = factor;
                    for c in col + 1..n {
                        a[r][c] -= factor * a[col][c];
                    }
                } else {
                    a[r][col] = 0.0;
                }
            }
        }
        Some(Lu { lu: a, perm })
    }

    /// Solves `A x = b`.
    pub(crate) fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let mut s = x[r];
            for c in 0..r {
                s -= self.lu[r][c] * x[c];
            }
            x[r] = s;
        }
        for r in (0..n).rev() {
            let mut s = x[r];
            for c in r + 1..n {
                s -= self.lu[r][c] * x[c];
            }
            x[r] = s / self.lu[r][r];
        }
        x
    }
}

/// Least-squares solution of the overdetermined system `A x ≈ b` by
/// Householder QR, with columns scaled to unit norm first.
pub(crate) fn least_squares(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m < n || n == 0 {
        return None;
    }
    let scale: Vec<f64> = (0..n)
        .map(|c| libm::sqrt(a.iter().map(|row| row[c] * row[c]).sum::<f64>()))
        .collect();
    if scale.contains(&0.0) {
        return None;
    }
    let mut r: Vec<Vec<f64>> = a
        .iter()
        .map(|row| row.iter().zip(&scale).map(|(v, s)| v / s).collect())
        .collect();
    let mut y = b.to_vec();
    for k in 0..n {
        let norm = libm::sqrt((k..m).map(|i| r[i][k] * r[i][k]).sum::<f64>());
        if norm < 1e-300 {
            return None;
        }
        let alpha = if r[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in k..n {
            let dot: f64 = (k..m).map(|i| v[i - k] * r[i][c]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                r[i][c] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i - k] * y[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            y[i] -= f * v[i - k];
        }
    }
    let mut x = alloc::vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = y[k];
        for c in k + 1..n {
            s -= r[k][c] * x[c];
        }
        if r[k][k].abs() < 1e-14 {
            return None;
        }
        x[k] = s / r[k][k];
    }
    Some(x.iter().zip(&scale).map(|(v, s)| v / s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn lu_solves() {
        let a = vec![
            vec![0.0, 2.0, 1.0],
            vec![1.0, -1.0, 0.0],
            vec![3.0, 0.0, -2.0],
        ];
        let lu = Lu::factor(a.clone(), 1e-12).unwrap();
        let b = [1.0, 2.0, 3.0];
        let x = lu.solve(&b);
        for r in 0..3 {
            let s: f64 = (0..3).map(|c| a[r][c] * x[c]).sum();
            assert!((s - b[r]).abs() < 1e-12);
        }
        assert!(Lu::factor(vec![vec![1.0, 2.0], vec![2.0, 4.0]], 1e-12).is_none());
    }

    #[test]
    fn least_squares_recovers_line() {
        let a: Vec<Vec<f64>> = (0..10).map(|i| vec![1.0, i as f64]).collect();
        let b: Vec<f64> = (0..10).map(|i| 3.0 - 0.5 * i as f64).collect();
        let x = least_squares(&a, &b).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] + 0.5).abs() < 1e-12);
    }
}
