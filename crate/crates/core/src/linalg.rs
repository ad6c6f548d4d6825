//! Dense linear algebra helpers on top of `faer`.

use dyn_stack::{MemBuffer, MemStack};
use faer::linalg::lu::partial_pivoting::factor::{lu_in_place, lu_in_place_scratch};
use faer::linalg::triangular_solve::{
    solve_lower_triangular_in_place, solve_unit_lower_triangular_in_place,
    solve_unit_upper_triangular_in_place, solve_upper_triangular_in_place,
};
use faer::{Mat, MatMut, MatRef, Par};

use crate::error::{Error, Result};

/// Reciprocal condition estimates below this mean the matrix is singular to
/// working precision. Such systems are still solved, but flagged.
pub const ILL_CONDITIONED_RCOND: f64 = f64::EPSILON;

/// Computes `a * v`.
pub fn mat_vec(a: MatRef<'_, f64>, v: &[f64]) -> Vec<f64> {
    assert_eq!(a.ncols(), v.len(), "mat_vec: dimension mismatch");
    let mut out = vec![0.0; a.nrows()];
    for (j, &vj) in v.iter().enumerate() {
        if vj == 0.0 {
            continue;
        }
        let col = a.col(j);
        for (o, &c) in out.iter_mut().zip(col.iter()) {
            *o += c * vj;
        }
    }
    out
}

/// Builds a column vector matrix from a slice.
pub fn column(v: &[f64]) -> Mat<f64> {
    Mat::from_fn(v.len(), 1, |i, _| v[i])
}

/// LU factorization with partial pivoting that reuses the input storage.
///
/// Factors in place so that only one `n x n` buffer is alive, which matters
/// for the largest disk grids. Only a zero or non-finite pivot is an error;
/// near-singular matrices are factored and report a small [`DenseLu::rcond`].
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: Mat<f64>,
    perm: Vec<usize>,
    rcond: f64,
}

impl DenseLu {
    /// Factors a square matrix, taking ownership of its storage.
    pub fn factor(mut a: Mat<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch {
                what: "square matrix columns",
                expected: n,
                got: a.ncols(),
            });
        }
        let norm1 = (0..n)
            .map(|j| a.col(j).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0f64, f64::max);
        let mut perm = vec![0usize; n];
        let mut perm_inv = vec![0usize; n];
        let mut buf = MemBuffer::new(lu_in_place_scratch::<usize, f64>(
            n,
            n,
            Par::Seq,
            Default::default(),
        ));
        lu_in_place(
            a.as_mut(),
            &mut perm,
            &mut perm_inv,
            Par::Seq,
            MemStack::new(&mut buf),
            Default::default(),
        );
        if (0..n).any(|i| a[(i, i)] == 0.0 || !a[(i, i)].is_finite()) {
            return Err(Error::SingularSystem { rcond: 0.0 });
        }

        let mut lu = Self {
            lu: a,
            perm,
            rcond: 1.0,
        };
        if n > 0 {
            let rcond = 1.0 / (norm1 * lu.inverse_norm1_estimate());
            if !(rcond.is_finite() && rcond > 0.0) {
                return Err(Error::SingularSystem { rcond: 0.0 });
            }
            lu.rcond = rcond;
        }
        Ok(lu)
    }

    /// Lower bound on `||A^{-1}||_1` by Hager's method, usually exact.
    fn inverse_norm1_estimate(&self) -> f64 {
        let n = self.dim();
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        for iter in 0..5 {
            let y = self.solve(&x);
            let norm: f64 = y.iter().map(|v| v.abs()).sum();
            if iter > 0 && norm <= est {
                break;
            }
            est = norm;
            let xi: Vec<f64> = y
                .iter()
                .map(|v| if *v >= 0.0 { 1.0 } else { -1.0 })
                .collect();
            let z = self.solve_transpose(&xi);
            let (j, zj) = z.iter().enumerate().fold((0, 0.0f64), |(bj, bz), (j, v)| {
                if v.abs() > bz {
                    (j, v.abs())
                } else {
                    (bj, bz)
                }
            });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zj <= ztx {
                break;
            }
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j] = 1.0;
        }
        est
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let mut w = column(b);
        let lt = self.lu.as_ref().transpose();
        solve_lower_triangular_in_place(lt, w.as_mut(), Par::Seq);
        solve_unit_upper_triangular_in_place(lt, w.as_mut(), Par::Seq);
        let mut x = vec![0.0; b.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[(i, 0)];
        }
        x
    }

    /// Order of the factored matrix.
    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    /// Estimate of `1 / (||A||_1 ||A^{-1}||_1)`; 1 for an empty matrix.
    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    /// Whether the matrix is singular to working precision.
    pub fn is_ill_conditioned(&self) -> bool {
        self.rcond < ILL_CONDITIONED_RCOND
    }

    /// Determinant of the factored matrix.
    pub fn determinant(&self) -> f64 {
        let n = self.dim();
        let mut det = 1.0;
        for i in 0..n {
            det *= self.lu[(i, i)];
        }
        // parity of the row permutation
        let mut seen = vec![false; n];
        let mut swaps = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.perm[k];
                len += 1;
            }
            swaps += len - 1;
        }
        if swaps % 2 == 1 {
            -det
        } else {
            det
        }
    }

    /// Solves `A X = B` in place for every column of `rhs`.
    pub fn solve_in_place(&self, mut rhs: MatMut<'_, f64>) {
        let n = self.dim();
        assert_eq!(rhs.nrows(), n, "DenseLu: rhs row count");
        let mut tmp = vec![0.0; n];
        for j in 0..rhs.ncols() {
            for (i, t) in tmp.iter_mut().enumerate() {
                *t = rhs[(self.perm[i], j)];
            }
            for (i, &t) in tmp.iter().enumerate() {
                rhs[(i, j)] = t;
            }
        }
        solve_unit_lower_triangular_in_place(self.lu.as_ref(), rhs.as_mut(), Par::Seq);
        solve_upper_triangular_in_place(self.lu.as_ref(), rhs.as_mut(), Par::Seq);
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = column(b);
        self.solve_in_place(x.as_mut());
        x.col(0).iter().copied().collect()
    }

    /// Returns `A^{-1} B`.
    pub fn solve_mat(&self, b: MatRef<'_, f64>) -> Mat<f64> {
        let mut x = b.to_owned();
        self.solve_in_place(x.as_mut());
        x
    }
}

/// Solves `A x = b` with a fresh factorization.
pub fn solve_dense(a: Mat<f64>, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            what: "right-hand side",
            expected: a.nrows(),
            got: b.len(),
        });
    }
    Ok(DenseLu::factor(a)?.solve(b))
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest absolute entry.
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> Mat<f64> {
        Mat::from_fn(n, n, |i, j| {
            let s = ((i * 7 + j * 13) % 11) as f64 - 5.0;
            if i == j {
                s + 20.0
            } else {
                s / (1.0 + (i + j) as f64)
            }
        })
    }

    #[test]
    fn solve_recovers_known_vector() {
        let a = sample(37);
        let x: Vec<f64> = (0..37).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = mat_vec(a.as_ref(), &x);
        let got = solve_dense(a, &b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { 0.0 } else { 1.0 });
        let lu = DenseLu::factor(a).unwrap();
        assert_eq!(lu.solve(&[2.0, 3.0]), vec![3.0, 2.0]);
        assert_eq!(lu.determinant(), -1.0);
    }

    #[test]
    fn determinant_matches_faer() {
        let a = sample(12);
        let want = a.as_ref().determinant();
        let got = DenseLu::factor(a).unwrap().determinant();
        assert!((got - want).abs() <= 1e-10 * want.abs());
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = Mat::from_fn(3, 3, |i, j| if j == 1 { 0.0 } else { (i + j + 1) as f64 });
        assert!(matches!(
            DenseLu::factor(a),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn rank_deficient_matrix_is_flagged() {
        let a = Mat::from_fn(6, 6, |i, j| (i + j) as f64);
        match DenseLu::factor(a) {
            Ok(lu) => assert!(lu.is_ill_conditioned(), "{}", lu.rcond()),
            Err(e) => assert!(matches!(e, Error::SingularSystem { .. })),
        }
    }

    #[test]
    fn condition_estimate_of_diagonal_is_exact() {
        let d = [4.0, -0.5, 2.0, 1e-3];
        let a = Mat::from_fn(4, 4, |i, j| if i == j { d[i] } else { 0.0 });
        let lu = DenseLu::factor(a).unwrap();
        assert!((lu.rcond() - 1e-3 / 4.0).abs() < 1e-18);
        assert!(!lu.is_ill_conditioned());
    }

    #[test]
    fn condition_estimate_bounds_the_true_value() {
        for n in [5, 12, 30] {
            let a = sample(n);
            let norm1 = |m: &Mat<f64>| {
                (0..m.ncols())
                    .map(|j| m.col(j).iter().map(|x| x.abs()).sum::<f64>())
                    .fold(0.0, f64::max)
            };
            let lu = DenseLu::factor(a.clone()).unwrap();
            let inv = lu.solve_mat(Mat::<f64>::identity(n, n).as_ref());
            let exact = 1.0 / (norm1(&a) * norm1(&inv));
            assert!(lu.rcond() >= exact * (1.0 - 1e-12));
            assert!(lu.rcond() <= 3.0 * exact, "{} vs {exact}", lu.rcond());
        }
    }

    #[test]
    fn transpose_solve() {
        let a = sample(15);
        let x: Vec<f64> = (0..15).map(|i| (i as f64).cos()).collect();
        let b = mat_vec(a.as_ref().transpose(), &x);
        let got = DenseLu::factor(a).unwrap().solve_transpose(&b);
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn multiple_right_hand_sides() {
        let a = sample(9);
        let b = Mat::from_fn(9, 3, |i, j| (i * 3 + j) as f64);
        let x = DenseLu::factor(a.clone()).unwrap().solve_mat(b.as_ref());
        let r = &a * &x - &b;
        assert!(r.norm_max() < 1e-12);
    }
}
