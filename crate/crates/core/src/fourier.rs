//! Equispaced periodic grid, the Dirichlet-kernel cardinal function and the
//! Fourier differentiation matrices of orders 1 to 4.
//!
//! Angles are `theta_l = 2 pi l / N` for `l = 1..N`; storage index `j` holds
//! `theta_{j+1}`, so the last stored angle is exactly `2 pi`.

use std::f64::consts::PI;

use faer::Mat;

use crate::chebyshev::{DiffMatrix, GridTag};
use crate::error::{Error, Result};

/// Below this distance from a multiple of `2 pi` the kernel is evaluated
/// from its cosine expansion.
const NEAR_ZERO: f64 = 1e-3;

/// Equispaced angles on `(0, 2 pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    n_angles: usize,
    angles: Vec<f64>,
}

impl AngularGrid {
    /// Builds the grid with `n_angles` points; `n_angles` must be even and at least 4.
    pub fn new(n_angles: usize) -> Result<Self> {
        check_count(n_angles)?;
        let h = 2.0 * PI / n_angles as f64;
        let mut angles: Vec<f64> = (1..=n_angles).map(|l| l as f64 * h).collect();
        angles[n_angles - 1] = 2.0 * PI;
        Ok(Self { n_angles, angles })
    }

    pub fn n_angles(&self) -> usize {
        self.n_angles
    }

    pub fn len(&self) -> usize {
        self.n_angles
    }

    pub fn is_empty(&self) -> bool {
        self.n_angles == 0
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n_angles as f64
    }

    /// Storage index of the angle shifted by `pi`.
    pub fn half_shift(&self, j: usize) -> usize {
        (j + self.n_angles / 2) % self.n_angles
    }

    pub fn tag(&self) -> GridTag {
        GridTag::Fourier {
            n_angles: self.n_angles,
        }
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.angles.iter().map(|&t| f(t)).collect()
    }

    /// Values of every periodic cardinal function `S(theta - theta_l)`.
    pub fn cardinal_values(&self, theta: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n_angles];
        if let Some(k) = self.angles.iter().position(|&t| wrap(theta - t) == 0.0) {
            out[k] = 1.0;
            return out;
        }
        for (o, &t) in out.iter_mut().zip(&self.angles) {
            *o = kernel_unchecked(self.n_angles, theta - t);
        }
        out
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidGrid(format!(
            "number of angles must be even and at least 4, got {n}"
        )));
    }
    Ok(())
}

/// Reduces an angle to `(-pi, pi]`.
fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// m-th derivative of `(1/N)[1 + 2 sum_{k<N/2} cos k t + cos (N/2) t]`.
fn cosine_sum_derivative(n: usize, theta: f64, m: usize) -> f64 {
    let half = n / 2;
    let phase = m as f64 * PI / 2.0;
    let term = |k: usize| (k as f64).powi(m as i32) * (k as f64 * theta + phase).cos();
    let mut s = if m == 0 { 1.0 } else { 0.0 };
    for k in 1..half {
        s += 2.0 * term(k);
    }
    s += term(half);
    s / n as f64
}

fn kernel_unchecked(n: usize, theta: f64) -> f64 {
    let t = wrap(theta);
    if t.abs() < NEAR_ZERO {
        return cosine_sum_derivative(n, t, 0);
    }
    let half = 0.5 * t;
    (0.5 * n as f64 * t).sin() * half.cos() / (n as f64 * half.sin())
}

/// The periodic cardinal function `S_N(theta) = sin(N theta / 2) / (N tan(theta / 2))`.
///
/// The removable singularity at multiples of `2 pi` takes its limit value 1.
pub fn dirichlet_kernel(n_angles: usize, theta: f64) -> Result<f64> {
    check_count(n_angles)?;
    Ok(kernel_unchecked(n_angles, theta))
}

/// Derivatives of `cot(theta/2)` of orders 0..=4, written in terms of `c = cot(theta/2)`.
fn cot_derivatives(c: f64) -> [f64; 5] {
    let p = 1.0 + c * c;
    [
        c,
        -0.5 * p,
        0.5 * c * p,
        -0.25 * p * (1.0 + 3.0 * c * c),
        0.5 * c * (2.0 + 3.0 * c * c) * p,
    ]
}

/// `d^m S_N / d theta^m` at an arbitrary angle, `m <= 4`.
///
/// Derivatives are summed from the cosine expansion of the kernel, which
/// stays well conditioned near the origin where the closed form cancels.
pub fn dirichlet_kernel_derivative(n_angles: usize, theta: f64, m: usize) -> Result<f64> {
    check_count(n_angles)?;
    if m > 4 {
        return Err(Error::InvalidOrder {
            order: m,
            expected: "0 <= m <= 4",
        });
    }
    if m == 0 {
        return Ok(kernel_unchecked(n_angles, theta));
    }
    Ok(cosine_sum_derivative(n_angles, wrap(theta), m))
}

/// Value of `S^(m)` at the grid offset `d h`, `d != 0 (mod N)`.
fn offset_entry(n: usize, d: usize, m: usize) -> f64 {
    let nf = n as f64;
    let half = PI * d as f64 / nf;
    let c = half.cos() / half.sin();
    let g = cot_derivatives(c);
    let s = if d % 2 == 0 { 1.0 } else { -1.0 };
    match m {
        1 => s * 0.5 * c,
        2 => s * g[1],
        3 => s * (1.5 * g[2] - nf * nf / 8.0 * c),
        4 => s * (2.0 * g[3] - nf * nf / 2.0 * g[1]),
        _ => unreachable!(),
    }
}

/// Limit of `S^(m)` at zero.
fn diagonal_entry(n: usize, m: usize) -> f64 {
    let n2 = (n * n) as f64;
    match m {
        2 => -(n2 / 12.0 + 1.0 / 6.0),
        4 => n2 * n2 / 80.0 + n2 / 12.0 - 1.0 / 30.0,
        _ => 0.0,
    }
}

/// Order-`m` Fourier differentiation matrix, entries `S^(m)(theta_k - theta_l)`.
///
/// Each order is built from its own closed form; on this grid the matrices
/// are not powers of the first-order one.
pub fn fourier_diff_matrix(grid: &AngularGrid, m: usize) -> Result<DiffMatrix> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidOrder {
            order: m,
            expected: "1 <= m <= 4",
        });
    }
    let n = grid.n_angles;
    let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
    let mut column = vec![0.0; n];
    column[0] = diagonal_entry(n, m);
    for d in 1..=n / 2 {
        if d == n - d {
            column[d] = if sign < 0.0 {
                0.0
            } else {
                offset_entry(n, d, m)
            };
        } else {
            column[d] = offset_entry(n, d, m);
            column[n - d] = sign * column[d];
        }
    }
    let entries = Mat::from_fn(n, n, |k, l| column[(k + n - l) % n]);
    Ok(DiffMatrix::new(m, entries, grid.tag()))
}
