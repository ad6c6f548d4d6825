//! Boundary-embedded one-dimensional operators.
//!
//! Each operator maps the unknown interior values `u` to `D u + W`, where the
//! boundary data has been folded into the matrix `D` and the shift `W`. The
//! eliminated node values are affine in `u` and are kept as
//! `e = constant - coupling * u`.

use faer::{Mat, MatRef};

use crate::chebyshev::{cheb_diff_matrix, Grid1D};
use crate::error::{Error, Result};
use crate::linalg::mat_vec;

/// Boundary conditions for a problem on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundarySpec1D {
    /// `u(a) = alpha`, `u(b) = beta`.
    Dirichlet { alpha: f64, beta: f64 },
    /// `u'(a) = alpha`, `u'(b) = beta`.
    Neumann { alpha: f64, beta: f64 },
    /// `alpha u(a) - beta u'(a) = g1`, `alpha u(b) + beta u'(b) = g2`, with `alpha beta > 0`.
    Robin {
        alpha: f64,
        beta: f64,
        g1: f64,
        g2: f64,
    },
    /// `u(a) = alpha1`, `u(b) = beta1`, `u'(a) = alpha2`, `u'(b) = beta2`.
    Clamped {
        alpha1: f64,
        beta1: f64,
        alpha2: f64,
        beta2: f64,
    },
}

impl BoundarySpec1D {
    /// Order of the differential operator the conditions belong to.
    pub fn order(&self) -> usize {
        match self {
            BoundarySpec1D::Clamped { .. } => 4,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundarySpec1D::Dirichlet { .. } => "dirichlet",
            BoundarySpec1D::Neumann { .. } => "neumann",
            BoundarySpec1D::Robin { .. } => "robin",
            BoundarySpec1D::Clamped { .. } => "clamped",
        }
    }
}

/// Data needed to rebuild the eliminated node values from the unknowns.
#[derive(Debug, Clone)]
pub struct Recovery1D {
    /// Global node indices of the two eliminated values.
    pub eliminated: [usize; 2],
    pub constant: [f64; 2],
    /// `2 x unknowns`; row `e` couples eliminated value `e` to the unknowns.
    pub coupling: Mat<f64>,
    /// Nodes fixed directly by the data (clamped ends).
    pub fixed: Vec<(usize, f64)>,
    /// The 2x2 elimination matrix, absent for Dirichlet.
    pub elimination: Option<[[f64; 2]; 2]>,
}

/// Affine map `T(u) = matrix * u + shift` on the interior unknowns.
#[derive(Debug, Clone)]
pub struct AffineOperator {
    spec: BoundarySpec1D,
    grid: Grid1D,
    matrix: Mat<f64>,
    shift: Vec<f64>,
    recovery: Recovery1D,
    interior: Vec<usize>,
}

impl AffineOperator {
    pub fn spec(&self) -> BoundarySpec1D {
        self.spec
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.matrix
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn recovery(&self) -> &Recovery1D {
        &self.recovery
    }

    /// Number of interior unknowns.
    pub fn size(&self) -> usize {
        self.shift.len()
    }

    /// Global node indices represented by the unknown vector.
    pub fn interior_index_map(&self) -> &[usize] {
        &self.interior
    }

    /// Abscissae of the unknowns.
    pub fn unknown_nodes(&self) -> Vec<f64> {
        self.interior
            .iter()
            .map(|&i| self.grid.nodes()[i])
            .collect()
    }

    /// Determinant of the 2x2 elimination matrix, if there is one.
    pub fn elimination_determinant(&self) -> Option<f64> {
        self.recovery.elimination.map(det2)
    }

    /// Evaluates `matrix * u + shift`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u)?;
        let mut out = mat_vec(self.matrix.as_ref(), u);
        out.iter_mut().zip(&self.shift).for_each(|(o, s)| *o += s);
        Ok(out)
    }

    /// Values at every grid node, unknowns plus eliminated and fixed nodes.
    pub fn full_solution(&self, u: &[f64]) -> Result<Vec<f64>> {
        let eliminated = recover_boundary(self, u)?;
        let mut full = vec![0.0; self.grid.len()];
        for (&i, &v) in self.interior.iter().zip(u) {
            full[i] = v;
        }
        for (&i, v) in self.recovery.eliminated.iter().zip(eliminated) {
            full[i] = v;
        }
        for &(i, v) in &self.recovery.fixed {
            full[i] = v;
        }
        Ok(full)
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.size() {
            return Err(Error::DimensionMismatch {
                what: "interior vector",
                expected: self.size(),
                got: u.len(),
            });
        }
        Ok(())
    }
}

fn det2(q: [[f64; 2]; 2]) -> f64 {
    q[0][0] * q[1][1] - q[0][1] * q[1][0]
}

fn inverse2(q: [[f64; 2]; 2], what: &str) -> Result<[[f64; 2]; 2]> {
    let det = det2(q);
    let scale = q.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if !det.is_finite() || det.abs() <= 1e-14 * scale * scale {
        return Err(Error::SingularElimination(format!(
            "{what}: determinant {det:e}"
        )));
    }
    Ok([
        [q[1][1] / det, -q[0][1] / det],
        [-q[1][0] / det, q[0][0] / det],
    ])
}

/// Folds the eliminated columns of `dm` into the interior block.
///
/// `q e + g u = h` defines the eliminated values `e`.
#[allow(clippy::too_many_arguments)]
fn assemble(
    spec: BoundarySpec1D,
    grid: &Grid1D,
    dm: MatRef<'_, f64>,
    interior: Vec<usize>,
    eliminated: [usize; 2],
    fixed: Vec<(usize, f64)>,
    q: Option<[[f64; 2]; 2]>,
    h: [f64; 2],
    g: Mat<f64>,
) -> Result<AffineOperator> {
    let n_unk = interior.len();
    let (constant, coupling) = match q {
        Some(q) => {
            let qi = inverse2(q, spec.name())?;
            let constant = [
                qi[0][0] * h[0] + qi[0][1] * h[1],
                qi[1][0] * h[0] + qi[1][1] * h[1],
            ];
            let coupling =
                Mat::from_fn(2, n_unk, |e, j| qi[e][0] * g[(0, j)] + qi[e][1] * g[(1, j)]);
            (constant, coupling)
        }
        None => (h, Mat::zeros(2, n_unk)),
    };

    let matrix = Mat::from_fn(n_unk, n_unk, |i, j| {
        let row = interior[i];
        dm[(row, interior[j])]
            - dm[(row, eliminated[0])] * coupling[(0, j)]
            - dm[(row, eliminated[1])] * coupling[(1, j)]
    });
    let shift = interior
        .iter()
        .map(|&row| {
            let mut s =
                dm[(row, eliminated[0])] * constant[0] + dm[(row, eliminated[1])] * constant[1];
            for &(k, v) in &fixed {
                s += dm[(row, k)] * v;
            }
            s
        })
        .collect();

    Ok(AffineOperator {
        spec,
        grid: grid.clone(),
        matrix,
        shift,
        recovery: Recovery1D {
            eliminated,
            constant,
            coupling,
            fixed,
            elimination: q,
        },
        interior,
    })
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!(
            "boundary data must be finite, got {values:?}"
        )))
    }
}

/// `u(a) = alpha`, `u(b) = beta` embedded in the second-derivative matrix.
pub fn dirichlet_op(grid: &Grid1D, alpha: f64, beta: f64) -> Result<AffineOperator> {
    check_finite(&[alpha, beta])?;
    let n = grid.n_panels();
    let d2 = cheb_diff_matrix(grid, 2)?;
    assemble(
        BoundarySpec1D::Dirichlet { alpha, beta },
        grid,
        d2.entries().as_ref(),
        (1..n).collect(),
        [0, n],
        Vec::new(),
        None,
        [beta, alpha],
        Mat::zeros(2, n - 1),
    )
}

/// The 2x2 matrix that determines the eliminated values for `spec`.
///
/// Defined for any grid with at least 2 panels, which lets the determinant be
/// studied below the sizes at which the clamped operator itself exists.
pub fn elimination_matrix(grid: &Grid1D, spec: BoundarySpec1D) -> Result<Option<[[f64; 2]; 2]>> {
    let n = grid.n_panels();
    let d = cheb_diff_matrix(grid, 1)?;
    let d = |i: usize, j: usize| d.get(i, j);
    Ok(match spec {
        BoundarySpec1D::Dirichlet { .. } => None,
        BoundarySpec1D::Neumann { .. } => Some([[d(n, 0), d(n, n)], [d(0, 0), d(0, n)]]),
        BoundarySpec1D::Robin { alpha, beta, .. } => Some([
            [-beta * d(n, 0), alpha - beta * d(n, n)],
            [alpha + beta * d(0, 0), beta * d(0, n)],
        ]),
        BoundarySpec1D::Clamped { .. } => Some([[d(n, 1), d(n, n - 1)], [d(0, 1), d(0, n - 1)]]),
    })
}

/// `u'(a) = alpha`, `u'(b) = beta` embedded in the second-derivative matrix.
pub fn neumann_op(grid: &Grid1D, alpha: f64, beta: f64) -> Result<AffineOperator> {
    check_finite(&[alpha, beta])?;
    let n = grid.n_panels();
    let d1 = cheb_diff_matrix(grid, 1)?;
    let d2 = cheb_diff_matrix(grid, 2)?;
    let spec = BoundarySpec1D::Neumann { alpha, beta };
    let q = elimination_matrix(grid, spec)?;
    let g = Mat::from_fn(2, n - 1, |r, j| {
        let row = if r == 0 { n } else { 0 };
        d1.get(row, j + 1)
    });
    assemble(
        spec,
        grid,
        d2.entries().as_ref(),
        (1..n).collect(),
        [0, n],
        Vec::new(),
        q,
        [alpha, beta],
        g,
    )
}

/// `alpha u(a) - beta u'(a) = g1`, `alpha u(b) + beta u'(b) = g2`.
pub fn robin_op(grid: &Grid1D, alpha: f64, beta: f64, g1: f64, g2: f64) -> Result<AffineOperator> {
    check_finite(&[alpha, beta, g1, g2])?;
    if alpha * beta <= 0.0 {
        return Err(Error::InvalidRobin(format!(
            "alpha * beta must be positive, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let n = grid.n_panels();
    let d1 = cheb_diff_matrix(grid, 1)?;
    let d2 = cheb_diff_matrix(grid, 2)?;
    let spec = BoundarySpec1D::Robin {
        alpha,
        beta,
        g1,
        g2,
    };
    let q = elimination_matrix(grid, spec)?;
    let g = Mat::from_fn(2, n - 1, |r, j| {
        if r == 0 {
            -beta * d1.get(n, j + 1)
        } else {
            beta * d1.get(0, j + 1)
        }
    });
    assemble(
        spec,
        grid,
        d2.entries().as_ref(),
        (1..n).collect(),
        [0, n],
        Vec::new(),
        q,
        [g1, g2],
        g,
    )
}

/// Clamped conditions embedded in the fourth-derivative matrix.
///
/// The end values are fixed by the data and the values next to the ends are
/// eliminated through the derivative conditions, leaving `N - 3` unknowns.
pub fn biharmonic_op(
    grid: &Grid1D,
    alpha1: f64,
    beta1: f64,
    alpha2: f64,
    beta2: f64,
) -> Result<AffineOperator> {
    check_finite(&[alpha1, beta1, alpha2, beta2])?;
    let n = grid.n_panels();
    if n < 4 {
        return Err(Error::InvalidGrid(format!(
            "clamped operator needs at least 4 panels, got {n}"
        )));
    }
    let d1 = cheb_diff_matrix(grid, 1)?;
    let d4 = cheb_diff_matrix(grid, 4)?;
    let spec = BoundarySpec1D::Clamped {
        alpha1,
        beta1,
        alpha2,
        beta2,
    };
    let q = elimination_matrix(grid, spec)?;
    let h = [
        alpha2 - beta1 * d1.get(n, 0) - alpha1 * d1.get(n, n),
        beta2 - beta1 * d1.get(0, 0) - alpha1 * d1.get(0, n),
    ];
    let g = Mat::from_fn(2, n - 3, |r, j| {
        let row = if r == 0 { n } else { 0 };
        d1.get(row, j + 2)
    });
    assemble(
        spec,
        grid,
        d4.entries().as_ref(),
        (2..n - 1).collect(),
        [1, n - 1],
        vec![(0, beta1), (n, alpha1)],
        q,
        h,
        g,
    )
}

/// Builds the operator matching `spec`.
pub fn boundary_op(grid: &Grid1D, spec: BoundarySpec1D) -> Result<AffineOperator> {
    match spec {
        BoundarySpec1D::Dirichlet { alpha, beta } => dirichlet_op(grid, alpha, beta),
        BoundarySpec1D::Neumann { alpha, beta } => neumann_op(grid, alpha, beta),
        BoundarySpec1D::Robin {
            alpha,
            beta,
            g1,
            g2,
        } => robin_op(grid, alpha, beta, g1, g2),
        BoundarySpec1D::Clamped {
            alpha1,
            beta1,
            alpha2,
            beta2,
        } => biharmonic_op(grid, alpha1, beta1, alpha2, beta2),
    }
}

/// Eliminated node values in ascending node-index order.
///
/// These are `(u(x_1), u(x_{N+1}))` for second-order operators and
/// `(u(x_2), u(x_N))` for the clamped operator.
pub fn recover_boundary(op: &AffineOperator, interior: &[f64]) -> Result<Vec<f64>> {
    op.check_len(interior)?;
    let r = &op.recovery;
    Ok((0..2)
        .map(|e| {
            let coupled: f64 = interior
                .iter()
                .enumerate()
                .map(|(j, &u)| r.coupling[(e, j)] * u)
                .sum();
            r.constant[e] - coupled
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::cgl_grid;

    fn interior(op: &AffineOperator, f: impl Fn(f64) -> f64) -> Vec<f64> {
        op.unknown_nodes().into_iter().map(f).collect()
    }

    #[test]
    fn homogeneous_dirichlet_has_zero_shift() {
        let g = cgl_grid(9, -1.0, 1.0).unwrap();
        let op = dirichlet_op(&g, 0.0, 0.0).unwrap();
        assert!(op.shift().iter().all(|&s| s == 0.0));
        assert_eq!(op.size(), 8);
    }

    #[test]
    fn dirichlet_linear_function() {
        let g = cgl_grid(12, 0.0, 1.0).unwrap();
        let op = dirichlet_op(&g, 0.0, 1.0).unwrap();
        let out = op.apply(&interior(&op, |x| x)).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn dirichlet_recovers_constants() {
        let g = cgl_grid(6, 0.0, 2.0).unwrap();
        let op = dirichlet_op(&g, 3.0, 5.0).unwrap();
        let got = recover_boundary(&op, &[0.4; 5]).unwrap();
        assert_eq!(got, vec![5.0, 3.0]);
    }

    #[test]
    fn neumann_determinant_for_two_panels() {
        let g = cgl_grid(2, -1.0, 1.0).unwrap();
        let op = neumann_op(&g, 0.0, 0.0).unwrap();
        assert!((op.elimination_determinant().unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn neumann_recovers_quadratic() {
        let g = cgl_grid(8, -1.0, 1.0).unwrap();
        let op = neumann_op(&g, -2.0, 2.0).unwrap();
        let got = recover_boundary(&op, &interior(&op, |x| x * x)).unwrap();
        assert!((got[0] - 1.0).abs() < 1e-10 && (got[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn neumann_recovers_cubic() {
        let g = cgl_grid(7, -1.0, 1.0).unwrap();
        let op = neumann_op(&g, 3.0, 3.0).unwrap();
        let got = recover_boundary(&op, &interior(&op, |x| x * x * x)).unwrap();
        assert!((got[0] - 1.0).abs() < 1e-9 && (got[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn neumann_annihilates_constants() {
        let g = cgl_grid(10, 0.0, 3.0).unwrap();
        let op = neumann_op(&g, 0.0, 0.0).unwrap();
        let out = op.apply(&vec![2.5; op.size()]).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn robin_determinant_for_two_panels() {
        let g = cgl_grid(2, -1.0, 1.0).unwrap();
        let op = robin_op(&g, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert!((op.elimination_determinant().unwrap() + 6.0).abs() < 1e-13);
    }

    #[test]
    fn robin_recovers_constant() {
        let g = cgl_grid(9, -1.0, 1.0).unwrap();
        let op = robin_op(&g, 1.0, 1.0, 1.0, 1.0).unwrap();
        let got = recover_boundary(&op, &vec![1.0; op.size()]).unwrap();
        assert!(got.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn robin_rejects_opposite_signs() {
        let g = cgl_grid(4, 0.0, 1.0).unwrap();
        assert!(matches!(
            robin_op(&g, 1.0, -1.0, 0.0, 0.0),
            Err(Error::InvalidRobin(_))
        ));
        assert!(matches!(
            robin_op(&g, 0.0, 1.0, 0.0, 0.0),
            Err(Error::InvalidRobin(_))
        ));
    }

    #[test]
    fn clamped_determinant_for_four_panels() {
        let g = cgl_grid(4, -1.0, 1.0).unwrap();
        let op = biharmonic_op(&g, 0.0, 0.0, 0.0, 0.0).unwrap();
        let want = 32.0 * 2f64.sqrt();
        assert!((op.elimination_determinant().unwrap() - want).abs() < 1e-11 * want);
        assert_eq!(op.size(), 1);
    }

    #[test]
    fn clamped_quartic_bump() {
        let g = cgl_grid(10, -1.0, 1.0).unwrap();
        let op = biharmonic_op(&g, 0.0, 0.0, 0.0, 0.0).unwrap();
        let bump = |x: f64| (1.0 - x * x).powi(2);
        let u = interior(&op, bump);
        let out = op.apply(&u).unwrap();
        assert!(out.iter().all(|v| (v - 24.0).abs() < 1e-6));
        let rec = recover_boundary(&op, &u).unwrap();
        let nodes = g.nodes();
        assert!((rec[0] - bump(nodes[1])).abs() < 1e-9);
        assert!((rec[1] - bump(nodes[9])).abs() < 1e-9);
    }

    #[test]
    fn clamped_needs_four_panels() {
        let g = cgl_grid(3, -1.0, 1.0).unwrap();
        assert!(matches!(
            biharmonic_op(&g, 0.0, 0.0, 0.0, 0.0),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn recovery_checks_length() {
        let g = cgl_grid(5, -1.0, 1.0).unwrap();
        let op = neumann_op(&g, 0.0, 0.0).unwrap();
        assert!(matches!(
            recover_boundary(&op, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn full_solution_places_values() {
        let g = cgl_grid(8, -1.0, 1.0).unwrap();
        let op = biharmonic_op(&g, 0.5, -0.5, 0.0, 0.0).unwrap();
        let full = op.full_solution(&vec![0.0; op.size()]).unwrap();
        assert_eq!(full[0], -0.5);
        assert_eq!(full[8], 0.5);
    }
}
