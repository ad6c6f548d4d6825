//! Boundary-embedded operators on the disk.
//!
//! The boundary ring (and for the biharmonic problem the ring next to it) is
//! eliminated using the boundary data, leaving an affine map
//! `T(u) = D u + W` on the remaining rings. Eliminated rings are stored as
//! `constant - coupling * u`.

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par};

use crate::error::{Error, Result};
use crate::linalg::{column, mat_vec, DenseLu};
use crate::polar::{
    biharmonic_terms, laplacian_terms, radial_derivative_terms, DiskGrid, FieldLayout, PolarField,
};

/// Boundary data sampled at the grid angles.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpecDisk {
    /// `u(R, theta) = f(theta)`.
    Dirichlet { f: Vec<f64> },
    /// `u_r(R, theta) = g(theta)`.
    Neumann { g: Vec<f64> },
    /// `a(theta) u + b(theta) u_r = h(theta)` on the boundary, with `a b > 0`.
    Robin {
        a: Vec<f64>,
        b: Vec<f64>,
        h: Vec<f64>,
    },
    /// `u = f` and `u_r = g` on the boundary of a biharmonic problem.
    BiharmonicDirichlet { f: Vec<f64>, g: Vec<f64> },
}

impl BoundarySpecDisk {
    pub fn name(&self) -> &'static str {
        match self {
            BoundarySpecDisk::Dirichlet { .. } => "dirichlet",
            BoundarySpecDisk::Neumann { .. } => "neumann",
            BoundarySpecDisk::Robin { .. } => "robin",
            BoundarySpecDisk::BiharmonicDirichlet { .. } => "biharmonic-dirichlet",
        }
    }

    /// Interior layout of the unknowns.
    pub fn layout(&self) -> FieldLayout {
        match self {
            BoundarySpecDisk::BiharmonicDirichlet { .. } => FieldLayout::BiharmonicInterior,
            _ => FieldLayout::Interior,
        }
    }
}

/// Affine map on the interior rings of a disk grid.
#[derive(Debug, Clone)]
pub struct DiskAffineOperator {
    spec: BoundarySpecDisk,
    grid: DiskGrid,
    matrix: Mat<f64>,
    shift: Vec<f64>,
    constant: Vec<f64>,
    coupling: Option<Mat<f64>>,
}

impl DiskAffineOperator {
    pub fn spec(&self) -> &BoundarySpecDisk {
        &self.spec
    }

    pub fn grid(&self) -> &DiskGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.matrix
    }

    pub fn into_parts(self) -> (Mat<f64>, Vec<f64>) {
        (self.matrix, self.shift)
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn layout(&self) -> FieldLayout {
        self.spec.layout()
    }

    /// Number of unknowns.
    pub fn size(&self) -> usize {
        self.shift.len()
    }

    /// Number of eliminated rings.
    pub fn eliminated_rings(&self) -> usize {
        self.layout().first_ring()
    }

    /// `(r, theta)` of the unknowns.
    pub fn unknown_nodes(&self) -> Vec<(f64, f64)> {
        let skip = self.eliminated_rings() * self.grid.n_theta();
        self.grid.nodes().into_iter().skip(skip).collect()
    }

    /// Eliminated ring values are `constant - coupling * u`.
    pub fn recovery_constant(&self) -> &[f64] {
        &self.constant
    }

    pub fn recovery_coupling(&self) -> Option<&Mat<f64>> {
        self.coupling.as_ref()
    }

    /// Evaluates `matrix * u + shift`.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u)?;
        let mut out = mat_vec(self.matrix.as_ref(), u);
        out.iter_mut().zip(&self.shift).for_each(|(o, s)| *o += s);
        Ok(out)
    }

    /// Values on every ring: recovered rings followed by the unknowns.
    pub fn full_field(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mut full = self.recover(u)?;
        full.extend_from_slice(u);
        Ok(full)
    }

    fn recover(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u)?;
        let mut out = self.constant.clone();
        if let Some(c) = &self.coupling {
            for (o, v) in out.iter_mut().zip(mat_vec(c.as_ref(), u)) {
                *o -= v;
            }
        }
        Ok(out)
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.size() {
            return Err(Error::DimensionMismatch {
                what: "interior field",
                expected: self.size(),
                got: u.len(),
            });
        }
        Ok(())
    }
}

fn check_samples(grid: &DiskGrid, what: &'static str, v: &[f64]) -> Result<()> {
    if v.len() != grid.n_theta() {
        return Err(Error::DimensionMismatch {
            what,
            expected: grid.n_theta(),
            got: v.len(),
        });
    }
    Ok(())
}

/// `target -= lhs * rhs` without a temporary of the target's size.
fn sub_product(target: &mut Mat<f64>, lhs: &Mat<f64>, rhs: &Mat<f64>) {
    matmul(
        target.as_mut(),
        Accum::Add,
        lhs.as_ref(),
        rhs.as_ref(),
        -1.0,
        Par::Seq,
    );
}

fn col_to_vec(m: &Mat<f64>) -> Vec<f64> {
    m.col(0).iter().copied().collect()
}

/// Dirichlet data embedded in the polar Laplacian.
pub fn laplace_dirichlet_op(grid: &DiskGrid, f: &[f64]) -> Result<DiskAffineOperator> {
    check_samples(grid, "Dirichlet data", f)?;
    let n = grid.n_rings();
    let lap = laplacian_terms(grid)?;
    let d1 = lap.block(1..n, 0..1);
    let matrix = lap.block(1..n, 1..n);
    Ok(DiskAffineOperator {
        spec: BoundarySpecDisk::Dirichlet { f: f.to_vec() },
        grid: grid.clone(),
        matrix,
        shift: mat_vec(d1.as_ref(), f),
        constant: f.to_vec(),
        coupling: None,
    })
}

/// Shared elimination of the boundary ring through `lu * u_1 = rhs - scale * P_2 u`.
fn flux_eliminated(
    grid: &DiskGrid,
    spec: BoundarySpecDisk,
    lu: DenseLu,
    rhs: &[f64],
    scale: &[f64],
) -> Result<DiskAffineOperator> {
    let n = grid.n_rings();
    let lap = laplacian_terms(grid)?;
    let p = radial_derivative_terms(grid)?;
    let mut p2 = p.block(0..1, 1..n);
    for (i, &s) in scale.iter().enumerate() {
        for j in 0..p2.ncols() {
            p2[(i, j)] *= s;
        }
    }
    let coupling = lu.solve_mat(p2.as_ref());
    let constant = lu.solve(rhs);
    let d1 = lap.block(1..n, 0..1);
    let mut matrix = lap.block(1..n, 1..n);
    sub_product(&mut matrix, &d1, &coupling);
    Ok(DiskAffineOperator {
        spec,
        grid: grid.clone(),
        matrix,
        shift: mat_vec(d1.as_ref(), &constant),
        constant,
        coupling: Some(coupling),
    })
}

/// The boundary block `P_1` of the radial derivative.
pub fn boundary_flux_block(grid: &DiskGrid) -> Result<Mat<f64>> {
    Ok(radial_derivative_terms(grid)?.block(0..1, 0..1))
}

/// Neumann data embedded in the polar Laplacian.
pub fn laplace_neumann_op(grid: &DiskGrid, g: &[f64]) -> Result<DiskAffineOperator> {
    check_samples(grid, "Neumann data", g)?;
    let lu = DenseLu::factor(boundary_flux_block(grid)?)
        .map_err(|e| Error::SingularElimination(format!("boundary flux block: {e}")))?;
    flux_eliminated(
        grid,
        BoundarySpecDisk::Neumann { g: g.to_vec() },
        lu,
        g,
        &vec![1.0; grid.n_theta()],
    )
}

/// Robin data `a u + b u_r = h` embedded in the polar Laplacian.
pub fn laplace_robin_op(
    grid: &DiskGrid,
    a: &[f64],
    b: &[f64],
    h: &[f64],
) -> Result<DiskAffineOperator> {
    check_samples(grid, "Robin coefficient a", a)?;
    check_samples(grid, "Robin coefficient b", b)?;
    check_samples(grid, "Robin data", h)?;
    if let Some(l) = (0..a.len()).find(|&l| (a[l] * b[l]).is_nan() || a[l] * b[l] <= 0.0) {
        return Err(Error::InvalidRobin(format!(
            "a * b must be positive at every angle; at index {l} a = {}, b = {}",
            a[l], b[l]
        )));
    }
    let mut m = boundary_flux_block(grid)?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            m[(i, j)] *= b[i];
        }
        m[(i, i)] += a[i];
    }
    let lu = DenseLu::factor(m)
        .map_err(|e| Error::SingularElimination(format!("Robin boundary block: {e}")))?;
    flux_eliminated(
        grid,
        BoundarySpecDisk::Robin {
            a: a.to_vec(),
            b: b.to_vec(),
            h: h.to_vec(),
        },
        lu,
        h,
        b,
    )
}

/// Clamped data `u = f`, `u_r = g` embedded in the polar biharmonic operator.
pub fn biharmonic_dirichlet_op(
    grid: &DiskGrid,
    f: &[f64],
    g: &[f64],
) -> Result<DiskAffineOperator> {
    check_samples(grid, "Dirichlet data", f)?;
    check_samples(grid, "normal derivative data", g)?;
    let n = grid.n_rings();
    let bih = biharmonic_terms(grid)?;
    let p = radial_derivative_terms(grid)?;
    let p1 = p.block(0..1, 0..1);
    let p2 = p.block(0..1, 1..2);
    let p3 = p.block(0..1, 2..n);
    let lu = DenseLu::factor(p2)
        .map_err(|e| Error::SingularElimination(format!("second ring flux block: {e}")))?;

    let mut rhs = g.to_vec();
    for (r, v) in rhs.iter_mut().zip(mat_vec(p1.as_ref(), f)) {
        *r -= v;
    }
    let ring2 = lu.solve(&rhs);
    let coupling2 = lu.solve_mat(p3.as_ref());

    let d1 = bih.block(2..n, 0..1);
    let d2 = bih.block(2..n, 1..2);
    let mut matrix = bih.block(2..n, 2..n);
    sub_product(&mut matrix, &d2, &coupling2);

    let mut w = d1 * column(f);
    matmul(
        w.as_mut(),
        Accum::Add,
        d2.as_ref(),
        column(&ring2).as_ref(),
        1.0,
        Par::Seq,
    );

    let nt = grid.n_theta();
    let n_unk = matrix.ncols();
    let mut constant = f.to_vec();
    constant.extend_from_slice(&ring2);
    let coupling = Mat::from_fn(2 * nt, n_unk, |i, j| {
        if i < nt {
            0.0
        } else {
            coupling2[(i - nt, j)]
        }
    });

    Ok(DiskAffineOperator {
        spec: BoundarySpecDisk::BiharmonicDirichlet {
            f: f.to_vec(),
            g: g.to_vec(),
        },
        grid: grid.clone(),
        matrix,
        shift: col_to_vec(&w),
        constant,
        coupling: Some(coupling),
    })
}

/// Builds the operator matching `spec`.
pub fn disk_boundary_op(grid: &DiskGrid, spec: &BoundarySpecDisk) -> Result<DiskAffineOperator> {
    match spec {
        BoundarySpecDisk::Dirichlet { f } => laplace_dirichlet_op(grid, f),
        BoundarySpecDisk::Neumann { g } => laplace_neumann_op(grid, g),
        BoundarySpecDisk::Robin { a, b, h } => laplace_robin_op(grid, a, b, h),
        BoundarySpecDisk::BiharmonicDirichlet { f, g } => biharmonic_dirichlet_op(grid, f, g),
    }
}

/// Values on the eliminated rings, boundary ring first.
pub fn recover_boundary_rings(op: &DiskAffineOperator, interior: &PolarField) -> Result<Vec<f64>> {
    if !interior.matches(&op.grid) || interior.layout() != op.layout() {
        return Err(Error::DimensionMismatch {
            what: "interior field layout",
            expected: op.size(),
            got: interior.values().len(),
        });
    }
    op.recover(interior.values())
}
