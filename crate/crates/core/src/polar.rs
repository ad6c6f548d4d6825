//! The non-duplicated disk grid, its interpolant, and the polar Laplacian,
//! biharmonic and radial-derivative matrices.
//!
//! Radii are the positive half of a CGL grid on `[-R, R]` with an odd number
//! of panels, so the origin is never a node. The points with negative radius
//! are identified with the half-turned angle `theta + pi`, which the operators
//! express through a swap of angular indices. Fields are stored ring by ring
//! from the boundary inward: entry `n_theta * ring + j`.

use std::ops::Range;

use faer::Mat;

use crate::chebyshev::{cgl_grid, cheb_diff_matrix, Grid1D};
use crate::error::{Error, Result};
use crate::fourier::{fourier_diff_matrix, AngularGrid};

/// Collocation points of the disk of radius `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGrid {
    n_r: usize,
    radius: f64,
    radial: Grid1D,
    angles: AngularGrid,
}

impl DiskGrid {
    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.angles.n_angles()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Number of rings, `(N_r + 1) / 2`.
    pub fn n_rings(&self) -> usize {
        self.n_r.div_ceil(2)
    }

    /// Ring radii, boundary first.
    pub fn radii(&self) -> &[f64] {
        &self.radial.nodes()[..self.n_rings()]
    }

    pub fn angular(&self) -> &AngularGrid {
        &self.angles
    }

    /// The full CGL grid on `[-R, R]` the radii are taken from.
    pub fn radial_grid(&self) -> &Grid1D {
        &self.radial
    }

    /// Number of nodes, `n_rings * n_theta`.
    pub fn len(&self) -> usize {
        self.n_rings() * self.n_theta()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, ring: usize, j: usize) -> usize {
        self.n_theta() * ring + j
    }

    /// `(r, theta)` of every node in storage order.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        self.radii()
            .iter()
            .flat_map(|&r| self.angles.angles().iter().map(move |&t| (r, t)))
            .collect()
    }

    /// Samples `f(r, theta)` at every node.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        self.nodes().into_iter().map(|(r, t)| f(r, t)).collect()
    }

    /// Samples `f(theta)` at the angles.
    pub fn sample_boundary(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.angles.sample(f)
    }
}

/// Builds the disk grid; `n_r` must be odd and at least 3, `n_theta` even and at least 4.
pub fn disk_grid(n_r: usize, n_theta: usize, radius: f64) -> Result<DiskGrid> {
    if n_r < 3 || n_r % 2 == 0 {
        return Err(Error::InvalidGrid(format!(
            "n_r must be odd and at least 3, got {n_r}"
        )));
    }
    if n_theta < 4 || n_theta % 2 != 0 {
        return Err(Error::InvalidGrid(format!(
            "n_theta must be even and at least 4, got {n_theta}"
        )));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "radius must be positive and finite, got {radius}"
        )));
    }
    Ok(DiskGrid {
        n_r,
        radius,
        radial: cgl_grid(n_r, -radius, radius)?,
        angles: AngularGrid::new(n_theta)?,
    })
}

/// Which part of the disk a field covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldLayout {
    /// Every ring.
    Full,
    /// Rings after the boundary ring.
    Interior,
    /// Rings after the two outermost rings.
    BiharmonicInterior,
}

impl FieldLayout {
    /// First ring represented by the layout.
    pub fn first_ring(self) -> usize {
        match self {
            FieldLayout::Full => 0,
            FieldLayout::Interior => 1,
            FieldLayout::BiharmonicInterior => 2,
        }
    }
}

/// Nodal values on some of the rings of a disk grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    n_r: usize,
    n_theta: usize,
    layout: FieldLayout,
    values: Vec<f64>,
}

impl PolarField {
    pub fn new(grid: &DiskGrid, layout: FieldLayout, values: Vec<f64>) -> Result<Self> {
        let rings = grid.n_rings().saturating_sub(layout.first_ring());
        let expected = rings * grid.n_theta();
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "polar field",
                expected,
                got: values.len(),
            });
        }
        Ok(Self {
            n_r: grid.n_r(),
            n_theta: grid.n_theta(),
            layout,
            values,
        })
    }

    pub fn layout(&self) -> FieldLayout {
        self.layout
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Whether the field was built for `grid`'s dimensions.
    pub fn matches(&self, grid: &DiskGrid) -> bool {
        self.n_r == grid.n_r() && self.n_theta == grid.n_theta()
    }
}

/// Radial blocks `(D_1, D_2)` of the order-`m` matrix on `[-R, R]`.
///
/// `D_1` acts on the positive radii directly; `D_2` collects the columns of
/// the mirrored negative radii.
pub fn radial_submatrices(grid: &DiskGrid, m: usize) -> Result<(Mat<f64>, Mat<f64>)> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidOrder {
            order: m,
            expected: "1 <= m <= 4",
        });
    }
    Ok(split_radial(
        &cheb_diff_matrix(&grid.radial, m)?.into_entries(),
        grid.n_r,
    ))
}

fn split_radial(d: &Mat<f64>, n_r: usize) -> (Mat<f64>, Mat<f64>) {
    let half = n_r.div_ceil(2);
    let d1 = Mat::from_fn(half, half, |i, j| d[(i, j)]);
    let d2 = Mat::from_fn(half, half, |i, j| d[(i, n_r - j)]);
    (d1, d2)
}

/// Angular factor of a Kronecker term.
#[derive(Debug, Clone)]
pub enum AngularFactor {
    Identity,
    /// The half-turn permutation `theta -> theta + pi`.
    Swap,
    Dense(Mat<f64>),
}

/// A sum of Kronecker products `radial (x) angular` over the ring layout.
///
/// Blocks of the sum can be materialized for any ring ranges without
/// building the whole matrix.
#[derive(Debug, Clone)]
pub struct KroneckerSum {
    n_theta: usize,
    n_rings: usize,
    terms: Vec<(Mat<f64>, AngularFactor)>,
}

impl KroneckerSum {
    pub fn new(n_rings: usize, n_theta: usize, terms: Vec<(Mat<f64>, AngularFactor)>) -> Self {
        Self {
            n_theta,
            n_rings,
            terms,
        }
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_rings(&self) -> usize {
        self.n_rings
    }

    pub fn terms(&self) -> &[(Mat<f64>, AngularFactor)] {
        &self.terms
    }

    /// Rows of ring range `rows` against columns of ring range `cols`.
    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Mat<f64> {
        let nt = self.n_theta;
        let half = nt / 2;
        let mut out = Mat::<f64>::zeros(rows.len() * nt, cols.len() * nt);
        for (radial, angular) in &self.terms {
            for (bi, p) in rows.clone().enumerate() {
                for (bj, q) in cols.clone().enumerate() {
                    let a = radial[(p, q)];
                    if a == 0.0 {
                        continue;
                    }
                    let (r0, c0) = (bi * nt, bj * nt);
                    match angular {
                        AngularFactor::Identity => {
                            for j in 0..nt {
                                out[(r0 + j, c0 + j)] += a;
                            }
                        }
                        AngularFactor::Swap => {
                            for j in 0..nt {
                                out[(r0 + j, c0 + (j + half) % nt)] += a;
                            }
                        }
                        AngularFactor::Dense(b) => {
                            for l in 0..nt {
                                for k in 0..nt {
                                    out[(r0 + k, c0 + l)] += a * b[(k, l)];
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The whole matrix.
    pub fn to_dense(&self) -> Mat<f64> {
        self.block(0..self.n_rings, 0..self.n_rings)
    }
}

/// Row scaling `diag(h)^p * m`.
fn row_scaled(m: &Mat<f64>, h: &[f64], p: i32) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| h[i].powi(p) * m[(i, j)])
}

fn inverse_radii(grid: &DiskGrid) -> Vec<f64> {
    grid.radii().iter().map(|r| 1.0 / r).collect()
}

fn radial_orders(grid: &DiskGrid, max: usize) -> Result<Vec<(Mat<f64>, Mat<f64>)>> {
    let d = cheb_diff_matrix(&grid.radial, 1)?.into_entries();
    let mut out = Vec::with_capacity(max);
    let mut dm = d.clone();
    for m in 1..=max {
        if m > 1 {
            dm = &dm * &d;
        }
        out.push(split_radial(&dm, grid.n_r));
    }
    Ok(out)
}

/// Kronecker terms of the polar Laplacian.
pub fn laplacian_terms(grid: &DiskGrid) -> Result<KroneckerSum> {
    let h = inverse_radii(grid);
    let d = radial_orders(grid, 2)?;
    let (d1_1, d2_1) = &d[0];
    let (d1_2, d2_2) = &d[1];
    let dt2 = fourier_diff_matrix(&grid.angles, 2)?.into_entries();
    let n = grid.n_rings();
    let h2 = Mat::from_fn(n, n, |i, j| if i == j { h[i] * h[i] } else { 0.0 });
    Ok(KroneckerSum::new(
        n,
        grid.n_theta(),
        vec![
            (d1_2 + row_scaled(d1_1, &h, 1), AngularFactor::Identity),
            (d2_2 + row_scaled(d2_1, &h, 1), AngularFactor::Swap),
            (h2, AngularFactor::Dense(dt2)),
        ],
    ))
}

/// Kronecker terms of the polar biharmonic operator.
pub fn biharmonic_terms(grid: &DiskGrid) -> Result<KroneckerSum> {
    let n = grid.n_rings();
    if n < 3 {
        return Err(Error::InvalidGrid(format!(
            "biharmonic operator needs at least 3 rings, got {n}"
        )));
    }
    let h = inverse_radii(grid);
    let d = radial_orders(grid, 4)?;
    let radial = |k: usize| -> Mat<f64> {
        let pick = |m: usize| if k == 1 { &d[m - 1].0 } else { &d[m - 1].1 };
        pick(4) + row_scaled(pick(3), &h, 1) * 2.0 - row_scaled(pick(2), &h, 2)
            + row_scaled(pick(1), &h, 3)
    };
    let mixed = |k: usize| -> Mat<f64> {
        let pick = |m: usize| if k == 1 { &d[m - 1].0 } else { &d[m - 1].1 };
        (row_scaled(pick(2), &h, 2) - row_scaled(pick(1), &h, 3)) * 2.0
    };
    let dt2 = fourier_diff_matrix(&grid.angles, 2)?.into_entries();
    let dt4 = fourier_diff_matrix(&grid.angles, 4)?.into_entries();
    let nt = grid.n_theta();
    let swap_dt2 = Mat::from_fn(nt, nt, |k, l| dt2[((k + nt / 2) % nt, l)]);
    let h4 = Mat::from_fn(n, n, |i, j| if i == j { h[i].powi(4) } else { 0.0 });
    let angular4 = &dt4 + &dt2 * 4.0;
    Ok(KroneckerSum::new(
        n,
        nt,
        vec![
            (radial(1), AngularFactor::Identity),
            (radial(2), AngularFactor::Swap),
            (mixed(1), AngularFactor::Dense(dt2)),
            (mixed(2), AngularFactor::Dense(swap_dt2)),
            (h4, AngularFactor::Dense(angular4)),
        ],
    ))
}

/// Kronecker terms of the radial derivative `d/dr`.
pub fn radial_derivative_terms(grid: &DiskGrid) -> Result<KroneckerSum> {
    let (d1, d2) = radial_submatrices(grid, 1)?;
    Ok(KroneckerSum::new(
        grid.n_rings(),
        grid.n_theta(),
        vec![(d1, AngularFactor::Identity), (d2, AngularFactor::Swap)],
    ))
}

/// The polar Laplacian on the full field.
pub fn polar_laplacian(grid: &DiskGrid) -> Result<Mat<f64>> {
    Ok(laplacian_terms(grid)?.to_dense())
}

/// The polar biharmonic operator on the full field.
pub fn polar_biharmonic(grid: &DiskGrid) -> Result<Mat<f64>> {
    Ok(biharmonic_terms(grid)?.to_dense())
}

/// The radial derivative matrix on the full field.
pub fn radial_derivative_matrix(grid: &DiskGrid) -> Result<Mat<f64>> {
    Ok(radial_derivative_terms(grid)?.to_dense())
}

/// One ring-by-ring block of the radial derivative matrix for any even angle
/// count, including counts too small for a full grid.
pub fn radial_derivative_block(
    n_r: usize,
    n_theta: usize,
    radius: f64,
    row_ring: usize,
    col_ring: usize,
) -> Result<Mat<f64>> {
    if n_theta < 2 || n_theta % 2 != 0 {
        return Err(Error::InvalidGrid(format!(
            "n_theta must be even and positive, got {n_theta}"
        )));
    }
    if n_r < 3 || n_r % 2 == 0 {
        return Err(Error::InvalidGrid(format!(
            "n_r must be odd and at least 3, got {n_r}"
        )));
    }
    let half = n_r.div_ceil(2);
    if row_ring >= half || col_ring >= half {
        return Err(Error::InvalidGrid(format!(
            "ring index out of range for {half} rings"
        )));
    }
    let radial = cgl_grid(n_r, -radius, radius)?;
    let (d1, d2) = split_radial(&cheb_diff_matrix(&radial, 1)?.into_entries(), n_r);
    let sum = KroneckerSum::new(
        half,
        n_theta,
        vec![(d1, AngularFactor::Identity), (d2, AngularFactor::Swap)],
    );
    Ok(sum.block(row_ring..row_ring + 1, col_ring..col_ring + 1))
}

/// Evaluates the disk interpolant of the full field `coeffs` at `(r, theta)`.
///
/// Each coefficient multiplies its own cardinal function plus the mirrored
/// one at `(-r_k, theta_l + pi)`, so the interpolant is single valued.
pub fn disk_interpolant_eval(grid: &DiskGrid, coeffs: &[f64], r: f64, theta: f64) -> Result<f64> {
    if coeffs.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            what: "disk coefficients",
            expected: grid.len(),
            got: coeffs.len(),
        });
    }
    if !(0.0..=grid.radius).contains(&r) {
        return Err(Error::OutOfDomain {
            value: r,
            lo: 0.0,
            hi: grid.radius,
        });
    }
    let lr = grid.radial.cardinal_values(r)?;
    let st = grid.angles.cardinal_values(theta);
    let nt = grid.n_theta();
    let mut total = 0.0;
    for k in 0..grid.n_rings() {
        let (near, far) = (lr[k], lr[grid.n_r - k]);
        if near == 0.0 && far == 0.0 {
            continue;
        }
        let row = &coeffs[k * nt..(k + 1) * nt];
        for (l, &a) in row.iter().enumerate() {
            total += a * (st[l] * near + st[grid.angles.half_shift(l)] * far);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_vec;

    #[test]
    fn grid_examples() {
        let g = disk_grid(3, 4, 1.0).unwrap();
        assert_eq!(g.radii().len(), 2);
        assert_eq!(g.radii()[0], 1.0);
        assert!((g.radii()[1] - 0.5).abs() < 1e-15);

        let g = disk_grid(5, 6, 2.0).unwrap();
        let want = [2.0, 1.618033988749895, 0.6180339887498949];
        for (r, w) in g.radii().iter().zip(want) {
            assert!((r - w).abs() < 1e-14);
        }
        assert!(matches!(disk_grid(4, 4, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(disk_grid(5, 5, 1.0), Err(Error::InvalidGrid(_))));
        assert!(disk_grid(5, 4, 0.0).is_err());
    }

    #[test]
    fn d1_is_top_left_block() {
        let g = disk_grid(3, 4, 1.0).unwrap();
        let full = cheb_diff_matrix(g.radial_grid(), 1).unwrap();
        let (d1, d2) = radial_submatrices(&g, 1).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(d1[(i, j)], full.get(i, j));
                assert_eq!(d2[(i, j)], full.get(i, 3 - j));
            }
        }
    }

    #[test]
    fn radius_scales_first_order() {
        let (a, _) = radial_submatrices(&disk_grid(7, 4, 1.0).unwrap(), 1).unwrap();
        let (b, _) = radial_submatrices(&disk_grid(7, 4, 2.0).unwrap(), 1).unwrap();
        assert!((&a * 0.5 - &b).norm_max() < 1e-14);
    }

    #[test]
    fn laplacian_of_r_squared() {
        let g = disk_grid(9, 8, 1.0).unwrap();
        let lap = polar_laplacian(&g).unwrap();
        let out = mat_vec(lap.as_ref(), &g.sample(|r, _| r * r));
        assert!(out.iter().all(|v| (v - 4.0).abs() < 1e-7));
    }

    #[test]
    fn block_matches_dense() {
        let g = disk_grid(9, 6, 1.0).unwrap();
        let terms = laplacian_terms(&g).unwrap();
        let full = terms.to_dense();
        let b = terms.block(1..5, 0..1);
        let nt = 6;
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                assert_eq!(b[(i, j)], full[(nt + i, j)]);
            }
        }
    }

    #[test]
    fn biharmonic_needs_three_rings() {
        let g = disk_grid(3, 4, 1.0).unwrap();
        assert!(matches!(polar_biharmonic(&g), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn interpolant_reproduces_linear() {
        let g = disk_grid(5, 8, 1.0).unwrap();
        let a = g.sample(|r, t| r * t.cos());
        let v = disk_interpolant_eval(&g, &a, 0.3, 1.1).unwrap();
        assert!((v - 0.3 * 1.1f64.cos()).abs() < 1e-10);
        assert!(disk_interpolant_eval(&g, &a, 1.2, 0.0).is_err());
        assert!(disk_interpolant_eval(&g, &a, -0.1, 0.0).is_err());
    }

    #[test]
    fn interpolant_at_node() {
        let g = disk_grid(7, 8, 1.0).unwrap();
        let a: Vec<f64> = (0..g.len()).map(|i| (i as f64).sqrt()).collect();
        let (r, t) = (g.radii()[1], g.angular().angles()[2]);
        assert_eq!(
            disk_interpolant_eval(&g, &a, r, t).unwrap(),
            a[g.index(1, 2)]
        );
    }

    #[test]
    fn field_layout_lengths() {
        let g = disk_grid(7, 4, 1.0).unwrap();
        assert!(PolarField::new(&g, FieldLayout::Full, vec![0.0; 16]).is_ok());
        assert!(PolarField::new(&g, FieldLayout::Interior, vec![0.0; 12]).is_ok());
        assert!(PolarField::new(&g, FieldLayout::BiharmonicInterior, vec![0.0; 8]).is_ok());
        assert!(PolarField::new(&g, FieldLayout::Interior, vec![0.0; 16]).is_err());
    }
}
