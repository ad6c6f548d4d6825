//! Chebyshev–Gauss–Lobatto grids, differentiation matrices and barycentric
//! evaluation of the nodal interpolant.
//!
//! Nodes are stored in descending order, `x[0] = b` and `x[n] = a`, so that
//! index `i` here corresponds to the one-based node `x_{i+1}` used throughout
//! the boundary elimination code.

use std::f64::consts::PI;

use faer::Mat;

use crate::error::{Error, Result};

/// Identifies the grid a differentiation matrix was built on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridTag {
    Chebyshev { n_panels: usize, a: f64, b: f64 },
    Fourier { n_angles: usize },
}

/// Mapped CGL nodes on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    n_panels: usize,
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    bary_weights: Vec<f64>,
}

impl Grid1D {
    pub fn n_panels(&self) -> usize {
        self.n_panels
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn bary_weights(&self) -> &[f64] {
        &self.bary_weights
    }

    pub fn tag(&self) -> GridTag {
        GridTag::Chebyshev {
            n_panels: self.n_panels,
            a: self.a,
            b: self.b,
        }
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    /// Values of every cardinal polynomial `L_j` at `x`.
    ///
    /// At a node the result is the corresponding unit vector exactly.
    pub fn cardinal_values(&self, x: f64) -> Result<Vec<f64>> {
        if !(self.a..=self.b).contains(&x) {
            return Err(Error::OutOfDomain {
                value: x,
                lo: self.a,
                hi: self.b,
            });
        }
        let mut out = vec![0.0; self.nodes.len()];
        if let Some(hit) = self.nodes.iter().position(|&xj| xj == x) {
            out[hit] = 1.0;
            return Ok(out);
        }
        let mut total = 0.0;
        for ((o, &xj), &wj) in out.iter_mut().zip(&self.nodes).zip(&self.bary_weights) {
            *o = wj / (x - xj);
            total += *o;
        }
        out.iter_mut().for_each(|o| *o /= total);
        Ok(out)
    }
}

/// Reference CGL abscissa `cos(k pi / n)` evaluated through the sine form,
/// which is exactly antisymmetric about the midpoint.
pub(crate) fn reference_node(k: usize, n: usize) -> f64 {
    let num = n as f64 - 2.0 * k as f64;
    (PI * num / (2.0 * n as f64)).sin()
}

/// Builds the CGL grid with `n_panels + 1` nodes on `[a, b]`.
pub fn cgl_grid(n_panels: usize, a: f64, b: f64) -> Result<Grid1D> {
    if n_panels < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 panels, got {n_panels}"
        )));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "endpoints must be finite, got [{a}, {b}]"
        )));
    }
    if b <= a {
        return Err(Error::InvalidGrid(format!(
            "right endpoint {b} must exceed left endpoint {a}"
        )));
    }
    let half_len = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut nodes: Vec<f64> = (0..=n_panels)
        .map(|k| half_len * reference_node(k, n_panels) + mid)
        .collect();
    nodes[0] = b;
    nodes[n_panels] = a;

    let bary_weights = (0..=n_panels)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            if k == 0 || k == n_panels {
                0.5 * sign
            } else {
                sign
            }
        })
        .collect();

    Ok(Grid1D {
        n_panels,
        a,
        b,
        nodes,
        bary_weights,
    })
}

/// Dense differentiation matrix with provenance.
#[derive(Debug, Clone)]
pub struct DiffMatrix {
    order: usize,
    entries: Mat<f64>,
    grid: GridTag,
}

impl DiffMatrix {
    pub(crate) fn new(order: usize, entries: Mat<f64>, grid: GridTag) -> Self {
        Self {
            order,
            entries,
            grid,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> (usize, usize) {
        (self.entries.nrows(), self.entries.ncols())
    }

    pub fn grid_tag(&self) -> GridTag {
        self.grid
    }

    pub fn entries(&self) -> &Mat<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> Mat<f64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        crate::linalg::mat_vec(self.entries.as_ref(), v)
    }
}

/// First-derivative matrix on the reference interval, descending nodes.
fn reference_first_derivative(n: usize) -> Mat<f64> {
    let weight = |k: usize| if k == 0 || k == n { 2.0 } else { 1.0 };
    let mut d = Mat::<f64>::zeros(n + 1, n + 1);
    let half_step = PI / (2.0 * n as f64);
    for i in 0..=n {
        let mut row_sum = 0.0;
        for j in 0..=n {
            if i == j {
                continue;
            }
            // y_i - y_j = 2 sin((i+j) pi / 2n) sin((j-i) pi / 2n)
            let diff = 2.0
                * ((i + j) as f64 * half_step).sin()
                * ((j as f64 - i as f64) * half_step).sin();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let v = weight(i) / weight(j) * sign / diff;
            d[(i, j)] = v;
            row_sum += v;
        }
        d[(i, i)] = -row_sum;
    }
    d
}

/// Order-`m` CGL differentiation matrix on `grid`.
///
/// The first-order matrix uses the explicit off-diagonal entries with the
/// diagonal set to minus the off-diagonal row sum; higher orders are matrix
/// powers of it.
pub fn cheb_diff_matrix(grid: &Grid1D, m: usize) -> Result<DiffMatrix> {
    if m < 1 {
        return Err(Error::InvalidOrder {
            order: m,
            expected: "m >= 1",
        });
    }
    let scale = 2.0 / (grid.b - grid.a);
    let mut d1 = reference_first_derivative(grid.n_panels);
    d1.as_mut().col_iter_mut().for_each(|col| {
        col.iter_mut().for_each(|v| *v *= scale);
    });
    let mut dm = d1.clone();
    for _ in 1..m {
        dm = &dm * &d1;
    }
    Ok(DiffMatrix::new(m, dm, grid.tag()))
}

/// Evaluates the degree-`N` interpolant of `values` at `x` (barycentric form).
pub fn lagrange_eval(grid: &Grid1D, values: &[f64], x: f64) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            what: "nodal values",
            expected: grid.len(),
            got: values.len(),
        });
    }
    if !(grid.a..=grid.b).contains(&x) {
        return Err(Error::OutOfDomain {
            value: x,
            lo: grid.a,
            hi: grid.b,
        });
    }
    if let Some(hit) = grid.nodes.iter().position(|&xj| xj == x) {
        return Ok(values[hit]);
    }
    let (mut num, mut den) = (0.0, 0.0);
    for ((&xj, &wj), &fj) in grid.nodes.iter().zip(&grid.bary_weights).zip(values) {
        let t = wj / (x - xj);
        num += t * fj;
        den += t;
    }
    Ok(num / den)
}
