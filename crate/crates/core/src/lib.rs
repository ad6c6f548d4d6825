//! Chebyshev and Chebyshev-Fourier collocation with boundary conditions
//! embedded in the differentiation matrices.
//!
//! The crate builds boundary-embedded operators on an interval and on the
//! unit disk (without duplicating the disk), and solves linear and nonlinear
//! second- and fourth-order boundary-value problems with them.

pub mod bc1d;
pub mod bc2d;
pub mod chebyshev;
pub mod cli;
pub mod error;
pub mod fourier;
pub mod linalg;
pub mod polar;
pub mod problems;
pub mod solver;

pub use bc1d::{
    biharmonic_op, boundary_op, dirichlet_op, neumann_op, recover_boundary, robin_op,
    AffineOperator, BoundarySpec1D,
};
pub use bc2d::{
    biharmonic_dirichlet_op, disk_boundary_op, laplace_dirichlet_op, laplace_neumann_op,
    laplace_robin_op, recover_boundary_rings, BoundarySpecDisk, DiskAffineOperator,
};
pub use chebyshev::{cgl_grid, cheb_diff_matrix, lagrange_eval, DiffMatrix, Grid1D, GridTag};
pub use error::{Error, Result};
pub use fourier::{
    dirichlet_kernel, dirichlet_kernel_derivative, fourier_diff_matrix, AngularGrid,
};
pub use polar::{
    disk_grid, disk_interpolant_eval, polar_biharmonic, polar_laplacian, radial_derivative_matrix,
    radial_submatrices, DiskGrid, FieldLayout, PolarField,
};
pub use problems::{error_report, get_problem, ErrorSummary, GridSpec, NamedProblem};
pub use solver::{
    solve_linear, solve_newton, Discretization, Node, Operator, ProblemDefinition, Reaction,
    SolveReport,
};
