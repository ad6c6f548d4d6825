//! C interface to `chebdisk`.
//!
//! Problems and solutions are opaque handles created by this library and
//! released with the matching `_free` function. Fallible calls return a
//! [`CdStatus`]; the message of the most recent failure on the calling thread
//! is available through [`cd_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::{ptr, slice};

use chebdisk::problems::{all_problems, error_report, ErrorSummary};
use chebdisk::solver::solve;
use chebdisk::{
    cgl_grid, cheb_diff_matrix, fourier_diff_matrix, get_problem, AngularGrid, DiffMatrix, Error,
    GridSpec, NamedProblem, Node, ProblemDefinition, SolveReport,
};

/// Newton tolerance used by the command-line tool.
pub const CD_DEFAULT_TOL: f64 = 1e-8;

/// Newton iteration cap used by the command-line tool.
pub const CD_DEFAULT_MAX_ITER: usize = 50;

/// Result of every fallible call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGrid = 3,
    UnknownProblem = 4,
    Singular = 5,
    /// The solution handle is still produced.
    NoConvergence = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// A registered problem discretized on one grid.
pub struct CdProblem {
    named: NamedProblem,
    definition: ProblemDefinition,
}

/// The outcome of a solve.
pub struct CdSolution {
    report: SolveReport,
    errors: ErrorSummary,
}

/// Scalar diagnostics of a solution.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CdSolveInfo {
    pub newton_iterations: usize,
    /// 1 when the Newton tolerance was met or the problem is linear.
    pub converged: i32,
    pub residual_norm: f64,
    pub max_error: f64,
    pub two_norm_error: f64,
    /// Reciprocal condition estimate; below machine epsilon the system was
    /// singular to working precision.
    pub rcond: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure {
    status: CdStatus,
    message: String,
}

impl Failure {
    fn new(status: CdStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidGrid(_)
            | Error::InvalidOrder { .. }
            | Error::DimensionMismatch { .. } => CdStatus::InvalidGrid,
            Error::UnknownProblem { .. } => CdStatus::UnknownProblem,
            Error::SingularElimination(_)
            | Error::SingularSystem { .. }
            | Error::SingularJacobian { .. } => CdStatus::Singular,
            Error::NoConvergence { .. } => CdStatus::NoConvergence,
            _ => CdStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    LAST_ERROR.with(|m| {
        let mut m = m.borrow_mut();
        m.clear();
        m.push_str(message);
    });
}

fn guard(f: impl FnOnce() -> Result<CdStatus, Failure>) -> CdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(_) => {
            set_last_error("internal panic");
            CdStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(
            CdStatus::NullPointer,
            format!("{what} is null"),
        ))
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(s, what)?;
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::new(CdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_slice(
    src: &[f64],
    dst: *mut f64,
    len: usize,
    what: &str,
) -> Result<CdStatus, Failure> {
    non_null(dst, what)?;
    if len < src.len() {
        return Err(Failure::new(
            CdStatus::BufferTooSmall,
            format!("{what} holds {len} values, {} needed", src.len()),
        ));
    }
    slice::from_raw_parts_mut(dst, src.len()).copy_from_slice(src);
    Ok(CdStatus::Ok)
}

unsafe fn write_c_string(text: &str, buf: *mut c_char, len: usize) -> bool {
    if buf.is_null() || len == 0 {
        return false;
    }
    let n = text.len().min(len - 1);
    ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, n);
    *buf.add(n) = 0;
    n == text.len()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (truncated and
/// NUL-terminated) and returns its full length in bytes. Passing a null
/// `buf` only queries the length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cd_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|m| {
        let m = m.borrow();
        write_c_string(&m, buf, len);
        m.len()
    })
}

/// Number of registered problems.
#[no_mangle]
pub extern "C" fn cd_problem_count() -> usize {
    all_problems().len()
}

/// Writes the identifier of problem `index` into `buf`.
///
/// # Safety
/// `buf` must be valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn cd_problem_id(index: usize, buf: *mut c_char, len: usize) -> CdStatus {
    guard(|| {
        non_null(buf, "buf")?;
        let problems = all_problems();
        let p = problems.get(index).ok_or_else(|| {
            Failure::new(
                CdStatus::InvalidArgument,
                format!("index {index} out of range for {} problems", problems.len()),
            )
        })?;
        if write_c_string(p.id, buf, len) {
            Ok(CdStatus::Ok)
        } else {
            Err(Failure::new(
                CdStatus::BufferTooSmall,
                format!("identifier needs {} bytes", p.id.len() + 1),
            ))
        }
    })
}

unsafe fn new_problem(id: *const c_char, grid: GridSpec, out: *mut *mut CdProblem) -> CdStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let named = get_problem(read_str(id, "id")?)?;
        let definition = named.build(&grid)?;
        *out = Box::into_raw(Box::new(CdProblem { named, definition }));
        Ok(CdStatus::Ok)
    })
}

/// Builds an interval problem with `n` panels.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_problem_new_line(
    id: *const c_char,
    n: usize,
    out: *mut *mut CdProblem,
) -> CdStatus {
    new_problem(id, GridSpec::Line { n }, out)
}

/// Builds a disk problem with `n_rings` rings of `n_theta` angles.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_problem_new_disk(
    id: *const c_char,
    n_rings: usize,
    n_theta: usize,
    radius: f64,
    out: *mut *mut CdProblem,
) -> CdStatus {
    new_problem(
        id,
        GridSpec::Disk {
            n_rings,
            n_theta,
            radius,
        },
        out,
    )
}

/// Releases a problem; null is ignored.
///
/// # Safety
/// `p` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cd_problem_free(p: *mut CdProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of unknowns after boundary elimination; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn cd_problem_unknowns(p: *const CdProblem) -> usize {
    p.as_ref().map_or(0, |p| p.definition.operator.size())
}

/// Solves `p`. On `CD_STATUS_NO_CONVERGENCE` the best iterate is still
/// returned through `out`.
///
/// # Safety
/// `p` must be a live problem handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_solve(
    p: *const CdProblem,
    tol: f64,
    max_iter: usize,
    out: *mut *mut CdSolution,
) -> CdStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let p = p
            .as_ref()
            .ok_or_else(|| Failure::new(CdStatus::NullPointer, "problem is null"))?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Failure::new(
                CdStatus::InvalidArgument,
                format!("tol must be positive, got {tol}"),
            ));
        }
        let report = solve(&p.definition, tol, max_iter)?;
        let errors = error_report(&p.named, &report, None)?;
        let converged = report.converged;
        let message = format!(
            "no convergence after {} iterations, residual {:e}",
            report.newton_iterations, report.residual_norm
        );
        *out = Box::into_raw(Box::new(CdSolution { report, errors }));
        if converged {
            Ok(CdStatus::Ok)
        } else {
            set_last_error(&message);
            Ok(CdStatus::NoConvergence)
        }
    })
}

/// Releases a solution; null is ignored.
///
/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cd_solution_free(s: *mut CdSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of grid nodes in the solution; 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn cd_solution_len(s: *const CdSolution) -> usize {
    s.as_ref().map_or(0, |s| s.report.full.len())
}

/// Copies the values at every node into `buf`.
///
/// # Safety
/// `s` must be a live solution handle and `buf` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cd_solution_values(
    s: *const CdSolution,
    buf: *mut f64,
    len: usize,
) -> CdStatus {
    guard(|| {
        let s = s
            .as_ref()
            .ok_or_else(|| Failure::new(CdStatus::NullPointer, "solution is null"))?;
        write_slice(&s.report.full, buf, len, "buf")
    })
}

/// Copies node coordinates: `x` into `first` on an interval (`second` may
/// be null), `r` and `theta` into `first` and `second` on the disk.
///
/// # Safety
/// `s` must be a live solution handle; `first` and non-null `second` must be
/// valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cd_solution_nodes(
    s: *const CdSolution,
    first: *mut f64,
    second: *mut f64,
    len: usize,
) -> CdStatus {
    guard(|| {
        let s = s
            .as_ref()
            .ok_or_else(|| Failure::new(CdStatus::NullPointer, "solution is null"))?;
        let nodes = s.report.discretization.nodes();
        let (a, b): (Vec<f64>, Vec<f64>) = nodes
            .iter()
            .map(|n| match *n {
                Node::Line { x } => (x, 0.0),
                Node::Polar { r, theta } => (r, theta),
            })
            .unzip();
        write_slice(&a, first, len, "first")?;
        let polar = matches!(nodes.first(), Some(Node::Polar { .. }));
        if polar || !second.is_null() {
            write_slice(&b, second, len, "second")?;
        }
        Ok(CdStatus::Ok)
    })
}

/// Fills `info` with the solve diagnostics and errors against the exact solution.
///
/// # Safety
/// `s` must be a live solution handle and `info` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cd_solution_info(
    s: *const CdSolution,
    info: *mut CdSolveInfo,
) -> CdStatus {
    guard(|| {
        non_null(info, "info")?;
        let s = s
            .as_ref()
            .ok_or_else(|| Failure::new(CdStatus::NullPointer, "solution is null"))?;
        *info = CdSolveInfo {
            newton_iterations: s.report.newton_iterations,
            converged: i32::from(s.report.converged),
            residual_norm: s.report.residual_norm,
            max_error: s.errors.max_error,
            two_norm_error: s.errors.two_norm_error,
            rcond: s.report.rcond,
        };
        Ok(CdStatus::Ok)
    })
}

/// Writes the `n + 1` Chebyshev-Gauss-Lobatto nodes of `[a, b]`, descending.
///
/// # Safety
/// `buf` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cd_cheb_nodes(
    n: usize,
    a: f64,
    b: f64,
    buf: *mut f64,
    len: usize,
) -> CdStatus {
    guard(|| {
        let g = cgl_grid(n, a, b)?;
        write_slice(g.nodes(), buf, len, "buf")
    })
}

/// Writes the order-`m` Chebyshev differentiation matrix on `n` panels of
/// `[a, b]` in row-major order, `(n + 1)^2` values.
///
/// # Safety
/// `buf` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cd_cheb_diff_matrix(
    n: usize,
    a: f64,
    b: f64,
    m: usize,
    buf: *mut f64,
    len: usize,
) -> CdStatus {
    guard(|| {
        let d = cheb_diff_matrix(&cgl_grid(n, a, b)?, m)?;
        write_slice(&row_major(&d), buf, len, "buf")
    })
}

/// Writes the order-`m` Fourier differentiation matrix on `n_theta`
/// equispaced angles in row-major order, `n_theta^2` values.
///
/// # Safety
/// `buf` must be valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cd_fourier_diff_matrix(
    n_theta: usize,
    m: usize,
    buf: *mut f64,
    len: usize,
) -> CdStatus {
    guard(|| {
        let d = fourier_diff_matrix(&AngularGrid::new(n_theta)?, m)?;
        write_slice(&row_major(&d), buf, len, "buf")
    })
}

fn row_major(d: &DiffMatrix) -> Vec<f64> {
    let (rows, cols) = d.size();
    (0..rows)
        .flat_map(|i| (0..cols).map(move |j| d.get(i, j)))
        .collect()
}
