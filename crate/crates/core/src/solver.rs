//! Solvers for the discrete problems `D u + F(u) + W = 0`.

use std::fmt;
use std::sync::Arc;

use faer::Mat;

use crate::bc1d::{recover_boundary, AffineOperator};
use crate::bc2d::DiskAffineOperator;
use crate::chebyshev::Grid1D;
use crate::error::{Error, Result};
use crate::linalg::{mat_vec, norm_inf, DenseLu, ILL_CONDITIONED_RCOND};
use crate::polar::DiskGrid;

/// Default Newton tolerance on the infinity norm of the residual.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default Newton iteration cap.
pub const DEFAULT_MAX_ITER: usize = 50;

/// A collocation node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    Line { x: f64 },
    Polar { r: f64, theta: f64 },
}

impl Node {
    /// Cartesian coordinates; `(x, 0)` on a line.
    pub fn cartesian(self) -> (f64, f64) {
        match self {
            Node::Line { x } => (x, 0.0),
            Node::Polar { r, theta } => (r * theta.cos(), r * theta.sin()),
        }
    }
}

pub type NodeFn = Arc<dyn Fn(Node) -> f64 + Send + Sync>;
pub type ReactionFn = Arc<dyn Fn(Node, f64) -> f64 + Send + Sync>;

/// The term `F(node, u)` of the equation.
#[derive(Clone)]
pub enum Reaction {
    /// `F = coeff(node) u + source(node)`.
    Linear { coeff: NodeFn, source: NodeFn },
    /// General `F` with its derivative in `u`.
    Nonlinear {
        value: ReactionFn,
        derivative: ReactionFn,
    },
}

impl Reaction {
    /// `F = 0`.
    pub fn zero() -> Self {
        Reaction::Linear {
            coeff: Arc::new(|_| 0.0),
            source: Arc::new(|_| 0.0),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Reaction::Linear { .. })
    }

    pub fn value(&self, node: Node, u: f64) -> f64 {
        match self {
            Reaction::Linear { coeff, source } => coeff(node) * u + source(node),
            Reaction::Nonlinear { value, .. } => value(node, u),
        }
    }

    pub fn derivative(&self, node: Node, u: f64) -> f64 {
        match self {
            Reaction::Linear { coeff, .. } => coeff(node),
            Reaction::Nonlinear { derivative, .. } => derivative(node, u),
        }
    }
}

impl fmt::Debug for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_linear() {
            "Reaction::Linear"
        } else {
            "Reaction::Nonlinear"
        })
    }
}

/// Either kind of boundary-embedded operator.
#[derive(Debug, Clone)]
pub enum Operator {
    Line(AffineOperator),
    Disk(DiskAffineOperator),
}

/// The grid a solution lives on.
#[derive(Debug, Clone, PartialEq)]
pub enum Discretization {
    Line(Grid1D),
    Disk(DiskGrid),
}

impl Discretization {
    /// Every node in storage order of the full solution.
    pub fn nodes(&self) -> Vec<Node> {
        match self {
            Discretization::Line(g) => g.nodes().iter().map(|&x| Node::Line { x }).collect(),
            Discretization::Disk(g) => g
                .nodes()
                .into_iter()
                .map(|(r, theta)| Node::Polar { r, theta })
                .collect(),
        }
    }
}

impl Operator {
    pub fn size(&self) -> usize {
        match self {
            Operator::Line(op) => op.size(),
            Operator::Disk(op) => op.size(),
        }
    }

    pub fn matrix(&self) -> &Mat<f64> {
        match self {
            Operator::Line(op) => op.matrix(),
            Operator::Disk(op) => op.matrix(),
        }
    }

    pub fn shift(&self) -> &[f64] {
        match self {
            Operator::Line(op) => op.shift(),
            Operator::Disk(op) => op.shift(),
        }
    }

    pub fn discretization(&self) -> Discretization {
        match self {
            Operator::Line(op) => Discretization::Line(op.grid().clone()),
            Operator::Disk(op) => Discretization::Disk(op.grid().clone()),
        }
    }

    /// Nodes of the unknowns.
    pub fn unknown_nodes(&self) -> Vec<Node> {
        match self {
            Operator::Line(op) => op
                .unknown_nodes()
                .into_iter()
                .map(|x| Node::Line { x })
                .collect(),
            Operator::Disk(op) => op
                .unknown_nodes()
                .into_iter()
                .map(|(r, theta)| Node::Polar { r, theta })
                .collect(),
        }
    }

    /// Eliminated values recovered from the unknowns.
    pub fn recover(&self, u: &[f64]) -> Result<Vec<f64>> {
        match self {
            Operator::Line(op) => recover_boundary(op, u),
            Operator::Disk(op) => {
                let full = op.full_field(u)?;
                let k = full.len() - u.len();
                Ok(full[..k].to_vec())
            }
        }
    }

    /// Values at every node of the discretization.
    pub fn full_solution(&self, u: &[f64]) -> Result<Vec<f64>> {
        match self {
            Operator::Line(op) => op.full_solution(u),
            Operator::Disk(op) => op.full_field(u),
        }
    }
}

/// A discrete boundary-value problem `D^gamma u + F(u) = 0` with embedded
/// boundary data.
#[derive(Clone)]
pub struct ProblemDefinition {
    pub operator: Operator,
    /// Derivative order on a line (2 or 4); Laplacian power on the disk (1 or 2).
    pub gamma: usize,
    pub reaction: Reaction,
    pub exact: Option<NodeFn>,
}

impl fmt::Debug for ProblemDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDefinition")
            .field("operator", &self.operator)
            .field("gamma", &self.gamma)
            .field("reaction", &self.reaction)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl ProblemDefinition {
    pub fn new(operator: Operator, gamma: usize, reaction: Reaction) -> Self {
        Self {
            operator,
            gamma,
            reaction,
            exact: None,
        }
    }

    pub fn with_exact(mut self, exact: NodeFn) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn is_linear(&self) -> bool {
        self.reaction.is_linear()
    }

    /// `D u + F(u) + W` at the unknowns.
    pub fn residual(&self, u: &[f64]) -> Result<Vec<f64>> {
        let nodes = self.operator.unknown_nodes();
        self.residual_at(&nodes, u)
    }

    fn residual_at(&self, nodes: &[Node], u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.operator.size() {
            return Err(Error::DimensionMismatch {
                what: "unknown vector",
                expected: self.operator.size(),
                got: u.len(),
            });
        }
        let mut r = mat_vec(self.operator.matrix().as_ref(), u);
        for (((ri, &w), &node), &ui) in r.iter_mut().zip(self.operator.shift()).zip(nodes).zip(u) {
            *ri += w + self.reaction.value(node, ui);
        }
        Ok(r)
    }

    /// Starting guess used when none is given: zero on a line, the mean of
    /// the boundary data on the disk.
    pub fn default_initial_guess(&self) -> Vec<f64> {
        let level = match &self.operator {
            Operator::Line(_) => 0.0,
            Operator::Disk(op) => {
                use crate::bc2d::BoundarySpecDisk as S;
                let data = match op.spec() {
                    S::Dirichlet { f } | S::BiharmonicDirichlet { f, .. } => f,
                    S::Neumann { g } => g,
                    S::Robin { h, .. } => h,
                };
                data.iter().sum::<f64>() / data.len() as f64
            }
        };
        vec![level; self.operator.size()]
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Values at the unknowns.
    pub solution: Vec<f64>,
    /// Recovered eliminated values.
    pub boundary: Vec<f64>,
    /// Values at every node, ordered as `discretization.nodes()`.
    pub full: Vec<f64>,
    pub discretization: Discretization,
    /// Infinity norm of `D u + F(u) + W`.
    pub residual_norm: f64,
    pub newton_iterations: usize,
    pub converged: bool,
    /// Residual norm before each Newton update, and at the final iterate.
    pub residual_history: Vec<f64>,
    /// Smallest reciprocal condition estimate over the factored systems; 1
    /// when nothing was factored.
    pub rcond: f64,
}

impl SolveReport {
    /// Whether some factored system was singular to working precision, so
    /// that the solution may carry an arbitrary null-space component.
    pub fn is_ill_conditioned(&self) -> bool {
        self.rcond < ILL_CONDITIONED_RCOND
    }
}

fn finish(
    problem: &ProblemDefinition,
    u: Vec<f64>,
    residual_norm: f64,
    newton_iterations: usize,
    converged: bool,
    residual_history: Vec<f64>,
    rcond: f64,
) -> Result<SolveReport> {
    let boundary = problem.operator.recover(&u)?;
    let full = problem.operator.full_solution(&u)?;
    Ok(SolveReport {
        solution: u,
        boundary,
        full,
        discretization: problem.operator.discretization(),
        residual_norm,
        newton_iterations,
        converged,
        residual_history,
        rcond,
    })
}

/// `D + diag(d)` as a fresh matrix.
fn shifted_matrix(d: &Mat<f64>, diag: &[f64]) -> Mat<f64> {
    let mut a = d.clone();
    for (i, &c) in diag.iter().enumerate() {
        a[(i, i)] += c;
    }
    a
}

/// Solves a problem with `F = c u + s` directly: `(D + diag c) u = -W - s`.
pub fn solve_linear(problem: &ProblemDefinition) -> Result<SolveReport> {
    let (coeff, source) = match &problem.reaction {
        Reaction::Linear { coeff, source } => (coeff, source),
        Reaction::Nonlinear { .. } => {
            return Err(Error::InvalidOrder {
                order: problem.gamma,
                expected: "a linear reaction term for the direct solver",
            })
        }
    };
    let nodes = problem.operator.unknown_nodes();
    let c: Vec<f64> = nodes.iter().map(|&n| coeff(n)).collect();
    let rhs: Vec<f64> = nodes
        .iter()
        .zip(problem.operator.shift())
        .map(|(&n, &w)| -w - source(n))
        .collect();
    let lu = DenseLu::factor(shifted_matrix(problem.operator.matrix(), &c))?;
    let u = lu.solve(&rhs);
    let rcond = lu.rcond();
    drop(lu);
    let residual_norm = norm_inf(&problem.residual_at(&nodes, &u)?);
    finish(
        problem,
        u,
        residual_norm,
        0,
        true,
        vec![residual_norm],
        rcond,
    )
}

/// Newton iteration `u <- u - J^{-1} (D u + F(u) + W)` with `J = D + diag(F_u)`.
///
/// A halving line search is used only when a full step increases the
/// residual. When the tolerance is not reached within `max_iter` updates the
/// best iterate is returned with `converged = false`.
pub fn solve_newton(
    problem: &ProblemDefinition,
    u0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidOrder {
            order: 0,
            expected: "a positive Newton tolerance",
        });
    }
    let nodes = problem.operator.unknown_nodes();
    let mut u = u0.to_vec();
    let mut r = problem.residual_at(&nodes, &u)?;
    let mut res = norm_inf(&r);
    let mut history = vec![res];
    let mut iterations = 0;
    let mut rcond = 1.0f64;
    while res > tol && iterations < max_iter {
        iterations += 1;
        let jd: Vec<f64> = nodes
            .iter()
            .zip(&u)
            .map(|(&n, &ui)| problem.reaction.derivative(n, ui))
            .collect();
        let lu =
            DenseLu::factor(shifted_matrix(problem.operator.matrix(), &jd)).map_err(
                |e| match e {
                    Error::SingularSystem { .. } => Error::SingularJacobian {
                        iteration: iterations,
                    },
                    other => other,
                },
            )?;
        let step = lu.solve(&r);
        rcond = rcond.min(lu.rcond());
        drop(lu);

        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(a, s)| a - lambda * s).collect();
            let r_trial = problem.residual_at(&nodes, &trial)?;
            let res_trial = norm_inf(&r_trial);
            if res_trial <= res || lambda < 1.0 / 1024.0 {
                u = trial;
                r = r_trial;
                res = res_trial;
                break;
            }
            lambda *= 0.5;
        }
        history.push(res);
    }
    finish(problem, u, res, iterations, res <= tol, history, rcond)
}

/// Solves with the direct solver for linear problems and Newton otherwise,
/// using the default starting guess.
pub fn solve(problem: &ProblemDefinition, tol: f64, max_iter: usize) -> Result<SolveReport> {
    if problem.is_linear() {
        solve_linear(problem)
    } else {
        solve_newton(problem, &problem.default_initial_guess(), tol, max_iter)
    }
}

/// Turns a non-converged report into an error.
pub fn require_convergence(report: SolveReport) -> Result<SolveReport> {
    if report.converged {
        Ok(report)
    } else {
        Err(Error::NoConvergence {
            iterations: report.newton_iterations,
            residual: report.residual_norm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bc1d::dirichlet_op;
    use crate::chebyshev::cgl_grid;

    fn zero_problem() -> ProblemDefinition {
        let g = cgl_grid(12, 0.0, 1.0).unwrap();
        ProblemDefinition::new(
            Operator::Line(dirichlet_op(&g, 0.0, 0.0).unwrap()),
            2,
            Reaction::zero(),
        )
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let rep = solve_linear(&zero_problem()).unwrap();
        assert!(rep.solution.iter().all(|&v| v == 0.0));
        assert_eq!(rep.newton_iterations, 0);
        assert!(rep.converged);
        assert_eq!(rep.full.len(), 13);
    }

    #[test]
    fn newton_matches_linear_for_zero_reaction() {
        let g = cgl_grid(10, 0.0, 1.0).unwrap();
        let p = ProblemDefinition::new(
            Operator::Line(dirichlet_op(&g, 1.0, 2.0).unwrap()),
            2,
            Reaction::zero(),
        );
        let lin = solve_linear(&p).unwrap();
        let newt = solve_newton(&p, &vec![0.0; p.operator.size()], 1e-10, 5).unwrap();
        assert_eq!(newt.newton_iterations, 1);
        for (a, b) in lin.solution.iter().zip(&newt.solution) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn nonpositive_tolerance_is_rejected() {
        let p = zero_problem();
        assert!(solve_newton(&p, &vec![0.0; p.operator.size()], 0.0, 5).is_err());
    }

    #[test]
    fn unreachable_tolerance_reports_nonconvergence() {
        let g = cgl_grid(8, 0.0, 1.0).unwrap();
        let p = ProblemDefinition::new(
            Operator::Line(dirichlet_op(&g, 0.0, 0.0).unwrap()),
            2,
            Reaction::Nonlinear {
                value: Arc::new(|_, u| u.exp()),
                derivative: Arc::new(|_, _| 0.0),
            },
        );
        let rep = solve_newton(&p, &vec![0.0; p.operator.size()], 1e-300, 3).unwrap();
        assert!(!rep.converged);
        assert!(matches!(
            require_convergence(rep),
            Err(Error::NoConvergence { .. })
        ));
    }
}
