//! Catalogue of the benchmark problems, with exact solutions and the
//! reference errors reported for them.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::bc1d::{biharmonic_op, dirichlet_op, neumann_op, robin_op};
use crate::bc2d::{
    biharmonic_dirichlet_op, laplace_dirichlet_op, laplace_neumann_op, laplace_robin_op,
};
use crate::chebyshev::{cgl_grid, lagrange_eval};
use crate::error::{Error, Result};
use crate::polar::{disk_grid, disk_interpolant_eval, DiskGrid};
use crate::solver::{
    Discretization, Node, NodeFn, Operator, ProblemDefinition, Reaction, SolveReport,
};

/// Grid parameters for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// `n` panels, `n + 1` nodes.
    Line { n: usize },
    /// `n_rings = (N_r + 1) / 2` rings of `n_theta` angles on a disk of `radius`.
    Disk {
        n_rings: usize,
        n_theta: usize,
        radius: f64,
    },
}

impl GridSpec {
    pub fn disk(n_rings: usize, n_theta: usize) -> Self {
        GridSpec::Disk {
            n_rings,
            n_theta,
            radius: 1.0,
        }
    }

    /// Short label such as `500` or `11x30`.
    pub fn label(&self) -> String {
        match self {
            GridSpec::Line { n } => n.to_string(),
            GridSpec::Disk {
                n_rings, n_theta, ..
            } => format!("{n_rings}x{n_theta}"),
        }
    }

    /// Builds the disk grid, validating the ring and angle counts.
    pub fn disk_grid(&self) -> Result<DiskGrid> {
        match *self {
            GridSpec::Disk {
                n_rings,
                n_theta,
                radius,
            } => {
                if n_rings < 2 {
                    return Err(Error::InvalidGrid(format!(
                        "nr-half must be at least 2, got {n_rings}"
                    )));
                }
                disk_grid(2 * n_rings - 1, n_theta, radius)
            }
            GridSpec::Line { .. } => {
                Err(Error::InvalidGrid("expected disk grid parameters".into()))
            }
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Whether a problem lives on an interval or on the disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimensionality {
    Line,
    Disk,
}

/// A grid from the literature together with the maximum error reported there.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRun {
    pub grid: GridSpec,
    pub reported_max_error: f64,
    pub reported_two_norm_error: Option<f64>,
    pub note: &'static str,
}

type Builder = fn(&GridSpec) -> Result<ProblemDefinition>;

/// A registered problem.
#[derive(Clone)]
pub struct NamedProblem {
    pub id: &'static str,
    pub description: &'static str,
    pub dimensionality: Dimensionality,
    pub default_grid: GridSpec,
    pub reference_runs: Vec<ReferenceRun>,
    pub exact: NodeFn,
    /// Remarks on how the stored form differs from the published statement.
    pub annotations: Vec<&'static str>,
    build: Builder,
}

impl fmt::Debug for NamedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NamedProblem")
            .field("id", &self.id)
            .field("dimensionality", &self.dimensionality)
            .field("default_grid", &self.default_grid)
            .finish_non_exhaustive()
    }
}

impl NamedProblem {
    /// The discrete problem on `grid`.
    pub fn build(&self, grid: &GridSpec) -> Result<ProblemDefinition> {
        match (self.dimensionality, grid) {
            (Dimensionality::Line, GridSpec::Line { .. })
            | (Dimensionality::Disk, GridSpec::Disk { .. }) => {
                Ok((self.build)(grid)?.with_exact(self.exact.clone()))
            }
            _ => Err(Error::InvalidGrid(format!(
                "problem {} needs {} grid parameters",
                self.id,
                match self.dimensionality {
                    Dimensionality::Line => "interval",
                    Dimensionality::Disk => "disk",
                }
            ))),
        }
    }

    pub fn exact_at(&self, node: Node) -> f64 {
        (self.exact)(node)
    }
}

fn line_x(node: Node) -> f64 {
    match node {
        Node::Line { x } => x,
        Node::Polar { .. } => f64::NAN,
    }
}

fn polar(node: Node) -> (f64, f64) {
    match node {
        Node::Polar { r, theta } => (r, theta),
        Node::Line { .. } => (f64::NAN, f64::NAN),
    }
}

fn line_n(grid: &GridSpec) -> usize {
    match grid {
        GridSpec::Line { n } => *n,
        GridSpec::Disk { .. } => 0,
    }
}

const EX1_P: f64 = 1e-3;

fn ex1_exact(x: f64) -> f64 {
    let p = EX1_P;
    let s = 2.0 * x - 1.0;
    s / (p + s * s).sqrt() - (2.0 * (p + 1.0).sqrt() + p + 1.0) * s / (2.0 * (p + 1.0)) + 0.5
}

fn build_ex1(grid: &GridSpec) -> Result<ProblemDefinition> {
    let g = cgl_grid(line_n(grid), 0.0, 1.0)?;
    let op = dirichlet_op(&g, 1.0, 0.0)?;
    let reaction = Reaction::Linear {
        coeff: Arc::new(|_| 0.0),
        source: Arc::new(|n| {
            let s = 2.0 * line_x(n) - 1.0;
            12.0 * EX1_P * s / (EX1_P + s * s).powf(2.5)
        }),
    };
    Ok(ProblemDefinition::new(Operator::Line(op), 2, reaction))
}

fn build_ex2(grid: &GridSpec) -> Result<ProblemDefinition> {
    let g = cgl_grid(line_n(grid), 0.0, 1.0)?;
    let op = neumann_op(&g, 1.0, 0.5)?;
    let reaction = Reaction::Nonlinear {
        value: Arc::new(|_, u| (-2.0 * u).exp()),
        derivative: Arc::new(|_, u| -2.0 * (-2.0 * u).exp()),
    };
    Ok(ProblemDefinition::new(Operator::Line(op), 2, reaction))
}

fn build_ex3(grid: &GridSpec) -> Result<ProblemDefinition> {
    let g = cgl_grid(line_n(grid), 0.0, 2.0 * PI)?;
    let op = robin_op(&g, 1.0, 1.0, 2.0, 0.0)?;
    let reaction = Reaction::Linear {
        coeff: Arc::new(|_| 0.0),
        source: Arc::new(|n| {
            let x = line_x(n);
            (-x).exp() * (15.0 * (4.0 * x).cos() - 8.0 * (4.0 * x).sin())
        }),
    };
    Ok(ProblemDefinition::new(Operator::Line(op), 2, reaction))
}

const EX4_EPS: f64 = 0.005;

fn ex4_exact(x: f64) -> f64 {
    let k = (1.0 / EX4_EPS).powf(0.25);
    let num = k.sinh() * (k * x).cos() + k.sin() * (k * x).cosh();
    let den = k.cosh() * k.sin() + k.cos() * k.sinh();
    10.0 * num / den - 10.0
}

fn build_ex4(grid: &GridSpec) -> Result<ProblemDefinition> {
    let g = cgl_grid(line_n(grid), -1.0, 1.0)?;
    let op = biharmonic_op(&g, 0.0, 0.0, 0.0, 0.0)?;
    let reaction = Reaction::Linear {
        coeff: Arc::new(|_| -1.0 / EX4_EPS),
        source: Arc::new(|_| -10.0 / EX4_EPS),
    };
    Ok(ProblemDefinition::new(Operator::Line(op), 4, reaction))
}

fn build_ex5(grid: &GridSpec) -> Result<ProblemDefinition> {
    let g = grid.disk_grid()?;
    let f = g.sample_boundary(|t| t.sin().powi(3));
    let op = laplace_dirichlet_op(&g, &f)?;
    Ok(ProblemDefinition::new(
        Operator::Disk(op),
        1,
        Reaction::zero(),
    ))
}

fn build_ex6(grid: &GridSpec) -> Result<ProblemDefinition> {
    let g = grid.disk_grid()?;
    let radius = g.radius();
    let gdata = g.sample_boundary(|t| 3.0 * radius * radius * t.sin().powi(2));
    let op = laplace_neumann_op(&g, &gdata)?;
    let reaction = Reaction::Linear {
        coeff: Arc::new(|_| -1.0),
        source: Arc::new(|n| {
            let (r, t) = polar(n);
            let s2 = t.sin().powi(2);
            -(r * (2.0 + 5.0 * s2) - r.powi(3) * s2)
        }),
    };
    Ok(ProblemDefinition::new(Operator::Disk(op), 1, reaction))
}

fn build_ex7(grid: &GridSpec) -> Result<ProblemDefinition> {
    let g = grid.disk_grid()?;
    let nt = g.n_theta();
    let op = laplace_robin_op(&g, &vec![1.0; nt], &vec![1.0; nt], &vec![3.0; nt])?;
    let reaction = Reaction::Nonlinear {
        value: Arc::new(|_, u| 3.0 * u - u * u),
        derivative: Arc::new(|_, u| 3.0 - 2.0 * u),
    };
    Ok(ProblemDefinition::new(Operator::Disk(op), 1, reaction))
}

fn clamped_disk(
    grid: &GridSpec,
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
) -> Result<ProblemDefinition> {
    let dg = grid.disk_grid()?;
    let op = biharmonic_dirichlet_op(&dg, &dg.sample_boundary(f), &dg.sample_boundary(g))?;
    Ok(ProblemDefinition::new(
        Operator::Disk(op),
        2,
        Reaction::zero(),
    ))
}

fn build_ex8(grid: &GridSpec) -> Result<ProblemDefinition> {
    clamped_disk(grid, |_| -0.25, |t| -0.5 * (1.0 + t.cos()))
}

fn build_ex9(grid: &GridSpec) -> Result<ProblemDefinition> {
    clamped_disk(grid, |t| (2.0 * t).cos(), |_| 0.0)
}

fn build_ex10(grid: &GridSpec) -> Result<ProblemDefinition> {
    clamped_disk(grid, |t| (2.0 * t).cos(), |t| 4.0 * (2.0 * t).cos())
}

fn run(grid: GridSpec, err: f64, note: &'static str) -> ReferenceRun {
    ReferenceRun {
        grid,
        reported_max_error: err,
        reported_two_norm_error: None,
        note,
    }
}

const DISK_RUN: &str = "reported maximum error for this grid";

/// Every registered problem, in catalogue order.
pub fn all_problems() -> Vec<NamedProblem> {
    vec![
        NamedProblem {
            id: "ex1-dirichlet-1d",
            description: "u'' = -12p(2x-1)/(p+(2x-1)^2)^(5/2) on (0,1), u(0)=1, u(1)=0, p=1e-3",
            dimensionality: Dimensionality::Line,
            default_grid: GridSpec::Line { n: 500 },
            reference_runs: vec![ReferenceRun {
                grid: GridSpec::Line { n: 500 },
                reported_max_error: 5.64e-9,
                reported_two_norm_error: Some(1.66e-8),
                note: "reported maximum and two-norm errors",
            }],
            exact: Arc::new(|n| ex1_exact(line_x(n))),
            annotations: vec![
                "published exact solution lacks the constant 1/2 needed to meet u(0)=1, u(1)=0",
            ],
            build: build_ex1,
        },
        NamedProblem {
            id: "ex2-neumann-1d",
            description: "u'' = -exp(-2u) on (0,1), u'(0)=1, u'(1)=1/2",
            dimensionality: Dimensionality::Line,
            default_grid: GridSpec::Line { n: 20 },
            reference_runs: vec![run(GridSpec::Line { n: 20 }, 6.9056e-14, "reported maximum error, Newton tolerance 1e-8")],
            exact: Arc::new(|n| line_x(n).ln_1p()),
            annotations: vec![],
            build: build_ex2,
        },
        NamedProblem {
            id: "ex3-robin-1d",
            description: "-exp(x) u'' = 15cos(4x) - 8sin(4x) on (0,2pi), u(0)-u'(0)=2, u(2pi)+u'(2pi)=0",
            dimensionality: Dimensionality::Line,
            default_grid: GridSpec::Line { n: 200 },
            reference_runs: vec![run(GridSpec::Line { n: 200 }, 1.6388e-12, "reported maximum error")],
            exact: Arc::new(|n| {
                let x = line_x(n);
                (4.0 * x).cos() * (-x).exp()
            }),
            annotations: vec![],
            build: build_ex3,
        },
        NamedProblem {
            id: "ex4-biharmonic-1d",
            description: "0.005 u'''' - u = 10 on (-1,1), u(+-1)=0, u'(+-1)=0",
            dimensionality: Dimensionality::Line,
            default_grid: GridSpec::Line { n: 400 },
            reference_runs: vec![run(GridSpec::Line { n: 400 }, 1.7163e-7, "reported maximum error")],
            exact: Arc::new(|n| ex4_exact(line_x(n))),
            annotations: vec![
                "published exact solution uses wavenumber 50; the equation fixes it at 200^(1/4)",
            ],
            build: build_ex4,
        },
        NamedProblem {
            id: "ex5-dirichlet-disk",
            description: "Laplace equation on the unit disk, u(1,theta) = sin^3(theta)",
            dimensionality: Dimensionality::Disk,
            default_grid: GridSpec::disk(11, 30),
            reference_runs: vec![
                run(GridSpec::disk(11, 30), 4.5242e-15, DISK_RUN),
                run(GridSpec::disk(28, 60), 2.6887e-14, DISK_RUN),
                run(GridSpec::disk(51, 40), 1.7447e-13, DISK_RUN),
                run(GridSpec::disk(51, 60), 5.9730e-14, DISK_RUN),
                run(GridSpec::disk(101, 100), 6.6391e-14, DISK_RUN),
            ],
            exact: Arc::new(|n| {
                let (r, t) = polar(n);
                0.75 * r * t.sin() - 0.25 * r.powi(3) * (3.0 * t).sin()
            }),
            annotations: vec![
                "published exact solution reads 0.75 - 0.25 r^3 sin(3 theta); the harmonic extension of sin^3 is used",
            ],
            build: build_ex5,
        },
        NamedProblem {
            id: "ex6-neumann-disk",
            description: "Laplacian(u) - u = r(2+5sin^2) - r^3 sin^2 on the unit disk, u_r(1,theta) = 3sin^2(theta)",
            dimensionality: Dimensionality::Disk,
            default_grid: GridSpec::disk(31, 50),
            reference_runs: vec![
                run(GridSpec::disk(31, 50), 2.4389e-4, DISK_RUN),
                run(GridSpec::disk(51, 40), 9.5423e-5, DISK_RUN),
                run(GridSpec::disk(101, 40), 2.5333e-5, DISK_RUN),
                run(GridSpec::disk(151, 40), 1.1491e-5, DISK_RUN),
            ],
            exact: Arc::new(|n| {
                let (r, t) = polar(n);
                r.powi(3) * t.sin().powi(2)
            }),
            annotations: vec![],
            build: build_ex6,
        },
        NamedProblem {
            id: "ex7-fisher-disk",
            description: "-Laplacian(u) = 3u - u^2 on the unit disk, u + u_r = 3 on the boundary",
            dimensionality: Dimensionality::Disk,
            default_grid: GridSpec::disk(11, 40),
            reference_runs: vec![
                run(GridSpec::disk(11, 40), 2.9168e-12, DISK_RUN),
                run(GridSpec::disk(31, 50), 4.2902e-11, DISK_RUN),
                run(GridSpec::disk(31, 100), 1.1023e-10, DISK_RUN),
                run(GridSpec::disk(101, 30), 1.1723e-9, DISK_RUN),
                run(GridSpec::disk(101, 50), 1.7640e-9, DISK_RUN),
            ],
            exact: Arc::new(|_| 3.0),
            annotations: vec![],
            build: build_ex7,
        },
        NamedProblem {
            id: "ex8-biharmonic-disk",
            description: "biharmonic equation on the unit disk, u = -0.25, u_r = -0.5(1+cos(theta)) on the boundary",
            dimensionality: Dimensionality::Disk,
            default_grid: GridSpec::disk(62, 40),
            reference_runs: vec![run(GridSpec::disk(62, 40), 8.1766e-4, DISK_RUN)],
            exact: Arc::new(|n| {
                let (r, t) = polar(n);
                0.25 * (1.0 - r * r) * (1.0 + r * t.cos()) - 0.25
            }),
            annotations: vec![],
            build: build_ex8,
        },
        NamedProblem {
            id: "ex9-biharmonic-disk",
            description: "biharmonic equation on the unit disk, u = cos(2 theta), u_r = 0 on the boundary",
            dimensionality: Dimensionality::Disk,
            default_grid: GridSpec::disk(48, 40),
            reference_runs: vec![run(GridSpec::disk(48, 40), 1.9727e-4, DISK_RUN)],
            exact: Arc::new(|n| {
                let (r, t) = polar(n);
                (2.0 * r * r - r.powi(4)) * (2.0 * t).cos()
            }),
            annotations: vec![],
            build: build_ex9,
        },
        NamedProblem {
            id: "ex10-biharmonic-disk",
            description: "biharmonic equation on the unit disk, u = cos(2 theta), u_r = 4cos(2 theta) on the boundary",
            dimensionality: Dimensionality::Disk,
            default_grid: GridSpec::disk(33, 60),
            reference_runs: vec![run(GridSpec::disk(33, 60), 4.9969e-5, DISK_RUN)],
            exact: Arc::new(|n| {
                let (r, t) = polar(n);
                r.powi(4) * (2.0 * t).cos()
            }),
            annotations: vec![
                "published forcing 45cos(theta) is inconsistent with the exact solution; zero forcing is used",
            ],
            build: build_ex10,
        },
    ]
}

/// Identifiers of every registered problem.
pub fn problem_ids() -> Vec<&'static str> {
    all_problems().into_iter().map(|p| p.id).collect()
}

/// Looks up a problem by identifier.
pub fn get_problem(id: &str) -> Result<NamedProblem> {
    all_problems()
        .into_iter()
        .find(|p| p.id == id)
        .ok_or_else(|| Error::UnknownProblem {
            id: id.to_string(),
            available: problem_ids().into_iter().map(String::from).collect(),
        })
}

/// Errors of a computed solution against the exact one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    /// Largest absolute error over all collocation nodes.
    pub max_error: f64,
    /// Root-mean-square error over all collocation nodes.
    pub two_norm_error: f64,
    /// Largest absolute error of the interpolant on a refined grid, if requested.
    pub refined_max_error: Option<f64>,
    pub node_count: usize,
}

/// Points of a `k x k` refined grid: uniform in `x` on a line (`k^2`
/// points), uniform in `r` and `theta` on the disk.
pub fn refined_points(disc: &Discretization, k: usize) -> Vec<Node> {
    let k = k.max(2);
    match disc {
        Discretization::Line(g) => {
            let m = k * k;
            (0..m)
                .map(|i| {
                    let t = i as f64 / (m - 1) as f64;
                    let x = if i == m - 1 {
                        g.b()
                    } else {
                        g.a() + t * (g.b() - g.a())
                    };
                    Node::Line { x }
                })
                .collect()
        }
        Discretization::Disk(g) => (0..k)
            .flat_map(|i| {
                let r = g.radius() * i as f64 / (k - 1) as f64;
                (0..k).map(move |j| Node::Polar {
                    r,
                    theta: 2.0 * PI * j as f64 / k as f64,
                })
            })
            .collect(),
    }
}

/// Evaluates the interpolant of `full` at `node`.
pub fn interpolate(disc: &Discretization, full: &[f64], node: Node) -> Result<f64> {
    match (disc, node) {
        (Discretization::Line(g), Node::Line { x }) => lagrange_eval(g, full, x),
        (Discretization::Disk(g), Node::Polar { r, theta }) => {
            disk_interpolant_eval(g, full, r, theta)
        }
        _ => Err(Error::InvalidGrid(
            "node does not belong to this discretization".into(),
        )),
    }
}

/// Max-abs and RMS errors of `full` (values at `disc.nodes()`) against `exact`.
pub fn nodal_errors(
    disc: &Discretization,
    full: &[f64],
    exact: &dyn Fn(Node) -> f64,
) -> (f64, f64) {
    let nodes = disc.nodes();
    let mut max = 0.0f64;
    let mut sq = 0.0;
    for (&node, &v) in nodes.iter().zip(full) {
        let e = (v - exact(node)).abs();
        max = max.max(e);
        sq += e * e;
    }
    (max, (sq / nodes.len() as f64).sqrt())
}

/// Compares a solve against the problem's exact solution.
pub fn error_report(
    problem: &NamedProblem,
    report: &SolveReport,
    eval_grid: Option<usize>,
) -> Result<ErrorSummary> {
    let exact = problem.exact.as_ref();
    let (max_error, two_norm_error) = nodal_errors(&report.discretization, &report.full, exact);
    let refined_max_error = match eval_grid {
        None => None,
        Some(k) => {
            let mut worst = 0.0f64;
            for node in refined_points(&report.discretization, k) {
                let v = interpolate(&report.discretization, &report.full, node)?;
                worst = worst.max((v - exact(node)).abs());
            }
            Some(worst)
        }
    };
    Ok(ErrorSummary {
        max_error,
        two_norm_error,
        refined_max_error,
        node_count: report.full.len(),
    })
}

/// Like [`error_report`] for a problem definition that may lack an exact solution.
pub fn definition_error_report(
    problem: &ProblemDefinition,
    report: &SolveReport,
) -> Result<ErrorSummary> {
    let exact = problem
        .exact
        .as_ref()
        .ok_or_else(|| Error::NoExactSolution("problem definition".into()))?;
    let (max_error, two_norm_error) =
        nodal_errors(&report.discretization, &report.full, exact.as_ref());
    Ok(ErrorSummary {
        max_error,
        two_norm_error,
        refined_max_error: None,
        node_count: report.full.len(),
    })
}
