use chebdisk::{
    boundary_op, cgl_grid, cheb_diff_matrix, recover_boundary, robin_op, BoundarySpec1D, Error,
    Grid1D,
};
use proptest::prelude::*;

struct Poly(Vec<f64>);

impl Poly {
    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn deriv(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    fn nth(&self, m: usize) -> Poly {
        (0..m).fold(Poly(self.0.clone()), |p, _| p.deriv())
    }
}

fn spec_from(kind: usize, p: &Poly, a: f64, b: f64, robin: (f64, f64)) -> BoundarySpec1D {
    let dp = p.deriv();
    match kind {
        0 => BoundarySpec1D::Dirichlet {
            alpha: p.eval(a),
            beta: p.eval(b),
        },
        1 => BoundarySpec1D::Neumann {
            alpha: dp.eval(a),
            beta: dp.eval(b),
        },
        2 => {
            let (al, be) = robin;
            BoundarySpec1D::Robin {
                alpha: al,
                beta: be,
                g1: al * p.eval(a) - be * dp.eval(a),
                g2: al * p.eval(b) + be * dp.eval(b),
            }
        }
        _ => BoundarySpec1D::Clamped {
            alpha1: p.eval(a),
            beta1: p.eval(b),
            alpha2: dp.eval(a),
            beta2: dp.eval(b),
        },
    }
}

fn check_exact(grid: &Grid1D, p: &Poly, spec: BoundarySpec1D) -> Result<(), TestCaseError> {
    let op = boundary_op(grid, spec).unwrap();
    let u: Vec<f64> = op.unknown_nodes().iter().map(|&x| p.eval(x)).collect();
    let got = op.apply(&u).unwrap();
    let order = spec.order();
    let dp = p.nth(order);
    let scale = grid
        .nodes()
        .iter()
        .map(|&x| dp.eval(x).abs())
        .fold(1.0, f64::max)
        * (grid.n_panels() as f64).powi(2 * order as i32);
    for (v, &x) in got.iter().zip(op.unknown_nodes().iter()) {
        prop_assert!(
            (v - dp.eval(x)).abs() <= 1e-11 * scale,
            "{}: {} vs {}",
            spec.name(),
            v,
            dp.eval(x)
        );
    }
    let full = op.full_solution(&u).unwrap();
    let pscale = grid
        .nodes()
        .iter()
        .map(|&x| p.eval(x).abs())
        .fold(1.0, f64::max);
    for (v, &x) in full.iter().zip(grid.nodes()) {
        prop_assert!((v - p.eval(x)).abs() <= 1e-9 * pscale * grid.n_panels() as f64);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn second_order_operators_are_exact_on_polynomials(
        n in 2usize..24,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..24),
        a in -2.0f64..1.0,
        len in 0.5f64..3.0,
        kind in 0usize..3,
        al in 0.1f64..3.0,
        be in 0.1f64..3.0,
    ) {
        let b = a + len;
        let grid = cgl_grid(n, a, b).unwrap();
        let p = Poly(coeffs.into_iter().take(n + 1).collect());
        check_exact(&grid, &p, spec_from(kind, &p, a, b, (al, be)))?;
    }

    #[test]
    fn clamped_operator_is_exact_on_polynomials(
        n in 4usize..20,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..20),
        a in -1.0f64..1.0,
        len in 0.5f64..2.5,
    ) {
        let b = a + len;
        let grid = cgl_grid(n, a, b).unwrap();
        let p = Poly(coeffs.into_iter().take(n + 1).collect());
        check_exact(&grid, &p, spec_from(3, &p, a, b, (1.0, 1.0)))?;
    }

    #[test]
    fn operator_is_affine_in_unknowns(
        n in 4usize..20,
        kind in 0usize..4,
        s in -3.0f64..3.0,
        seed in 0u64..1000,
    ) {
        let grid = cgl_grid(n, 0.0, 2.0).unwrap();
        let p = Poly(vec![0.3, -1.0, 0.5]);
        let op = boundary_op(&grid, spec_from(kind, &p, 0.0, 2.0, (1.0, 0.5))).unwrap();
        let m = op.size();
        let u: Vec<f64> = (0..m).map(|i| ((i as u64 * 31 + seed) as f64).sin()).collect();
        let v: Vec<f64> = (0..m).map(|i| ((i as u64 * 17 + seed) as f64).cos()).collect();
        let w: Vec<f64> = u.iter().zip(&v).map(|(x, y)| x + s * y).collect();
        let zero = op.apply(&vec![0.0; m]).unwrap();
        let tu = op.apply(&u).unwrap();
        let tv = op.apply(&v).unwrap();
        let tw = op.apply(&w).unwrap();
        let scale = op.matrix().norm_max() * m as f64;
        for i in 0..m {
            let lin = tu[i] - zero[i] + s * (tv[i] - zero[i]) + zero[i];
            prop_assert!((tw[i] - lin).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn unknown_counts() {
    let g = cgl_grid(10, -1.0, 1.0).unwrap();
    let cases = [
        (
            BoundarySpec1D::Dirichlet {
                alpha: 0.0,
                beta: 0.0,
            },
            9,
        ),
        (
            BoundarySpec1D::Neumann {
                alpha: 0.0,
                beta: 0.0,
            },
            9,
        ),
        (
            BoundarySpec1D::Robin {
                alpha: 1.0,
                beta: 1.0,
                g1: 0.0,
                g2: 0.0,
            },
            9,
        ),
        (
            BoundarySpec1D::Clamped {
                alpha1: 0.0,
                beta1: 0.0,
                alpha2: 0.0,
                beta2: 0.0,
            },
            7,
        ),
    ];
    for (spec, m) in cases {
        let op = boundary_op(&g, spec).unwrap();
        assert_eq!(op.size(), m, "{}", spec.name());
        assert_eq!(op.matrix().nrows(), m);
        assert_eq!(op.matrix().ncols(), m);
    }
}

#[test]
fn dirichlet_recovery_is_the_data() {
    let g = cgl_grid(6, 0.0, 1.0).unwrap();
    let op = boundary_op(
        &g,
        BoundarySpec1D::Dirichlet {
            alpha: 2.0,
            beta: -1.0,
        },
    )
    .unwrap();
    let u = vec![0.5; op.size()];
    let e = recover_boundary(&op, &u).unwrap();
    assert_eq!(e, vec![-1.0, 2.0]);
    assert!(op.elimination_determinant().is_none());
}

#[test]
fn neumann_recovers_square() {
    let g = cgl_grid(8, -1.0, 1.0).unwrap();
    let op = boundary_op(
        &g,
        BoundarySpec1D::Neumann {
            alpha: -2.0,
            beta: 2.0,
        },
    )
    .unwrap();
    let u: Vec<f64> = op.unknown_nodes().iter().map(|x| x * x).collect();
    let e = recover_boundary(&op, &u).unwrap();
    assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
}

#[test]
fn laplacian_of_square_is_two() {
    let g = cgl_grid(8, -1.0, 1.0).unwrap();
    let op = boundary_op(
        &g,
        BoundarySpec1D::Dirichlet {
            alpha: 1.0,
            beta: 1.0,
        },
    )
    .unwrap();
    let u: Vec<f64> = op.unknown_nodes().iter().map(|x| x * x).collect();
    for v in op.apply(&u).unwrap() {
        assert!((v - 2.0).abs() < 1e-10);
    }
}

#[test]
fn robin_sign_condition() {
    let g = cgl_grid(6, 0.0, 1.0).unwrap();
    assert!(matches!(
        robin_op(&g, 1.0, -1.0, 0.0, 0.0),
        Err(Error::InvalidRobin { .. })
    ));
    assert!(matches!(
        robin_op(&g, 0.0, 1.0, 0.0, 0.0),
        Err(Error::InvalidRobin { .. })
    ));
    assert!(robin_op(&g, -1.0, -2.0, 0.0, 0.0).is_ok());
}

#[test]
fn clamped_needs_four_panels() {
    let g = cgl_grid(3, 0.0, 1.0).unwrap();
    let spec = BoundarySpec1D::Clamped {
        alpha1: 0.0,
        beta1: 0.0,
        alpha2: 0.0,
        beta2: 0.0,
    };
    assert!(matches!(boundary_op(&g, spec), Err(Error::InvalidGrid(_))));
}

#[test]
fn robin_reduces_toward_dirichlet() {
    let g = cgl_grid(12, -1.0, 1.0).unwrap();
    let d2 = cheb_diff_matrix(&g, 2).unwrap();
    let dir = boundary_op(
        &g,
        BoundarySpec1D::Dirichlet {
            alpha: 0.0,
            beta: 0.0,
        },
    )
    .unwrap();
    let rob = robin_op(&g, 1.0, 1e-10, 0.0, 0.0).unwrap();
    let diff = (dir.matrix() - rob.matrix()).norm_max();
    assert!(diff <= 1e-6 * d2.entries().norm_max(), "{diff}");
}
