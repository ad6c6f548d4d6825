use std::f64::consts::PI;

use chebdisk::{dirichlet_kernel, dirichlet_kernel_derivative, fourier_diff_matrix, AngularGrid};
use proptest::prelude::*;

/// `S_N` as the truncated cosine series, differentiated term by term.
fn series_derivative(n: usize, theta: f64, m: u32) -> f64 {
    let half = n / 2;
    let d = |k: usize| {
        let k = k as f64;
        k.powi(m as i32) * (k * theta + m as f64 * PI / 2.0).cos()
    };
    let mut s = if m == 0 { 1.0 } else { 0.0 };
    for k in 1..half {
        s += 2.0 * d(k);
    }
    (s + d(half)) / n as f64
}

/// Fourth-order central difference with step `h`.
fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

#[test]
fn kernel_matches_series() {
    for n in [4usize, 6, 8, 16, 30] {
        for i in 0..97 {
            let t = -3.0 + i as f64 * 0.0631;
            let got = dirichlet_kernel(n, t).unwrap();
            assert!(
                (got - series_derivative(n, t, 0)).abs() < 1e-12,
                "n={n} t={t}"
            );
        }
    }
}

/// Each derivative is checked against a finite difference of the previous
/// one with step 1e-4; differencing the kernel itself four times is below
/// double precision at that step.
#[test]
fn derivatives_match_finite_differences() {
    let h = 1e-4;
    for n in [4usize, 8, 12, 20] {
        for i in 0..41 {
            let t = -3.0 + i as f64 * 0.1473;
            for m in 1..=4usize {
                let prev = |x: f64| dirichlet_kernel_derivative(n, x, m - 1).unwrap();
                let fd = central(prev, t, h);
                let got = dirichlet_kernel_derivative(n, t, m).unwrap();
                let scale = got.abs().max((n as f64).powi(m as i32) * 1e-3);
                assert!(
                    (got - fd).abs() <= 1e-6 * scale,
                    "n={n} m={m} t={t}: {got} vs {fd}"
                );
            }
        }
    }
}

#[test]
fn matrix_entries_match_series() {
    for n in [4usize, 6, 10, 24, 64] {
        let g = AngularGrid::new(n).unwrap();
        for m in 1..=4usize {
            let d = fourier_diff_matrix(&g, m).unwrap();
            let scale = (n as f64).powi(m as i32);
            for k in 0..n {
                let want = series_derivative(n, g.angles()[k] - g.angles()[0], m as u32);
                assert!(
                    (d.get(k, 0) - want).abs() <= 1e-10 * scale,
                    "n={n} m={m} k={k}: {} vs {want}",
                    d.get(k, 0)
                );
            }
        }
    }
}

#[test]
fn diagonal_limits() {
    for n in [4usize, 8, 14, 50] {
        let g = AngularGrid::new(n).unwrap();
        let nf = n as f64;
        let d2 = fourier_diff_matrix(&g, 2).unwrap();
        let d4 = fourier_diff_matrix(&g, 4).unwrap();
        assert!((d2.get(0, 0) - series_derivative(n, 0.0, 2)).abs() < 1e-10 * nf * nf);
        assert!((d2.get(0, 0) + nf * nf / 12.0 + 1.0 / 6.0).abs() < 1e-12 * nf * nf);
        assert!((d4.get(0, 0) - series_derivative(n, 0.0, 4)).abs() < 1e-10 * nf.powi(4));
        assert_eq!(fourier_diff_matrix(&g, 1).unwrap().get(0, 0), 0.0);
        assert_eq!(fourier_diff_matrix(&g, 3).unwrap().get(0, 0), 0.0);
    }
}

#[test]
fn squares_differ_from_higher_orders() {
    let g = AngularGrid::new(4).unwrap();
    let d1 = fourier_diff_matrix(&g, 1).unwrap();
    let d2 = fourier_diff_matrix(&g, 2).unwrap();
    let sq = d1.entries() * d1.entries();
    assert!((d2.entries() - &sq).norm_max() > 0.0);
}

proptest! {
    #[test]
    fn trig_exactness(half in 2usize..20, m in 1usize..5, k_frac in 0.0f64..1.0, sine in any::<bool>()) {
        let n = 2 * half;
        let k = ((half - 1) as f64 * k_frac).round();
        let g = AngularGrid::new(n).unwrap();
        let d = fourier_diff_matrix(&g, m).unwrap();
        let shift = if sine { -PI / 2.0 } else { 0.0 };
        let got = d.apply(&g.sample(|t| (k * t + shift).cos()));
        let tol = 1e-9 * (n as f64).powi(m as i32);
        for (v, &t) in got.iter().zip(g.angles()) {
            let want = k.powi(m as i32) * (k * t + shift + m as f64 * PI / 2.0).cos();
            prop_assert!((v - want).abs() <= tol);
        }
    }

    #[test]
    fn circulant_parity_and_row_sums(half in 2usize..30, m in 1usize..5) {
        let n = 2 * half;
        let g = AngularGrid::new(n).unwrap();
        let d = fourier_diff_matrix(&g, m).unwrap();
        let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
        for k in 0..n {
            let mut s = 0.0;
            for l in 0..n {
                prop_assert_eq!(d.get(k, l), d.get((k + 1) % n, (l + 1) % n));
                prop_assert_eq!(d.get(k, l), sign * d.get(l, k));
                s += d.get(k, l);
            }
            prop_assert!(s.abs() <= 1e-10 * (n as f64).powi(m as i32));
        }
    }

    #[test]
    fn kernel_vanishes_at_other_nodes(half in 2usize..40, d in 1usize..80) {
        let n = 2 * half;
        let d = d % n;
        prop_assume!(d != 0);
        let t = 2.0 * PI * d as f64 / n as f64;
        prop_assert!(dirichlet_kernel(n, t).unwrap().abs() < 1e-14);
    }
}
