use heinz_core::functionals::{check_jensen_bounds, ConvexFn, Evaluator, JensenParams};
use heinz_core::linalg::{
    is_psd, matrix_power, random_gaussian, random_orthogonal, random_spd, svd, sym_eig, Matrix,
};
use heinz_core::means::{
    heinz_scalar, heron_scalar, kantorovich_factor, loewner_matrix, MeanTriple,
};
use heinz_core::norms::{singular_values, ui_norm, NormKind};
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, rel: f64, scale: f64) -> bool {
    (a - b).abs() <= rel * scale.max(f64::MIN_POSITIVE)
}

fn cofactor_det(m: &Matrix) -> f64 {
    let n = m.rows();
    if n == 1 {
        return m[(0, 0)];
    }
    (0..n)
        .map(|j| {
            let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })]
            });
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[(0, j)] * cofactor_det(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(n in 1usize..=8, seed in any::<u64>()) {
        let g = random_gaussian(n, n, seed);
        let a = g.add(&g.transpose()).unwrap();
        let e = sym_eig(&a).unwrap();
        let err = e.reconstruct().sub(&a).unwrap().frobenius_norm();
        prop_assert!(err <= 1e-12 * a.frobenius_norm().max(1.0));
        let vtv = e.vectors.transpose().matmul(&e.vectors).unwrap();
        prop_assert!(vtv.sub(&Matrix::identity(n)).unwrap().max_abs() < 1e-12);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn svd_matches_gram_eigenvalues(rows in 1usize..=6, cols in 1usize..=6, seed in any::<u64>()) {
        let x = random_gaussian(rows, cols, seed);
        let s = svd(&x).unwrap();
        prop_assert!(s.reconstruct().sub(&x).unwrap().frobenius_norm() <= 1e-12 * x.frobenius_norm());
        let gram = if rows >= cols { x.transpose().matmul(&x) } else { x.matmul(&x.transpose()) }.unwrap();
        let mut oracle: Vec<f64> = sym_eig(&gram).unwrap().eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        oracle.reverse();
        for (got, want) in s.values.iter().zip(&oracle) {
            prop_assert!(rel_close(*got, *want, 1e-9, s.values[0]));
        }
    }

    #[test]
    fn determinant_matches_cofactors(n in 1usize..=4, seed in any::<u64>()) {
        let m = random_gaussian(n, n, seed);
        let det = m.determinant().unwrap();
        let oracle = cofactor_det(&m);
        let scale = (0..n).map(|i| m.row(i).iter().map(|v| v * v).sum::<f64>().sqrt()).product::<f64>();
        prop_assert!(rel_close(det, oracle, 1e-10, scale));
    }

    #[test]
    fn power_laws(n in 1usize..=6, seed in any::<u64>(), s in -1.5f64..1.5, t in -1.5f64..1.5) {
        let a = random_spd(n, 0.2, 5.0, seed).unwrap();
        let lhs = matrix_power(&a, s).unwrap().matmul(&matrix_power(&a, t).unwrap()).unwrap();
        let rhs = matrix_power(&a, s + t).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-10 * rhs.max_abs().max(1.0));
        let root = matrix_power(&a, 0.5).unwrap();
        prop_assert!(root.matmul(&root).unwrap().sub(&a).unwrap().max_abs() <= 1e-11 * a.max_abs());
    }

    #[test]
    fn norms_are_unitarily_invariant(n in 2usize..=6, seed in any::<u64>()) {
        let x = random_gaussian(n, n, seed);
        let q = random_orthogonal(n, seed ^ 0x5555);
        let r = random_orthogonal(n, seed ^ 0xaaaa);
        let y = q.matmul(&x).unwrap().matmul(&r).unwrap();
        for kind in NormKind::TEST_SET {
            let a = ui_norm(&x, kind).unwrap();
            prop_assert!(rel_close(a, ui_norm(&y, kind).unwrap(), 1e-9, a));
        }
    }

    #[test]
    fn norm_axioms(n in 2usize..=6, seed in any::<u64>(), c in -3.0f64..3.0) {
        let x = random_gaussian(n, n, seed);
        let y = random_gaussian(n, n, seed.wrapping_add(1));
        for kind in NormKind::TEST_SET {
            let (nx, ny) = (ui_norm(&x, kind).unwrap(), ui_norm(&y, kind).unwrap());
            prop_assert!(ui_norm(&x.add(&y).unwrap(), kind).unwrap() <= nx + ny + 1e-12 * (nx + ny));
            prop_assert!(rel_close(ui_norm(&x.scale(c), kind).unwrap(), c.abs() * nx, 1e-12, nx));
            let op = ui_norm(&x, NormKind::Operator).unwrap();
            prop_assert!(op <= nx * (1.0 + 1e-12));
        }
        prop_assert!(singular_values(&x).unwrap().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn scalar_mean_chains(a in 1e-3f64..1e3, b in 1e-3f64..1e3, nu in 0.0f64..=1.0) {
        let slack = 1e-12 * (a + b);
        let (g, m) = ((a * b).sqrt(), (a + b) / 2.0);
        let h = heinz_scalar(a, b, nu).unwrap();
        let f = heron_scalar(a, b, nu).unwrap();
        prop_assert!(g <= f + slack && f <= m + slack);
        prop_assert!(g <= h + slack && h <= m + slack);
        prop_assert!(h <= heron_scalar(a, b, (2.0 * nu - 1.0).powi(2)).unwrap() + slack);
        prop_assert!(h <= kantorovich_factor(a, b).unwrap().powf(1.0 - nu) * f + slack);
    }

    #[test]
    fn loewner_is_psd(len in 1usize..=6, seed in any::<u64>(), r in 0.0f64..=1.0) {
        let mu = random_gaussian(1, len, seed).as_slice().iter().map(|g| 0.05 + g.abs() * 3.0).collect::<Vec<_>>();
        prop_assert!(is_psd(&loewner_matrix(&mu, r).unwrap(), 1e-10).unwrap());
    }

    #[test]
    fn functionals_symmetric_and_minimal_at_half(n in 1usize..=5, seed in any::<u64>(), nu in 0.0f64..=1.0) {
        let t = MeanTriple::random(n, 0.1, 10.0, seed).unwrap();
        let ev = Evaluator::new(&t);
        for kind in NormKind::TEST_SET.map(|k| k.restricted_to(n)) {
            let (f, fm) = (ev.f(kind, nu).unwrap(), ev.f(kind, 1.0 - nu).unwrap());
            prop_assert!(rel_close(f, fm, 1e-10, f.max(1.0)));
            let tau = 1e-8 * f.max(1.0);
            prop_assert!(ev.f(kind, 0.5).unwrap() <= f + tau);
            let k = ev.k(kind, nu).unwrap();
            prop_assert!(rel_close(k, ev.k(kind, 1.0 - nu).unwrap(), 1e-10, k.max(1.0)));
            let p = ev.phi(kind, nu, 1.5).unwrap();
            prop_assert!(ev.phi(kind, 0.5, 1.5).unwrap() <= p + 1e-8 * p.max(1.0));
        }
    }

    #[test]
    fn jensen_bounds_for_shipped_functions(lambda in 0.0f64..=1.0, x1 in -3.0f64..3.0, x2 in -3.0f64..3.0) {
        let p = JensenParams::new(lambda, x1, x2).unwrap();
        for f in [ConvexFn::Square, ConvexFn::Abs, ConvexFn::Exp] {
            prop_assert!(check_jensen_bounds(&f, &p).unwrap().passed);
        }
    }
}
