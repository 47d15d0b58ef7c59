use pcamean::estimators::{
    multiple_correlation_sq, theoretical_mse, tpca_components, tstar_components,
};
use pcamean::pca::{fit_pca, symmetric_eigen2};
use pcamean::population::summarize;
use pcamean::{moments, theta, EstimatorKind, FinitePopulation, PsiChoice, PsiConfig};
use proptest::prelude::*;

fn column(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, len)
}

/// Three columns with positive means and non-degenerate spread.
fn population() -> impl Strategy<Value = FinitePopulation> {
    (8usize..40)
        .prop_flat_map(|n| (column(n), column(n), column(n), column(n)))
        .prop_filter_map("degenerate", |(a, b, c, d)| {
            let y: Vec<f64> = a.iter().zip(&d).map(|(a, d)| 200.0 + a + 0.5 * d).collect();
            let x: Vec<f64> = b.iter().zip(&d).map(|(b, d)| 150.0 + b + d).collect();
            let z: Vec<f64> = c.iter().zip(&d).map(|(c, d)| 120.0 + 0.3 * c + d).collect();
            let r = moments::correlation(&x, &z);
            if moments::std_dev(&x) < 1.0 || moments::std_dev(&z) < 1.0 || r.abs() > 0.999 {
                return None;
            }
            FinitePopulation::new(y, x, z).ok()?.with_fitted_component().ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_decreases_in_n(big_n in 2usize..500, a in 1usize..500, b in 1usize..500) {
        let (a, b) = (a.min(big_n), b.min(big_n));
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(theta(lo, big_n).unwrap() >= theta(hi, big_n).unwrap());
        prop_assert!(theta(hi, big_n).unwrap() >= 0.0);
    }

    #[test]
    fn moments_are_permutation_invariant(mut v in column(30), w in column(30), k in 0usize..30) {
        let m = moments::mean(&v);
        let s = moments::variance(&v);
        let c = moments::covariance(&v, &w);
        let mut w2 = w.clone();
        v.rotate_left(k);
        w2.rotate_left(k);
        prop_assert!((moments::mean(&v) - m).abs() < 1e-9);
        prop_assert!((moments::variance(&v) - s).abs() < 1e-9 * s.max(1.0));
        prop_assert!((moments::covariance(&v, &w2) - c).abs() < 1e-9 * c.abs().max(1.0));
    }

    #[test]
    fn summary_is_permutation_invariant(pop in population(), k in 0usize..8) {
        let mut cols = [pop.y().to_vec(), pop.x().to_vec(), pop.z().to_vec()];
        for c in &mut cols {
            c.rotate_left(k);
        }
        let [y, x, z] = cols;
        let rotated = FinitePopulation::new(y, x, z).unwrap().with_fitted_component().unwrap();
        let n = pop.len() / 2;
        let a = summarize(&pop, n).unwrap();
        let b = summarize(&rotated, n).unwrap();
        for (u, v) in [(a.s_y, b.s_y), (a.c_x, b.c_x), (a.rho_yx, b.rho_yx), (a.rho_xz, b.rho_xz)] {
            prop_assert!((u - v).abs() < 1e-10);
        }
        let (ca, cb) = (a.component.unwrap(), b.component.unwrap());
        prop_assert!((ca.rho_yw - cb.rho_yw).abs() < 1e-10);
    }

    #[test]
    fn optimal_constants_minimize(pop in population(), step in -5.0f64..5.0) {
        let s = summarize(&pop, pop.len() / 2).unwrap();
        let ts = tstar_components(&s, s.c_x, s.c_z).unwrap();
        let tol = 1e-9 * ts.mse_at(ts.k_opt).abs().max(1e-12);
        prop_assert!(ts.mse_at(ts.k_opt + step) >= ts.mse_at(ts.k_opt) - tol);
        prop_assert!((ts.min_mse() - ts.mse_at(ts.k_opt)).abs() <= 1e-9 * ts.a.abs());
        let tp = tpca_components(&s, s.component.unwrap().s_w).unwrap();
        prop_assert!(tp.mse_at(tp.alpha_opt + step) >= tp.mse_at(tp.alpha_opt) - 1e-9 * tp.a1);
    }

    #[test]
    fn tpca_minimum_ignores_psi(pop in population(), c in 0.1f64..100.0) {
        let s = summarize(&pop, pop.len() / 3).unwrap();
        let reference = theoretical_mse(
            EstimatorKind::TPca, &s, &PsiConfig::default().resolve(&s).unwrap()).unwrap();
        for w in [PsiChoice::StandardDeviation, PsiChoice::Kurtosis, PsiChoice::Constant(c)] {
            let psi = PsiConfig { w, ..PsiConfig::default() }.resolve(&s).unwrap();
            let v = theoretical_mse(EstimatorKind::TPca, &s, &psi).unwrap();
            prop_assert!(((v - reference) / reference).abs() < 1e-10);
        }
    }

    #[test]
    fn component_correlation_bounded_by_multiple_correlation(pop in population()) {
        let s = summarize(&pop, 4).unwrap();
        let r2 = multiple_correlation_sq(&s).unwrap();
        let rw = s.component.unwrap().rho_yw;
        prop_assert!(rw * rw <= r2 + 1e-10, "{} > {}", rw * rw, r2);
        let t5 = theoretical_mse(EstimatorKind::T5, &s, &PsiConfig::default().resolve(&s).unwrap()).unwrap();
        let pca = theoretical_mse(EstimatorKind::TPca, &s, &PsiConfig::default().resolve(&s).unwrap()).unwrap();
        prop_assert!(t5 <= pca * (1.0 + 1e-10));
    }

    #[test]
    fn eigen2_reconstructs(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0) {
        let e = symmetric_eigen2(a, b, c);
        prop_assert!(e.lambda1 >= e.lambda2);
        prop_assert!((e.lambda1 + e.lambda2 - (a + c)).abs() < 1e-9);
        prop_assert!((e.lambda1 * e.lambda2 - (a * c - b * b)).abs() < 1e-8);
        prop_assert!((e.v1[0] * e.v2[0] + e.v1[1] * e.v2[1]).abs() < 1e-12);
        for (l, v) in [(e.lambda1, e.v1), (e.lambda2, e.v2)] {
            prop_assert!((v[0].hypot(v[1]) - 1.0).abs() < 1e-12);
            prop_assert!((a * v[0] + b * v[1] - l * v[0]).abs() < 1e-8);
            prop_assert!((b * v[0] + c * v[1] - l * v[1]).abs() < 1e-8);
        }
    }

    #[test]
    fn pca_invariants(pop in population(), sx in 0.01f64..100.0, sz in 0.01f64..100.0, shift in -1e3f64..1e3) {
        let (x, z) = (pop.x(), pop.z());
        let m = fit_pca(x, z).unwrap();
        prop_assert!((m.lambda1 + m.lambda2 - 2.0).abs() < 1e-10);
        prop_assert!((m.lambda1 * m.lambda2 - (1.0 - m.rho * m.rho)).abs() < 1e-10);
        let w = m.scores(x, z);
        let w2 = m.second_scores(x, z);
        prop_assert!(moments::mean(&w).abs() < 1e-10);
        prop_assert!((moments::variance(&w) - m.lambda1).abs() < 1e-8);
        prop_assert!(moments::covariance(&w, &w2).abs() < 1e-10);
        for i in 0..x.len() {
            let (a, b) = m.reconstruct(w[i], w2[i]);
            let (u, v) = m.standardize(x[i], z[i]);
            prop_assert!((a - u).abs() < 1e-10 && (b - v).abs() < 1e-10);
        }
        let xs: Vec<f64> = x.iter().map(|v| sx * v + shift).collect();
        let zs: Vec<f64> = z.iter().map(|v| sz * v - shift).collect();
        let ws = fit_pca(&xs, &zs).unwrap().scores(&xs, &zs);
        for (a, b) in w.iter().zip(&ws) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }
}
