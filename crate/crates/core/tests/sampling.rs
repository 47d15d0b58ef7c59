use pcamean::population::{draw_srswor, sample_means, Sample, SrsworSampler};
use pcamean::{moments, theta, FinitePopulation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn six() -> FinitePopulation {
    FinitePopulation::new(
        vec![3.0, 5.0, 4.0, 8.0, 6.0, 10.0],
        vec![10.0, 14.0, 11.0, 20.0, 15.0, 26.0],
        vec![7.0, 6.0, 9.0, 12.0, 8.0, 14.0],
    )
    .unwrap()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

#[test]
fn enumeration_matches_variance_identity_for_every_n() {
    let pop = six();
    for n in 1..=6 {
        let all = subsets(6, n);
        let means: Vec<f64> = all
            .iter()
            .map(|s| sample_means(&Sample::from_indices(&pop, s.clone())).unwrap().y)
            .collect();
        let k = means.len() as f64;
        let e = means.iter().sum::<f64>() / k;
        let v = means.iter().map(|m| (m - e).powi(2)).sum::<f64>() / k;
        assert!((e - 6.0).abs() < 1e-12, "n={n}");
        let target = theta(n, 6).unwrap() * moments::variance(pop.y());
        assert!((v - target).abs() < 1e-12, "n={n}: {v} vs {target}");
    }
}

#[test]
fn enumeration_of_cross_moment() {
    // Cov(ybar, xbar) = theta * S_yx over all 15 samples of size 2.
    let pop = six();
    let all = subsets(6, 2);
    let pairs: Vec<(f64, f64)> = all
        .iter()
        .map(|s| {
            let m = sample_means(&Sample::from_indices(&pop, s.clone())).unwrap();
            (m.y, m.x)
        })
        .collect();
    let k = pairs.len() as f64;
    let (ey, ex) = (
        pairs.iter().map(|p| p.0).sum::<f64>() / k,
        pairs.iter().map(|p| p.1).sum::<f64>() / k,
    );
    let cov = pairs.iter().map(|p| (p.0 - ey) * (p.1 - ex)).sum::<f64>() / k;
    assert!((cov - theta(2, 6).unwrap() * 15.6).abs() < 1e-12);
}

#[test]
fn every_pair_equally_likely() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut sampler = SrsworSampler::new(6);
    let draws = 100_000;
    let mut counts = [[0usize; 6]; 6];
    for _ in 0..draws {
        let s = sampler.draw(2, &mut rng).unwrap();
        let (a, b) = (s[0].min(s[1]), s[0].max(s[1]));
        assert_ne!(a, b);
        counts[a][b] += 1;
    }
    let p = 1.0 / 15.0;
    let expected = draws as f64 * p;
    let sd = (draws as f64 * p * (1.0 - p)).sqrt();
    for a in 0..6 {
        for b in (a + 1)..6 {
            let c = counts[a][b] as f64;
            assert!((c - expected).abs() < 3.0 * sd, "({a},{b}): {c}");
        }
    }
}

#[test]
fn draws_are_distinct_and_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sampler = SrsworSampler::new(100);
    for n in [1, 7, 50, 100] {
        let mut s = sampler.draw(n, &mut rng).unwrap().to_vec();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), n);
        assert!(s.iter().all(|&i| i < 100));
    }
    assert!(sampler.draw(0, &mut rng).is_err());
    assert!(sampler.draw(101, &mut rng).is_err());
}

#[test]
fn sampler_history_does_not_leak() {
    let mut fresh = SrsworSampler::new(30);
    let mut used = SrsworSampler::new(30);
    let mut warm = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        used.draw(17, &mut warm).unwrap();
    }
    let a = fresh.draw(5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap().to_vec();
    let b = used.draw(5, &mut ChaCha8Rng::seed_from_u64(9)).unwrap().to_vec();
    assert_eq!(a, b);
}

#[test]
fn draw_srswor_returns_matching_values() {
    let pop = six();
    let s = draw_srswor(&pop, 3, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    for (k, &i) in s.indices.iter().enumerate() {
        assert_eq!(s.y[k], pop.y()[i]);
        assert_eq!(s.z[k], pop.z()[i]);
    }
    assert!(s.w.is_none());
}
