use dmqkd::simulator::symmetric_form_params;
use dmqkd::{run_protocol, symmetrize_covariance, Constellation, ProtocolConfig, PureLossChannel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-sample Kolmogorov-Smirnov statistic.
fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic Kolmogorov survival function `P(K > lambda)`.
fn kolmogorov_p(lambda: f64) -> f64 {
    let p: f64 = (1..=100)
        .map(|k| {
            let k = k as f64;
            let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
            2.0 * sign * (-2.0 * k * k * lambda * lambda).exp()
        })
        .sum();
    p.clamp(0.0, 1.0)
}

#[test]
fn phase_symmetrization_leaves_outcomes_unchanged() {
    let n = 100_000;
    let on = ProtocolConfig::new(8, 1.0, 0.5, n, 1.0, 21).unwrap();
    let off = ProtocolConfig {
        phase_symmetrize: false,
        seed: 22,
        ..on
    };
    let ys = |cfg: &ProtocolConfig| {
        run_protocol(cfg)
            .unwrap()
            .rounds
            .iter()
            .map(|r| r.y)
            .collect::<Vec<_>>()
    };
    let d = ks_statistic(ys(&on), ys(&off));
    let en = ((n * n) as f64 / (2 * n) as f64).sqrt();
    let p = kolmogorov_p((en + 0.12 + 0.11 / en) * d);
    assert!(p > 1e-3, "KS statistic {d}, p = {p}");
}

#[test]
fn ks_detects_a_shifted_sample() {
    let a: Vec<f64> = (0..2000).map(|i| i as f64 / 2000.0).collect();
    let b: Vec<f64> = a.iter().map(|x| x + 0.2).collect();
    assert!((ks_statistic(a, b) - 0.2).abs() < 1e-3);
}

#[test]
fn estimators_agree_with_analytic_statistics() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..5u64 {
        let eta = rng.random_range(0.05..1.0);
        let n_s = rng.random_range(0.1..4.0);
        let m = rng.random_range(2..=24);
        let cfg = ProtocolConfig::new(m, n_s, eta, 100_000, 1.0, 100 + trial).unwrap();
        let e = run_protocol(&cfg).unwrap().estimates;
        let exact = PureLossChannel::new(eta)
            .unwrap()
            .analytic_stats(&Constellation::new(m, n_s).unwrap());
        for (name, got, want, se) in [
            ("g11", e.g11, exact.g11, e.g11_se),
            ("g12", e.g12, exact.g12, e.g12_se),
            ("g22", e.g22, exact.g22, e.g22_se),
        ] {
            assert!(
                (got - want).abs() < 5.0 * se,
                "{name} at eta={eta}, n_s={n_s}, m={m}: {got} vs {want} (se {se})"
            );
        }
    }
}

#[test]
fn symmetrized_sample_covariance_has_no_cross_correlation() {
    let cfg = ProtocolConfig::new(16, 1.0, 0.5, 100_000, 1.0, 5).unwrap();
    let rec = run_protocol(&cfg).unwrap();
    let sym = symmetrize_covariance(&rec.phase_space_covariance).unwrap();
    let (a, b, c2, c1) = symmetric_form_params(&sym).unwrap();
    // prepare-and-measure values: a = 2 N_S, b = 2 eta N_S + 1, c2 = 2 sqrt(eta) N_S
    assert!((a - 2.0).abs() < 0.05, "a = {a}");
    assert!((b - 2.0).abs() < 0.05, "b = {b}");
    assert!((c2 - 2.0 * 0.5f64.sqrt()).abs() < 0.05, "c2 = {c2}");
    assert!(c1.abs() < 0.02, "c1 = {c1}");
}

#[test]
fn estimation_uses_a_prefix_of_the_rounds() {
    let full = run_protocol(&ProtocolConfig::new(4, 1.0, 0.3, 5_000, 1.0, 9).unwrap()).unwrap();
    let part = run_protocol(&ProtocolConfig::new(4, 1.0, 0.3, 5_000, 0.2, 9).unwrap()).unwrap();
    assert_eq!(full.rounds, part.rounds);
    let prefix = run_protocol(&ProtocolConfig::new(4, 1.0, 0.3, 1_000, 1.0, 9).unwrap()).unwrap();
    assert_eq!(prefix.rounds[..], full.rounds[..1_000]);
    assert_eq!(prefix.estimates, part.estimates);
}
