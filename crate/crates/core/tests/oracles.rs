mod common;

use hgverify::hypergraph::{greedy_cover, union_jack, Hypergraph};
use hgverify::oracle::{self, DensityMatrix};
use hgverify::stabilizer::{syndrome_distribution, ClassChecker, Ensemble, NoisyState};
use hgverify::state::{
    build_state, expectation_g, fidelity, sample_noisy_state, BasisAssignment, MeasurementSampler, NoiseModel,
    StateVector,
};
use hgverify::stats::trial_rng;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
}

fn graphs() -> Vec<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut out: Vec<Hypergraph> = (0..12)
        .map(|i| common::random_hypergraph(&mut rng, 2 + i % 5, 4, 2 + i))
        .collect();
    out.push(common::twin_triangles());
    out.push(union_jack(1).unwrap().0);
    out
}

#[test]
fn dense_state_and_stabilizers_match_simulator() {
    for h in graphs() {
        let s = build_state(&h).unwrap();
        let dense = oracle::hypergraph_state(&h).unwrap();
        assert!(close(s.amplitudes(), &dense, 1e-12));
        let all: Vec<usize> = (0..h.num_vertices()).collect();
        let gs = oracle::stabilizers(&h, &all).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(h.num_edges() as u64);
        let v = StateVector::from_amplitudes(common::random_amplitudes(&mut rng, h.num_vertices())).unwrap();
        for (i, g) in gs.iter().enumerate() {
            let mut sim = v.clone();
            hgverify::state::apply_stabilizer(&mut sim, &h, i).unwrap();
            assert!(close(sim.amplitudes(), &g.apply(v.amplitudes()), 1e-12), "g_{i}");
            let rho = DensityMatrix::from_ensemble(&[(1.0, v.amplitudes().to_vec())]).unwrap();
            assert!((rho.expectation(g) - expectation_g(&v, &h, i).unwrap()).abs() < 1e-12);
        }
    }
}

/// Pearson statistic against the exact distribution, pooled over cells with
/// tiny expectation.
fn chi_square(counts: &[u64], probs: &[f64], samples: u64) -> (f64, usize) {
    let (mut stat, mut df) = (0.0, 0usize);
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(probs) {
        let e = p * samples as f64;
        if e < 5.0 {
            pooled_obs += c as f64;
            pooled_exp += e;
            continue;
        }
        stat += (c as f64 - e).powi(2) / e;
        df += 1;
    }
    if pooled_exp >= 5.0 {
        stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        df += 1;
    } else {
        assert!(pooled_obs <= pooled_exp + 10.0);
    }
    (stat, df.saturating_sub(1))
}

#[test]
fn measurement_frequencies_pass_chi_square() {
    const SAMPLES: u64 = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    // Survival probability of a 3σ normal tail.
    let alpha = 0.0027;
    for (idx, h) in graphs().into_iter().filter(|h| h.num_vertices() <= 6).enumerate() {
        let n = h.num_vertices();
        let states = [
            build_state(&h).unwrap(),
            StateVector::from_amplitudes(common::random_amplitudes(&mut rng, n)).unwrap(),
        ];
        for (si, s) in states.iter().enumerate() {
            let x_qubits: Vec<usize> = (0..n).filter(|q| (q + si + idx) % 2 == 0).collect();
            let basis = BasisAssignment::x_on(n, &x_qubits);
            let exact = oracle::outcome_distribution(s.amplitudes(), &x_qubits);
            let sampler = MeasurementSampler::new(s, &basis).unwrap();
            let mut counts = vec![0u64; 1 << n];
            for t in 0..SAMPLES {
                let bits = sampler.sample(&mut trial_rng(idx as u64 * 7 + si as u64, t));
                let x = bits.iter().enumerate().fold(0usize, |acc, (q, &b)| acc | usize::from(b) << q);
                counts[x] += 1;
            }
            let (stat, df) = chi_square(&counts, &exact, SAMPLES);
            if df == 0 {
                continue;
            }
            let critical = ChiSquared::new(df as f64).unwrap().inverse_cdf(1.0 - alpha);
            assert!(stat < critical, "graph {idx} state {si}: chi2 {stat} >= {critical} (df {df})");
        }
    }
}

#[test]
fn all_x_measurement_of_hypergraph_state_matches_brute_force() {
    let h = common::twin_triangles();
    let s = build_state(&h).unwrap();
    let all: Vec<usize> = (0..4).collect();
    let exact = oracle::outcome_distribution(s.amplitudes(), &all);
    let probs = s.basis_probabilities(&BasisAssignment::x_on(4, &all)).unwrap();
    for (a, b) in exact.iter().zip(&probs) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn syndrome_distribution_matches_dense_projectors() {
    let noise = NoiseModel {
        z_flip: 0.1,
        x_flip: 0.05,
        ..Default::default()
    };
    for h in graphs() {
        let cover = greedy_cover(&h);
        let noisy = NoisyState::new(&h, &noise).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let amps = common::random_amplitudes(&mut rng, h.num_vertices());
        let pure = StateVector::from_amplitudes(amps.clone()).unwrap();
        for l in 0..cover.num_classes() {
            let class = cover.class(l).unwrap();
            let from_split = syndrome_distribution(&pure, &h, class).unwrap();
            let rho = DensityMatrix::from_ensemble(&[(1.0, amps.clone())]).unwrap();
            for (mask, p) in from_split.iter().enumerate() {
                let bits: Vec<bool> = (0..class.len()).map(|k| mask >> k & 1 == 1).collect();
                let proj = oracle::syndrome_projector(&h, class, &bits).unwrap();
                assert!((rho.expectation(&proj) - p).abs() < 1e-10);
            }
            let dist = syndrome_distribution(&noisy, &h, class).unwrap();
            assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn maximally_mixed_syndromes_are_uniform() {
    let (h, cover) = union_jack(1).unwrap();
    let mixed = Ensemble::maximally_mixed(5);
    for l in 0..3 {
        let class = cover.class(l).unwrap();
        let dist = syndrome_distribution(&mixed, &h, class).unwrap();
        let want = 1.0 / dist.len() as f64;
        assert!(dist.iter().all(|p| (p - want).abs() < 1e-12));
    }
}

#[test]
fn z_flip_ensemble_fidelity_mean() {
    const SAMPLES: u64 = 100_000;
    let p = 0.07;
    for h in [common::twin_triangles(), union_jack(1).unwrap().0] {
        let n = h.num_vertices();
        let base = build_state(&h).unwrap();
        let noise = NoiseModel::z_flip(p);
        let total: f64 = (0..SAMPLES)
            .map(|t| fidelity(&sample_noisy_state(&h, &noise, &mut trial_rng(41, t)).unwrap(), &base).unwrap())
            .sum();
        let mean = total / SAMPLES as f64;
        let want = (1.0 - p).powi(n as i32);
        let sigma = (want * (1.0 - want) / SAMPLES as f64).sqrt();
        assert!((mean - want).abs() < 3.0 * sigma, "{mean} vs {want}");
    }
}

#[test]
fn class_checker_basis_is_x_on_class() {
    let (h, cover) = union_jack(1).unwrap();
    for l in 0..3 {
        let checker = ClassChecker::from_cover(&h, &cover, l).unwrap();
        let xs: Vec<usize> = checker.basis().x_qubits().collect();
        assert_eq!(xs, cover.class(l).unwrap());
    }
}
