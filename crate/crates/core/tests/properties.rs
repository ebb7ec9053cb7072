mod common;

use hgverify::hypergraph::{exact_chromatic_number, greedy_cover, validate_cover, Hypergraph};
use hgverify::protocol::{ProtocolParams, ProverModel, StateSpec, Verification};
use hgverify::stabilizer::{analytic_pass_probability, ClassChecker, CorrectableSet};
use hgverify::state::{build_state, fidelity, stabilizer_g, MeasurementSampler, NoiseModel, PhasePolynomial, StateVector};
use hgverify::stats::trial_rng;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hypergraph(max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_n, 0usize..12, any::<u64>()).prop_map(|(n, edges, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        common::random_hypergraph(&mut rng, n, 4, edges)
    })
}

fn distance(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stabilizers_fix_the_hypergraph_state(h in hypergraph(9)) {
        let s = build_state(&h).unwrap();
        for i in 0..h.num_vertices() {
            prop_assert!(distance(&stabilizer_g(&s, &h, i).unwrap(), &s) < 1e-10);
        }
    }

    #[test]
    fn phase_polynomial_matches_gate_construction(h in hypergraph(9)) {
        let a = PhasePolynomial::new(&h).unwrap().to_state().unwrap();
        prop_assert!(distance(&a, &build_state(&h).unwrap()) < 1e-12);
    }

    #[test]
    fn cz_gates_are_involutions_and_commute(h in hypergraph(7), seed in any::<u64>()) {
        let amps = common::random_amplitudes(&mut ChaCha8Rng::seed_from_u64(seed), h.num_vertices());
        let s = StateVector::from_amplitudes(amps).unwrap();
        let edges: Vec<Vec<usize>> = h.edges().map(<[usize]>::to_vec).collect();
        for e in &edges {
            let mut t = s.clone();
            t.apply_cz(e).unwrap();
            t.apply_cz(e).unwrap();
            prop_assert!(distance(&t, &s) < 1e-12);
        }
        let mut fwd = s.clone();
        let mut rev = s.clone();
        for e in &edges {
            fwd.apply_cz(e).unwrap();
        }
        for e in edges.iter().rev() {
            rev.apply_cz(e).unwrap();
        }
        prop_assert!(distance(&fwd, &rev) < 1e-12);
    }

    #[test]
    fn edge_list_and_json_round_trip(h in hypergraph(12)) {
        prop_assert_eq!(&Hypergraph::parse(&h.to_edge_list()).unwrap(), &h);
        let json = serde_json::to_string(&h).unwrap();
        prop_assert_eq!(&serde_json::from_str::<Hypergraph>(&json).unwrap(), &h);
    }

    #[test]
    fn chromatic_number_at_most_greedy(h in hypergraph(9)) {
        let greedy = greedy_cover(&h);
        prop_assert!(validate_cover(&h, &greedy).is_ok());
        let gamma = exact_chromatic_number(&h, 12).unwrap().gamma.unwrap();
        prop_assert!(gamma <= greedy.num_classes());
    }

    #[test]
    fn larger_correctable_sets_pass_more(h in hypergraph(7), l in 0usize..4) {
        let cover = greedy_cover(&h);
        let l = l % cover.num_classes();
        let noise = NoiseModel::z_flip(0.2);
        let state = hgverify::stabilizer::NoisyState::new(&h, &noise).unwrap();
        let mut last = 0.0;
        for t in 0..=3 {
            let s = if t == 0 { CorrectableSet::Zero } else { CorrectableSet::Weight { t } };
            let p = analytic_pass_probability(&state, &h, &cover, l, &s).unwrap();
            prop_assert!(p + 1e-12 >= last);
            last = p;
        }
    }

    /// `Z^x|H⟩` flags exactly the class vertices in `x`.
    #[test]
    fn z_errors_give_deterministic_syndromes(h in hypergraph(8), mask in any::<u16>(), seed in any::<u64>()) {
        let n = h.num_vertices();
        let qubits: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
        let state = StateSpec::ZError { qubits: qubits.clone() }.build(&h).unwrap();
        let cover = greedy_cover(&h);
        for l in 0..cover.num_classes() {
            let checker = ClassChecker::from_cover(&h, &cover, l).unwrap();
            let sampler = MeasurementSampler::new(&state, checker.basis()).unwrap();
            let out = checker.outcome(sampler.sample(&mut trial_rng(seed, l as u64)), &CorrectableSet::Zero);
            let want: Vec<usize> = checker.vertices().iter().copied().filter(|v| qubits.contains(v)).collect();
            prop_assert_eq!(out.syndrome.flagged(), want);
        }
    }
}

fn verification(prover: ProverModel, group: u64) -> Verification {
    let h = common::twin_triangles();
    let cover = hgverify::hypergraph::exact_coloring(&h, 20).unwrap();
    let params = ProtocolParams::desk(4, 3, group, 2, 0.5, 2.0);
    Verification::new(&h, &cover, &params, &prover, &CorrectableSet::Zero).unwrap()
}

fn prover() -> impl Strategy<Value = ProverModel> {
    prop_oneof![
        Just(ProverModel::Honest {}),
        (0.0..0.3f64).prop_map(|p| ProverModel::IidNoisy { noise: NoiseModel::z_flip(p) }),
        Just(ProverModel::SingleBadCopy { bad: StateSpec::ZError { qubits: vec![1] } }),
        Just(ProverModel::FixedState { state: StateSpec::ZSuperposition { patterns: vec![vec![], vec![0]] } }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transcripts_recount_and_replay(p in prover(), group in 1u64..12, master in any::<u64>(), index in 0u64..1000) {
        let v = verification(p, group);
        let a = v.run_trial(master, index).unwrap();
        prop_assert!(a.is_consistent());
        let b = v.run_trial(master, index).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a.target_fidelity));
    }

    /// Raising the threshold never turns a rejection into an acceptance.
    #[test]
    fn acceptance_is_monotone_in_threshold(p in prover(), master in any::<u64>(), lo in 0.0..1.0f64, gap in 0.0..0.5f64) {
        let h = common::twin_triangles();
        let cover = hgverify::hypergraph::exact_coloring(&h, 20).unwrap();
        let base = ProtocolParams::desk(4, 3, 6, 1, 0.5, 2.0);
        let run = |t: f64| {
            let params = base.clone().with_threshold(t);
            Verification::new(&h, &cover, &params, &p, &CorrectableSet::Zero).unwrap().run_trial(master, 0).unwrap()
        };
        let (low, high) = (run(lo), run((lo + gap).min(1.0)));
        prop_assert_eq!(&low.groups, &high.groups);
        prop_assert!(!high.accepted || low.accepted);
    }
}

#[test]
fn honest_and_noisy_fidelity_sanity() {
    let h = common::chain9();
    assert_eq!(exact_chromatic_number(&h, 20).unwrap().gamma, Some(3));
    let s = build_state(&h).unwrap();
    assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-12);
}
