//! Monte Carlo color tests next to the exact pass probability.

use hgverify::protocol::StateSpec;
use hgverify::stabilizer::{analytic_pass_probability, run_color_test, CorrectableSet, NoisyState};
use hgverify::state::NoiseModel;
use hgverify::stats::{trial_rng, FrequencyEstimate};
use hgverify::union_jack;

fn main() -> hgverify::Result<()> {
    let (h, cover) = union_jack(1)?;
    let trials = 20_000;

    let specs = [
        ("|H>", StateSpec::Hypergraph {}),
        ("Z_0|H>", StateSpec::ZError { qubits: vec![0] }),
        ("(|H> + Z_0|H>)/sqrt2", StateSpec::ZSuperposition { patterns: vec![vec![], vec![0]] }),
    ];
    for (name, spec) in &specs {
        let state = spec.build(&h)?;
        for l in 0..cover.num_classes() {
            let passes = (0..trials)
                .filter(|&t| {
                    run_color_test(&state, &h, &cover, l, &CorrectableSet::Zero, &mut trial_rng(l as u64, t))
                        .map(|o| o.passed)
                        .unwrap_or(false)
                })
                .count() as u64;
            let est = FrequencyEstimate::new(passes, trials)?;
            let exact = analytic_pass_probability(&state, &h, &cover, l, &CorrectableSet::Zero)?;
            println!("{name:<22} class {l}: {:.4} [{:.4}, {:.4}] exact {exact:.4}", est.estimate, est.interval.0, est.interval.1);
        }
    }

    let noisy = NoisyState::new(&h, &NoiseModel::z_flip(0.05))?;
    for s in [CorrectableSet::Zero, CorrectableSet::Weight { t: 1 }] {
        let p = analytic_pass_probability(&noisy, &h, &cover, 0, &s)?;
        println!("z-flip 0.05, class 0, {s:?}: {p:.6}");
    }
    Ok(())
}
