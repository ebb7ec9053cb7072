//! One verifier run, printed group by group.

use hgverify::protocol::{run_verification, ProtocolParams, ProverModel};
use hgverify::stabilizer::CorrectableSet;
use hgverify::state::NoiseModel;
use hgverify::{exact_coloring, Hypergraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hgverify::Result<()> {
    let h: Hypergraph = "4\n0 1 2\n1 2 3".parse()?;
    let cover = exact_coloring(&h, 20)?;
    let params = ProtocolParams::desk(4, 3, 24, 3, 0.5, 2.0);
    let prover = ProverModel::IidNoisy { noise: NoiseModel::z_flip(0.03) };
    let t = run_verification(&h, &cover, &params, &prover, &CorrectableSet::Zero, &mut ChaCha8Rng::seed_from_u64(5))?;

    println!("threshold {:.3}, discarded {:?}, target register {}", t.threshold, t.discarded, t.target_register);
    for g in &t.groups {
        let rates: Vec<String> = g
            .counters
            .iter()
            .map(|c| format!("K{}={}/{}", c.vertex, c.passes, c.trials))
            .collect();
        println!("group {} classes {:?}: {}", g.group, g.classes, rates.join(" "));
    }
    println!("accepted: {}, target fidelity {:.4}", t.accepted, t.target_fidelity);
    Ok(())
}
