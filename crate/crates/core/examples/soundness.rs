//! A fidelity-zero fixed-state prover against growing group sizes.

use hgverify::protocol::{soundness_experiment, ProtocolParams, ProverModel, StateSpec};
use hgverify::stabilizer::CorrectableSet;
use hgverify::union_jack;

fn main() -> hgverify::Result<()> {
    let (h, cover) = union_jack(1)?;
    let (a, b) = (cover.classes[0][0], cover.classes[1][0]);
    let prover = ProverModel::FixedState {
        state: StateSpec::ZSuperposition { patterns: vec![vec![a], vec![b]] },
    };
    let params = ProtocolParams::desk(h.num_vertices(), 3, 4, 2, 0.5, 2.0);
    let r = soundness_experiment(&h, &cover, &params, &[4, 16, 64], &prover, 0.5, &CorrectableSet::Zero, 20_000, 1)?;

    println!("per-test pass {:.3} vs threshold {:.3}", r.min_pass_probability, r.threshold);
    for row in &r.rows {
        println!(
            "k_j={:>2}: accept-with-bad-target {:.2e} (binomial bound {:.2e})",
            row.group_size, row.joint_bad_acceptance.estimate, row.binomial_bound
        );
    }
    println!("fidelity bound 1 - 1/(N*upsilon) = {:.4}, decreasing: {}", r.fidelity_bound, r.monotone_decreasing);
    Ok(())
}
