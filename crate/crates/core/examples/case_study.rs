//! Single-bad-copy adversary on the smallest Union Jack lattice.

use hgverify::protocol::{case_study_experiment, detectability_check, ProverModel, StateSpec};
use hgverify::stabilizer::CorrectableSet;
use hgverify::union_jack;

fn main() -> hgverify::Result<()> {
    let (h, cover) = union_jack(1)?;
    // One Z per class: the bad copy fails whichever test it lands in.
    let caught: Vec<usize> = cover.classes.iter().map(|c| c[0]).collect();
    let strong = ProverModel::SingleBadCopy { bad: StateSpec::ZError { qubits: caught } };
    let weak = ProverModel::SingleBadCopy { bad: StateSpec::ZError { qubits: vec![0] } };

    for k in [1, 2, 5] {
        let s = case_study_experiment(&h, &cover, k, &strong, &CorrectableSet::Zero, 50_000, k as u64)?;
        let w = case_study_experiment(&h, &cover, k, &weak, &CorrectableSet::Zero, 50_000, k as u64)?;
        println!(
            "k={k}: fooled {:.4} (1/(6k+1) = {:.4}), Z_0 only {:.4} ({}/{})",
            s.acceptance.estimate,
            s.fooling_probability,
            w.acceptance.estimate,
            4 * k + 1,
            6 * k + 1
        );
    }

    let alpha = 2.0 / 31.0;
    let d = detectability_check(&weak, &h, &cover, 5, alpha, &CorrectableSet::Zero, 20_000, 9)?;
    println!(
        "k=5 alpha={alpha:.4}: violations {:.4} <= alpha: {}, mean projection {:?} vs {:.4}",
        d.violations.estimate, d.significance_respected, d.mean_projection, d.trace_bound
    );
    Ok(())
}
