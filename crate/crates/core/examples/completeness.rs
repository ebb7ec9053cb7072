//! Honest acceptance against the Hoeffding-style lower bound.

use hgverify::protocol::{completeness_experiment, ProtocolParams};
use hgverify::stabilizer::CorrectableSet;
use hgverify::{exact_coloring, Hypergraph};

fn main() -> hgverify::Result<()> {
    let h: Hypergraph = "4\n0 1 2\n1 2 3".parse()?;
    let cover = exact_coloring(&h, 20)?;
    for k_j in [16, 64, 256] {
        let params = ProtocolParams::desk(4, 3, k_j, 2, 0.5, 2.0);
        let r = completeness_experiment(&h, &cover, &params, &CorrectableSet::Zero, 500, k_j)?;
        println!(
            "k_j={k_j:>3}: accept {:.3}, bound {:+.4}, threshold {:.2}, satisfied {}",
            r.acceptance.estimate, r.bound, r.threshold, r.satisfied
        );
    }
    Ok(())
}
