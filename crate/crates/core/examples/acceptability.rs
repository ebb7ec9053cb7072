//! Acceptance probability of the blocked schedule under i.i.d. Z noise.

use hgverify::stabilizer::{acceptability_probability, AcceptabilityMethod, CorrectableSet};
use hgverify::state::NoiseModel;
use hgverify::union_jack;

fn main() -> hgverify::Result<()> {
    let (h, cover) = union_jack(1)?;
    println!("p      k   S=0        S=w1");
    for p in [0.001, 0.01, 0.05] {
        for k in [1, 5, 20] {
            let noise = NoiseModel::z_flip(p);
            let zero = acceptability_probability(&noise, &h, &cover, &CorrectableSet::Zero, k, AcceptabilityMethod::Exact)?;
            let w1 = acceptability_probability(
                &noise,
                &h,
                &cover,
                &CorrectableSet::Weight { t: 1 },
                k,
                AcceptabilityMethod::Exact,
            )?;
            println!("{p:<6} {k:>2}   {:.6}   {:.6}", zero.value, w1.value);
        }
    }
    Ok(())
}
