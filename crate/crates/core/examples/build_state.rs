//! Builds a hypergraph state and checks that every stabilizer fixes it.
//!
//! cargo run --example build_state -- "4\n0 1 2\n1 2 3"

use hgverify::state::{build_state, expectation_g};
use hgverify::Hypergraph;

fn main() -> hgverify::Result<()> {
    let text = std::env::args()
        .nth(1)
        .map(|s| s.replace("\\n", "\n"))
        .unwrap_or_else(|| "4\n0 1 2\n1 2 3".into());
    let h: Hypergraph = text.parse()?;
    let state = build_state(&h)?;

    println!("{} qubits, {} edges", h.num_vertices(), h.num_edges());
    for (x, a) in state.amplitudes().iter().enumerate().take(16) {
        let bits: String = (0..h.num_vertices()).map(|q| if x >> q & 1 == 1 { '1' } else { '0' }).collect();
        println!("  |{bits}>  {:+.4}", a.re);
    }
    for i in 0..h.num_vertices() {
        println!("<g_{i}> = {:+.12}", expectation_g(&state, &h, i)?);
    }
    Ok(())
}
