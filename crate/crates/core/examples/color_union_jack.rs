//! Colors Union Jack lattices greedily and exactly.

use hgverify::{exact_chromatic_number, greedy_cover, union_jack, validate_cover};

fn main() -> hgverify::Result<()> {
    for cells in 1..=4 {
        let (h, generated) = union_jack(cells)?;
        validate_cover(&h, &generated)?;
        let greedy = greedy_cover(&h);
        let exact = if h.num_vertices() <= 20 {
            exact_chromatic_number(&h, 20)?.gamma.map(|g| g.to_string())
        } else {
            None
        };
        println!(
            "L={cells}: n={:>2} edges={:>2} generator={} greedy={} exact={}",
            h.num_vertices(),
            h.num_edges(),
            generated.num_classes(),
            greedy.num_classes(),
            exact.as_deref().unwrap_or("-"),
        );
    }
    Ok(())
}
