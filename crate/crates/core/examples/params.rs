//! Exact protocol parameters for given (N, gamma, r, k).
//!
//! cargo run --example params -- 4 3 4 2

use hgverify::derive_paper_params;

fn main() -> hgverify::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, gamma, r, k) = match args[..] {
        [n, g, r, k] => (n, g, r, k),
        _ => (4, 3, 4, 2),
    };
    let p = derive_paper_params(n, gamma, r, k)?;
    print!("{p}");
    match p.to_protocol_params().check_desk_executable() {
        Ok(()) => println!("desk executable"),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
