fn main() {
    std::process::exit(hgverify::cli::main());
}
