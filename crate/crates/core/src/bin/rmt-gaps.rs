fn main() {
    std::process::exit(rmt_gaps::cli::main());
}
