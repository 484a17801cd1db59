fn main() {
    std::process::exit(grover_rga::cli::main());
}
