fn main() {
    std::process::exit(polypart::cli::main());
}
