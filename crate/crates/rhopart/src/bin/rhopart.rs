fn main() {
    std::process::exit(rhopart::cli::main());
}
