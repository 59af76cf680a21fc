fn main() {
    std::process::exit(semunify::cli::main_from_env());
}
