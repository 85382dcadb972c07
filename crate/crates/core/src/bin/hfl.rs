fn main() {
    std::process::exit(hfl_core::cli::main());
}
