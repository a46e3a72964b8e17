fn main() {
    std::process::exit(naesat::cli::run());
}
