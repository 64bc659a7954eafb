fn main() {
    std::process::exit(tautrel::cli::run());
}
