fn main() {
    std::process::exit(schemantic::cli::run());
}
