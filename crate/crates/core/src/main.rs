fn main() {
    std::process::exit(pagrowth::cli::run());
}
