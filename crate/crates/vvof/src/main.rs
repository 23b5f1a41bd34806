fn main() {
    std::process::exit(vvof::cli::run());
}
