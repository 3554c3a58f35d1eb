fn main() {
    std::process::exit(spinqec::cli::run());
}
