fn main() {
    std::process::exit(tractor_bgg::cli::run());
}
