fn main() {
    std::process::exit(kweb::cli::run(std::env::args()));
}
