fn main() {
    std::process::exit(adskit::cli::run(std::env::args_os()));
}
