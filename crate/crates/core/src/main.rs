fn main() {
    std::process::exit(schurkit::cli::run(std::env::args_os()));
}
