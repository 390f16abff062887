fn main() {
    std::process::exit(cyclores::cli::run(std::env::args_os()));
}
