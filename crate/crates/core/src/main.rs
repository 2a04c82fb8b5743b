fn main() {
    std::process::exit(hedonic::cli::run(std::env::args_os()));
}
