fn main() {
    std::process::exit(nlmc_cli::run(std::env::args_os()));
}
