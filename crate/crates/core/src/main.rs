fn main() {
    std::process::exit(mapslice::cli::run_cli(std::env::args_os()));
}
