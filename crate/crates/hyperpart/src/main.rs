fn main() {
    std::process::exit(hyperpart::cli::main_with_args(std::env::args_os()));
}
