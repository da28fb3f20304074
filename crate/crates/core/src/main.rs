fn main() {
    std::process::exit(msrank::cli::main_with_args(std::env::args_os()));
}
