fn main() {
    std::process::exit(memsat::cli::main_with_args(std::env::args_os()));
}
