fn main() {
    std::process::exit(emolex::cli::main_with_args(std::env::args_os()));
}
