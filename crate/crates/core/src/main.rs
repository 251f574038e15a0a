fn main() {
    std::process::exit(freedegen::cli::main_with_args(std::env::args_os()));
}
