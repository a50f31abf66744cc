fn main() {
    std::process::exit(inqlab::cli::main_with_args(std::env::args_os()));
}
