fn main() {
    std::process::exit(bethe3::cli::main_with_args(std::env::args_os()));
}
