fn main() {
    std::process::exit(grovemaze::cli::main_with_args(std::env::args_os()));
}
