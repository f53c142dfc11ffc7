fn main() {
    std::process::exit(seclab_cli::main_with_args(std::env::args_os()));
}
