fn main() {
    std::process::exit(qcvstable::cli::main_with_args(std::env::args_os()));
}
