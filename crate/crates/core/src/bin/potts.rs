fn main() {
    std::process::exit(potts_interp::cli::main_with_args(std::env::args_os()));
}
