fn main() {
    std::process::exit(bugvec::cli::main_with_args(std::env::args_os()));
}
