fn main() {
    std::process::exit(bbs::cli::main_with_args(std::env::args_os()));
}
