fn main() {
    std::process::exit(cist_core::cli::run(std::env::args_os()));
}
