fn main() {
    std::process::exit(ftc_core::cli::run(std::env::args_os()));
}
