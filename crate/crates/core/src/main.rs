fn main() {
    std::process::exit(isss::cli::run(std::env::args_os()));
}
