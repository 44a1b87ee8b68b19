fn main() {
    std::process::exit(godeaux::cli::run(std::env::args_os()));
}
