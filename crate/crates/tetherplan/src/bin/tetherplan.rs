fn main() {
    std::process::exit(tetherplan::cli::run(std::env::args_os()));
}
