fn main() {
    std::process::exit(gazescore::cli::run(std::env::args_os()));
}
