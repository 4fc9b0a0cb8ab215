fn main() {
    std::process::exit(bumpforge::cli::run(std::env::args_os()));
}
