fn main() {
    std::process::exit(polyft::cli::run(std::env::args_os()));
}
