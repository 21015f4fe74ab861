fn main() {
    std::process::exit(brillouin::cli::run(std::env::args_os()));
}
