fn main() {
    std::process::exit(pathsmell_cli::run(std::env::args_os()));
}
