fn main() {
    std::process::exit(mzi_cli::run(std::env::args_os()));
}
