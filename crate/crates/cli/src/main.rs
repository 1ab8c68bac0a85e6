fn main() {
    std::process::exit(wcauchy_cli::run(std::env::args_os()));
}
