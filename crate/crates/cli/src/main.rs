fn main() {
    std::process::exit(cherednik_cli::run(std::env::args_os()));
}
