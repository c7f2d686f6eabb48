fn main() {
    std::process::exit(patrol_cli::run(std::env::args_os()));
}
