fn main() {
    std::process::exit(scanplan_cli::run(std::env::args_os()));
}
