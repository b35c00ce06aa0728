fn main() {
    std::process::exit(gronwall_lab::cli::run_cli(std::env::args_os()));
}
