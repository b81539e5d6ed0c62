fn main() {
    std::process::exit(regmf_cli::run_from(std::env::args_os()));
}
