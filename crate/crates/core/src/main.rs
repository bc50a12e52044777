fn main() {
    std::process::exit(cissa::cli::cli_main(std::env::args_os()));
}
