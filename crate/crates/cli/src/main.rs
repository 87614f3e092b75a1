fn main() {
    std::process::exit(mprod_cli::cli_main(std::env::args_os()));
}
