fn main() {
    std::process::exit(feclab_cli::cli_main(std::env::args_os()));
}
