fn main() {
    std::process::exit(stokes_transport::cli::cli_main(std::env::args_os()));
}
