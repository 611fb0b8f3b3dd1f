fn main() {
    std::process::exit(kuzalg::cli::run(std::env::args_os()));
}
