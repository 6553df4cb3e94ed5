fn main() {
    std::process::exit(scinv::cli::run(std::env::args_os()));
}
