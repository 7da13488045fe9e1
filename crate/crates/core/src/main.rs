fn main() {
    std::process::exit(sidon_core::cli::run(std::env::args_os()));
}
