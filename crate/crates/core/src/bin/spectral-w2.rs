fn main() {
    std::process::exit(spectral_w2::cli::run(std::env::args_os()));
}
