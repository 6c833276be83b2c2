fn main() {
    std::process::exit(fourier_jacobi::cli::run(std::env::args_os()));
}
