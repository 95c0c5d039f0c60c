fn main() {
    std::process::exit(bounded_orbit::cli::run(std::env::args_os()));
}
