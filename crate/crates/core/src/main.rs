fn main() {
    std::process::exit(gnss_sentry::cli::run(std::env::args_os()));
}
