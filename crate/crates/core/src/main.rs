fn main() {
    std::process::exit(plrhc::cli::dispatch(std::env::args_os()));
}
