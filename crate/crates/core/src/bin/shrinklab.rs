fn main() {
    std::process::exit(shrinklab::cli::run(std::env::args_os()));
}
