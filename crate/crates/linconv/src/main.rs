fn main() {
    std::process::exit(linconv::cli::run(std::env::args_os()));
}
