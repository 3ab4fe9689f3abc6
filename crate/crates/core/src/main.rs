fn main() {
    std::process::exit(c2ext::cli::run(std::env::args_os()));
}
