fn main() {
    std::process::exit(dlvar::cli::run(std::env::args_os()));
}
