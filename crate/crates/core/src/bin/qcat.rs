fn main() {
    std::process::exit(qcat::cli::run(std::env::args_os()));
}
