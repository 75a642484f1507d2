fn main() {
    std::process::exit(neurolds::cli::run(std::env::args_os()));
}
