fn main() {
    std::process::exit(quarter_sampling::cli::run(std::env::args_os()));
}
