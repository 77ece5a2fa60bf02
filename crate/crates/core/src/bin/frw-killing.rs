fn main() {
    std::process::exit(frw_killing::cli::run(std::env::args_os()));
}
