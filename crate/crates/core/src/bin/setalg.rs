fn main() {
    std::process::exit(setalg::cli::run(std::env::args_os()));
}
