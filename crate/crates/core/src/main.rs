fn main() {
    std::process::exit(permabound::cli::run(std::env::args_os()));
}
