fn main() {
    std::process::exit(pshlab::cli::run(std::env::args_os()));
}
