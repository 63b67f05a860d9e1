fn main() {
    std::process::exit(mpsqaoa_cli::run(std::env::args_os()));
}
