fn main() {
    let code = orbitkit::cli::run(std::env::args_os());
    std::process::exit(code);
}
