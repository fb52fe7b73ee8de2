fn main() {
    let code = closest_substring::cli::run(std::env::args_os());
    std::process::exit(code);
}
