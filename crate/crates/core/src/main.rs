fn main() {
    let (code, out) = ganz::cli::run(std::env::args_os());
    if code == ganz::cli::EXIT_USAGE {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
