fn main() {
    let (code, output) = slotgame::cli::run_cli(std::env::args_os());
    if code == slotgame::cli::EXIT_USAGE || code == slotgame::cli::EXIT_TYPE {
        eprint!("{output}");
    } else {
        print!("{output}");
    }
    std::process::exit(code);
}
