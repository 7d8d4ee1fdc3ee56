fn main() {
    let (text, code) = polyptych_cli::main_with_args(std::env::args_os());
    print!("{text}");
    std::process::exit(code);
}
