fn main() {
    let (text, code) = qbraid_cli::run(std::env::args_os());
    println!("{text}");
    std::process::exit(code);
}
