fn main() {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = prymcoh::cli::run(&args, &mut out);
    std::process::exit(code);
}
