fn main() {
    if let Err(e) = lowband::cli::run(std::env::args().skip(1)) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
