fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(zxdiff::cli::run(&argv));
}
