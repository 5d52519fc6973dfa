fn main() {
    std::process::exit(commfind::cli::main());
}
