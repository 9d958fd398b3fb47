fn main() {
    std::process::exit(c0trans::cli::main());
}
