fn main() {
    std::process::exit(bufpart::cli::main());
}
