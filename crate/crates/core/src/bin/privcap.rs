fn main() {
    std::process::exit(privcap::cli::main());
}
