fn main() {
    std::process::exit(grouphull::cli::main());
}
