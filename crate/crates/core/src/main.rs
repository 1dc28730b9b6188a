fn main() {
    std::process::exit(remoteproj::cli::main());
}
