fn main() {
    std::process::exit(cube_constants::cli::main());
}
