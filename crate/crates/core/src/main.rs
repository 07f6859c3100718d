fn main() {
    std::process::exit(stable_polygons::cli::run(std::env::args_os()));
}
