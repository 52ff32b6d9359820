fn main() {
    std::process::exit(curvflow_cli::run(std::env::args().collect()));
}
