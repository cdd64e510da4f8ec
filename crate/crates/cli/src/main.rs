fn main() {
    std::process::exit(toric_diamond_cli::run(std::env::args_os()));
}
