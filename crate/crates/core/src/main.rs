fn main() {
    std::process::exit(choimap::cli::run(std::env::args_os()));
}
