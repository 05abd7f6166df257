fn main() {
    std::process::exit(dgl::cli::run(std::env::args_os()));
}
