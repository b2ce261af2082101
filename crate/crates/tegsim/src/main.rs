fn main() {
    std::process::exit(tegsim::cli::run());
}
