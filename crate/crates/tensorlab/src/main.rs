fn main() {
    std::process::exit(tensorlab::cli::run());
}
