fn main() {
    std::process::exit(migc::cli::main_exit());
}
