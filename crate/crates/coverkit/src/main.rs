fn main() {
    std::process::exit(coverkit::cli::main_entry());
}
