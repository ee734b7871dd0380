fn main() {
    std::process::exit(fairdiv_cli::cli::main_entry());
}
