fn main() {
    std::process::exit(cyclic_hw::cli::main_entry());
}
