fn main() {
    std::process::exit(dindex_cli::main_with(std::env::args_os()));
}
