fn main() {
    std::process::exit(pitt_lab::cli::main_with(std::env::args_os()));
}
