fn main() {
    std::process::exit(ainf::cli::main_with(std::env::args_os()));
}
