fn main() {
    std::process::exit(groundsound::cli::main_entry(std::env::args_os()));
}
