fn main() {
    std::process::exit(linfty_cli::main_with(std::env::args_os()));
}
