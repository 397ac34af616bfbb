fn main() {
    std::process::exit(qmeasure::cli::main_with_args(std::env::args_os()));
}
