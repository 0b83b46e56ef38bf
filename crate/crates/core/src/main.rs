fn main() {
    std::process::exit(hamming_qwalk::cli_runner::main_with_args(
        std::env::args_os(),
    ));
}
