fn main() -> std::process::ExitCode {
    pointerlab::cli::main_with_args(std::env::args_os())
}
