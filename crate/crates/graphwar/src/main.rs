fn main() -> std::process::ExitCode {
    graphwar::cli::run(std::env::args_os())
}
