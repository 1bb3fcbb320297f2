fn main() -> std::process::ExitCode {
    lcft::cli::main()
}
