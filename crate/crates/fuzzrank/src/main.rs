fn main() -> std::process::ExitCode {
    fuzzrank::cli::main()
}
