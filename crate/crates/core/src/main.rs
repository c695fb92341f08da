fn main() {
    std::process::exit(sdperc::cli::run(std::env::args_os()));
}
