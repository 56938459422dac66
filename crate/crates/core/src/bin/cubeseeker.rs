fn main() {
    std::process::exit(cubeseeker::cli::run(std::env::args_os()));
}
