fn main() {
    std::process::exit(medcorpus::cli::run(std::env::args_os()));
}
