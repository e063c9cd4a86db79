fn main() {
    std::process::exit(gvdc_cli::run(std::env::args_os()));
}
