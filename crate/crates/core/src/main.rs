fn main() {
    std::process::exit(factfix::harness::cli_dispatch(std::env::args_os()));
}
