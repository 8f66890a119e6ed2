use std::process::exit;

fn main() {
    exit(riccati::cli::cli_main(std::env::args_os()));
}
