use hawking_teleport::analysis;

fn main() {
    std::process::exit(analysis::cli_main(std::env::args_os()));
}
