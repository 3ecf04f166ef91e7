fn main() {
    std::process::exit(supercohom::run(std::env::args_os()));
}
