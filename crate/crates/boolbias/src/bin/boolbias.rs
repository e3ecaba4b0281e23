fn main() {
    std::process::exit(boolbias::cli::main());
}
