fn main() {
    std::process::exit(modcurves::cli_main());
}
