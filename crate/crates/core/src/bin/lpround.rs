fn main() {
    std::process::exit(lp_rounding::cli::run());
}
