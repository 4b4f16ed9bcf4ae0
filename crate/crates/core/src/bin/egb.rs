fn main() {
    std::process::exit(egraph_bindings::cli::run());
}
