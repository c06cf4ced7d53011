fn main() {
    std::process::exit(gjms_lab::run(std::env::args()));
}
