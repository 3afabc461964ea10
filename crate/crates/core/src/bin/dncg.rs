fn main() {
    std::process::exit(dnc_graphene::cli::run(std::env::args_os()).into());
}
