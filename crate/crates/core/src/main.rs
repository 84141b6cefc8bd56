fn main() {
    let code = upcycle_net::cli::run(std::env::args_os());
    std::process::exit(code);
}
