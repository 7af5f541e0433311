use std::io;

fn main() {
    let code = lorenz_renorm_cli::run_from(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
