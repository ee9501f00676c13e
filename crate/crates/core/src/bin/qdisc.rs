use std::io;

fn main() {
    let code = qdisc::cli::main_with(std::env::args_os(), &mut io::stdin(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
