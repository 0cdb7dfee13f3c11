use clap::Parser;
use reparam::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let (out, code) = execute(&cli);
    if code == 0 {
        print!("{out}");
    } else {
        // reports still go to stdout; a bare error line goes to stderr
        if out.starts_with("error:") {
            eprint!("{out}");
        } else {
            print!("{out}");
        }
    }
    std::process::exit(code);
}
