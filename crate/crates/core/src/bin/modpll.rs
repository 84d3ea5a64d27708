use std::io::Write;

use clap::Parser;
use modp_langlands::cli::{run, Cli};

fn main() {
    let out = run(&Cli::parse());
    let _ = writeln!(std::io::stdout(), "{}", out.render());
    std::process::exit(out.code);
}
