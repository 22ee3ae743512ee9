use std::io::{self, BufWriter};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout);
    let mut err = io::stderr();
    let code = kcube::cli::run(std::env::args_os(), &mut out, &mut err);
    drop(out);
    ExitCode::from(code as u8)
}
