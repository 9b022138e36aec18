use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (text, code) = fclosure_cli::execute(std::env::args_os());
    if code == 1 {
        eprint!("{text}");
    } else {
        print!("{text}");
        let _ = std::io::stdout().flush();
    }
    ExitCode::from(code as u8)
}
