use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = oscover_cli::run(std::env::args_os());
    print!("{}", result.stdout());
    let _ = std::io::stdout().flush();
    for d in &result.diagnostics {
        let line = serde_json::to_string(d).expect("diagnostics serialize");
        eprintln!("{line}");
    }
    ExitCode::from(result.exit_code() as u8)
}
