use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match nearcy_cli::run(std::env::args_os()) {
        Ok((report, path)) => {
            let text = report.to_json();
            match path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, text + "\n") {
                        eprintln!("cannot write {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => {
                    // a closed pipe is not worth a panic
                    let _ = writeln!(std::io::stdout(), "{text}");
                }
            }
            ExitCode::from(report.exit_status as u8)
        }
        Err(e) if e.info => {
            print!("{e}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
