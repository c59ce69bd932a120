use std::process::ExitCode;

use clap::Parser;
use hfslice::cli::{output_path, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            match &cli.output {
                Some(p) => {
                    let p = output_path(p);
                    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                        if let Err(e) = std::fs::create_dir_all(dir) {
                            eprintln!("error: {}: {e}", dir.display());
                            return ExitCode::from(2);
                        }
                    }
                    if let Err(e) = std::fs::write(&p, out) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{out}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
